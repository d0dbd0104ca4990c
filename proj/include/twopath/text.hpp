#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>

namespace twopath::text {

/// Shortest decimal form that parses back to the same double.
[[nodiscard]] std::string format_double(double v);
/// "re" when the imaginary part is zero, otherwise "(re,im)".
[[nodiscard]] std::string format_complex(std::complex<double> v);

/// Whole-string parse; nullopt on any trailing garbage.
[[nodiscard]] std::optional<double> parse_double(std::string_view s);
[[nodiscard]] std::optional<long long> parse_integer(std::string_view s);
[[nodiscard]] std::optional<std::complex<double>> parse_complex(std::string_view s);
[[nodiscard]] std::optional<bool> parse_bool(std::string_view s);

[[nodiscard]] std::string_view trim(std::string_view s);

}  // namespace twopath::text
