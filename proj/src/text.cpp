#include "twopath/text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace twopath::text {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

std::string format_complex(std::complex<double> v) {
  if (v.imag() == 0.0) return format_double(v.real());
  return "(" + format_double(v.real()) + "," + format_double(v.imag()) + ")";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long long> parse_integer(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::complex<double>> parse_complex(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    const auto inner = s.substr(1, s.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    const auto re = parse_double(inner.substr(0, comma));
    const auto im = parse_double(inner.substr(comma + 1));
    if (!re || !im) return std::nullopt;
    return std::complex<double>(*re, *im);
  }
  if (const auto re = parse_double(s)) return std::complex<double>(*re, 0.0);
  return std::nullopt;
}

std::optional<bool> parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true") return true;
  if (s == "false") return false;
  return std::nullopt;
}

}  // namespace twopath::text
