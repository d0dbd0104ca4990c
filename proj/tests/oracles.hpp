// Independent reference computations shared by the tests.
#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Integral of f over each [edges(i), edges(i+1)], normalized to sum 1.
template <typename F>
Eigen::ArrayXd bin_probabilities(F&& f, const Eigen::ArrayXd& edges) {
  using Q = boost::math::quadrature::gauss_kronrod<double, 61>;
  Eigen::ArrayXd p(edges.size() - 1);
  for (Eigen::Index i = 0; i + 1 < edges.size(); ++i)
    p(i) = Q::integrate(f, edges(i), edges(i + 1), 4, 1e-13);
  return p / p.sum();
}

/// Pearson statistic and survival probability, written out by hand.
struct Pearson {
  double statistic;
  int dof;
  double p;
};

inline Pearson pearson(const Eigen::ArrayXd& observed, const Eigen::ArrayXd& probabilities) {
  const double n = observed.sum();
  double stat = 0.0;
  int used = 0;
  for (Eigen::Index i = 0; i < observed.size(); ++i) {
    const double e = n * probabilities(i);
    if (e <= 0.0) continue;
    stat += (observed(i) - e) * (observed(i) - e) / e;
    ++used;
  }
  const boost::math::chi_squared dist(used - 1);
  return {stat, used - 1, boost::math::cdf(boost::math::complement(dist, stat))};
}

/// Two-slit intensity from the raw paraxial path phases in long double,
/// without the closed-form phase difference.
inline double two_slit_raw(double lambda, double d, double a, double L, std::complex<double> p1,
                           std::complex<double> p2, double x) {
  using ld = long double;
  const ld k = 2.0L * std::numbers::pi_v<ld> / ld(lambda);
  const ld X = x, D = d, LL = L;
  const ld r1 = LL + (X - D / 2) * (X - D / 2) / (2 * LL);
  const ld r2 = LL + (X + D / 2) * (X + D / 2) / (2 * LL);
  const ld u = k * ld(a) * X / (2 * LL);
  const ld env = u == 0 ? 1.0L : std::sin(u) / u;
  const std::complex<ld> f = env * (std::complex<ld>(p1) * std::polar(1.0L, k * r1) +
                                    std::complex<ld>(p2) * std::polar(1.0L, k * r2));
  return static_cast<double>(std::norm(f));
}

/// sin(u)/u with u = pi a x / (lambda L).
inline double sinc_envelope(double lambda, double a, double L, double x) {
  const double u = pi * a * x / (lambda * L);
  return u == 0.0 ? 1.0 : std::sin(u) / u;
}

}  // namespace oracle
