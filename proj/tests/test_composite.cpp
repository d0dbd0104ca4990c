#include "oracles.hpp"

#include "twopath/analysis.hpp"
#include "twopath/composite.hpp"

#include <doctest.h>

#include <random>

using namespace twopath;

namespace {

StateVector random_state(std::mt19937_64& gen, Eigen::Index dim) {
  std::normal_distribution<double> n;
  Eigen::VectorXcd v(dim);
  for (auto& c : v) c = {n(gen), n(gen)};
  return StateVector(v);
}

CompositeState with_overlaps(std::optional<double> internal, std::optional<double> detector) {
  CompositeState st;
  if (internal) {
    auto [a, b] = overlapping_pair(*internal);
    st.branches[0].internal = a;
    st.branches[1].internal = b;
  }
  if (detector) {
    auto [a, b] = overlapping_pair(*detector);
    st.branches[0].detector = a;
    st.branches[1].detector = b;
  }
  return st;
}

Eigen::ArrayXd grid() { return ScreenGridd{}.points(); }

}  // namespace

TEST_CASE("state vectors are normalized") {
  std::mt19937_64 gen(1);
  for (Eigen::Index dim = 1; dim <= 5; ++dim)
    CHECK(random_state(gen, dim).components().norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(StateVector(Eigen::VectorXcd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(StateVector(Eigen::VectorXcd(0)), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::basis(2, 2), std::invalid_argument);
  CHECK(StateVector().trivial());
}

TEST_CASE("inner product") {
  const auto e1 = StateVector::basis(2, 0), e2 = StateVector::basis(2, 1);
  CHECK(inner(e1, e1) == std::complex<double>(1.0));
  CHECK(inner(e1, e2) == std::complex<double>(0.0));
  const StateVector plus(Eigen::Vector2cd(1.0, 1.0));
  CHECK(std::abs(inner(plus, e1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS((void)inner(e1, StateVector::basis(3, 0)), std::invalid_argument);

  // conjugate-linear in the first slot, bounded by 1
  std::mt19937_64 gen(2);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_state(gen, 3), b = random_state(gen, 3);
    CHECK(std::abs(inner(a, b)) <= 1.0 + 1e-12);
    CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-14);
    const std::complex<double> manual = (a.components().conjugate().array() * b.components().array()).sum();
    CHECK(std::abs(inner(a, b) - manual) < 1e-14);
  }
  for (const double m : {0.0, 0.3, 1.0}) {
    const auto [a, b] = overlapping_pair(m, 0.7);
    CHECK(std::abs(inner(a, b) - std::polar(m, 0.7)) < 1e-15);
  }
}

TEST_CASE("orthogonal detector states remove the fringe term exactly") {
  for (const auto internal : {std::optional<double>{}, std::optional<double>{1.0}}) {
    auto st = with_overlaps(internal, 0.0);
    st.branches[1].extra_phase = 0.9;
    const auto xs = grid();
    const auto I = literal_pattern(st, xs);
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const auto psi = slit_fields(st.geometry, st.beam, xs(i));
      CHECK(I(i) == std::norm(psi[0]) + std::norm(psi[1]));
    }
  }
}

TEST_CASE("orthogonal internal states without a detector also remove the fringe term") {
  const auto st = with_overlaps(0.0, std::nullopt);
  const auto t = fringe_terms(st, grid(), PatternConvention::literal);
  CHECK((t.cross == std::complex<double>(0.0)).all());
  // the measurement-mediated convention keeps the fringes
  const auto m = fringe_terms(st, grid(), PatternConvention::measurement_mediated);
  CHECK(m.cross.abs().maxCoeff() > 1.0);
}

TEST_CASE("identical freedoms reproduce the two-slit intensity") {
  const auto xs = grid();
  for (const auto& st : {CompositeState{}, with_overlaps(1.0, 1.0), with_overlaps(1.0, std::nullopt)}) {
    const auto I = literal_pattern(st, xs);
    const auto ref = two_slit_intensity(st.geometry, st.beam, xs);
    CHECK(((I - ref).abs() <= 1e-12 * ref.abs().max(1e-3)).all());
  }
}

TEST_CASE("visibility equals the real overlap product") {
  for (const double gamma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    // split the product between the two freedoms
    const auto st = with_overlaps(std::sqrt(gamma), std::sqrt(gamma));
    const double lobe = st.geometry.central_lobe_half_width(st.beam);
    // divide out the single-slit envelope so extrema compare like with like
    const auto v = profile_visibility(
        [&](double x) {
          const double A = oracle::sinc_envelope(st.beam.wavelength, st.geometry.slit_width,
                                                 st.geometry.screen_distance, x);
          return literal_pattern(st, x) / (A * A);
        },
        -0.9 * lobe, 0.9 * lobe);
    CAPTURE(gamma);
    if (gamma == 0.0) {
      // no fringes: the normalized profile is flat
      CHECK((!v.value || *v.value < 1e-9));
    } else {
      REQUIRE(v.value);
      CHECK(*v.value == doctest::Approx(gamma).epsilon(1e-9));
    }
    CHECK(local_visibility(st, 0.0123) == doctest::Approx(gamma).epsilon(1e-12));
  }
}

TEST_CASE("literal pattern is the squared norm of the composite vector and never negative") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0), mag(0.0, 2.0);
  std::uniform_int_distribution<int> dim(1, 4);
  const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(257, -0.25, 0.25);
  for (int trial = 0; trial < 40; ++trial) {
    CompositeState st;
    st.geometry.slit_amplitudes = {std::polar(mag(gen), u(gen)), std::polar(mag(gen), u(gen))};
    const int di = dim(gen), dd = dim(gen);
    for (auto& b : st.branches) {
      b.internal = random_state(gen, di);
      b.detector = random_state(gen, dd);
      b.extra_phase = u(gen);
      b.com_scale = std::polar(mag(gen) + 0.1, u(gen));
    }
    const auto I = literal_pattern(st, xs);
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const double norm2 = composite_vector(st, xs(i)).squaredNorm();
      CHECK(I(i) >= -1e-15);
      CHECK(std::abs(I(i) - norm2) <= 1e-12 * std::max(1.0, norm2));
    }
  }
}

TEST_CASE("dephase") {
  const auto st = with_overlaps(0.8, std::nullopt);
  RngStream rng(4, 0);
  CHECK(dephase(st, PhaseNoise{}, rng) == st);

  PhaseNoise c;
  c.kind = PhaseNoise::Kind::constant;
  c.value = 1.234;
  const auto shifted = dephase(st, c, rng);
  CHECK(shifted.branches[0].extra_phase == 1.234);
  CHECK(shifted.branches[1].extra_phase == 1.234);
  CHECK((literal_pattern(shifted, grid()) == literal_pattern(st, grid())).all());

  PhaseNoise bad;
  bad.kind = PhaseNoise::Kind::uniform;
  bad.low = 1.0;
  bad.high = 0.0;
  CHECK_THROWS_AS((void)dephase(st, bad, rng), std::invalid_argument);
  bad.kind = PhaseNoise::Kind::gaussian;
  bad.sigma = -1.0;
  CHECK_THROWS_AS((void)dephase(st, bad, rng), std::invalid_argument);
}

TEST_CASE("a shared random phase leaves the pattern unchanged") {
  const auto st = with_overlaps(0.6, 1.0);
  const auto ref = literal_pattern(st, grid());
  RngStream rng(8, 0);
  for (const auto kind : {PhaseNoise::Kind::uniform, PhaseNoise::Kind::gaussian}) {
    PhaseNoise n;
    n.kind = kind;
    n.low = -2.0;
    n.high = 5.0;
    n.sigma = 3.0;
    n.independent_per_branch = false;
    for (int i = 0; i < 20; ++i) {
      const auto I = literal_pattern(dephase(st, n, rng), grid());
      CHECK(((I - ref).abs() <= 1e-12 * ref.max(1e-3)).all());
    }
  }
}

TEST_CASE("uniform phases average out") {
  PhaseNoise n;
  n.kind = PhaseNoise::Kind::uniform;
  n.low = 0.0;
  n.high = 2 * oracle::pi;
  RngStream rng(12, 0);
  const int N = 1000000;
  std::complex<double> sum{0.0};
  for (int i = 0; i < N; ++i) sum += std::polar(1.0, draw_phases(n, rng)[0]);
  CHECK(std::abs(sum / double(N)) < 0.005);
}

TEST_CASE("ensemble pattern") {
  const auto st = with_overlaps(std::nullopt, std::nullopt);
  const auto xs = grid();
  RngStream rng(1, 1);
  CHECK_THROWS_AS((void)ensemble_pattern(st, PhaseNoise{}, 0, rng, xs), std::invalid_argument);
  CHECK((ensemble_pattern(st, PhaseNoise{}, 7, rng, xs) == literal_pattern(st, xs)).all());

  // averaging the phase factor equals averaging explicit per-draw profiles
  PhaseNoise n;
  n.kind = PhaseNoise::Kind::gaussian;
  n.sigma = 1.5;
  RngStream a(3, 0), b(3, 0);
  const auto fast = ensemble_pattern(st, n, 200, a, xs);
  Eigen::ArrayXd slow = Eigen::ArrayXd::Zero(xs.size());
  for (int k = 0; k < 200; ++k) slow += literal_pattern(dephase(st, n, b), xs);
  slow /= 200.0;
  CHECK(((fast - slow).abs() <= 1e-12 * slow.max(1e-3)).all());
}

TEST_CASE("ensemble contrast under uniform phase noise") {
  const CompositeState st;
  // I(0) = direct(0) + |cross(0)| Re<z>, I(x_q) = direct + |cross| Im-part at a quarter period
  const double x0 = 0.0;
  const double xq = 0.25 * st.geometry.fringe_period(st.beam);
  const Eigen::ArrayXd xs = (Eigen::ArrayXd(2) << x0, xq).finished();
  const auto terms = fringe_terms(st, xs, PatternConvention::literal);
  auto contrast = [&](const Eigen::ArrayXd& I) {
    const std::complex<double> c0 = terms.cross(0), cq = terms.cross(1);
    // solve Re[c0 z] and Re[cq z] for z
    Eigen::Matrix2d m;
    m << c0.real(), -c0.imag(), cq.real(), -cq.imag();
    const Eigen::Vector2d rhs(I(0) - terms.direct(0), I(1) - terms.direct(1));
    const Eigen::Vector2d z = m.colPivHouseholderQr().solve(rhs);
    return z.norm();
  };

  PhaseNoise full;
  full.kind = PhaseNoise::Kind::uniform;
  full.high = 2 * oracle::pi;
  RngStream r1(21, 0);
  CHECK(contrast(ensemble_pattern(st, full, 100000, r1, xs)) < 0.05);

  PhaseNoise half;
  half.kind = PhaseNoise::Kind::uniform;
  half.low = -oracle::pi / 2;
  half.high = oracle::pi / 2;
  RngStream r2(22, 0);
  const double c = contrast(ensemble_pattern(st, half, 1000000, r2, xs));
  CHECK(std::abs(c - 4 / (oracle::pi * oracle::pi)) < 0.01);
}
