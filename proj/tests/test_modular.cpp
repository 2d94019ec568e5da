#include <doctest.h>

#include <random>

#include "mlf/modular.hpp"

using namespace mlf;

namespace {
double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

IntervalFamily three_arcs() { return IntervalFamily::general({{-2.0, -1.2}, {-0.3, 0.4}, {1.0, 2.5}}); }
}  // namespace

TEST_CASE("interval families are validated") {
  CHECK_THROWS_AS(IntervalFamily::general({{0.1, 0.5}, {0.4, 0.9}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalFamily::general({{0.1, 0.5}, {0.5, 0.9}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalFamily::general({{2.0, 3.2}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalFamily::general({}), std::invalid_argument);
  // even n: an arc around 1 has a partner around -1
  CHECK_THROWS_AS(IntervalFamily::symmetric(2, -0.3, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(IntervalFamily::symmetric(3, 0.0, 2.5), std::invalid_argument);
  auto f = IntervalFamily::general({{1.0, 2.0}, {-0.5, 0.2}});
  CHECK(f.arcs()[0].first == -0.5);
  auto s = IntervalFamily::symmetric(3, -0.2, 0.3);
  CHECK(s.is_symmetric());
  CHECK(s.arcs()[2].first == doctest::Approx(-0.2));
}

TEST_CASE("uniformizer maps intervals to the positive half line") {
  auto f = IntervalFamily::general({{-0.6, 0.8}});
  CHECK(X_of_z(f, CirclePoint::from_phase(0.1)) > 0);
  CHECK(X_of_z(f, CirclePoint::from_phase(2.0)) < 0);
  CHECK(X_of_z(f, CirclePoint::from_phase(-1.5)) < 0);
  auto g = three_arcs();
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(uniformizer(g, g.u(k).z())) < 1e-14);
    auto [a, b] = g.arcs()[k];
    double prev = 0;
    for (int i = 1; i < 20; ++i) {
      const double x = X_of_z(g, CirclePoint::from_phase(a + (b - a) * i / 20.0));
      CHECK(x > prev);
      prev = x;
    }
  }
  CHECK(X_of_z(g, CirclePoint::from_phase(0.7)) < 0);
  CHECK_THROWS_AS(uniformizer(g, g.v(1).z()), std::domain_error);
}

TEST_CASE("symmetric uniformizer is a function of z^n") {
  for (int n : {2, 3, 5}) {
    const double a = 0.1, b = 0.1 + 1.5 / n;
    auto f = IntervalFamily::symmetric(n, a, b);
    const cplx u = std::polar(1.0, n * a), v = std::polar(1.0, n * b), sgn = (n % 2 == 0) ? 1.0 : -1.0;
    for (double t : {0.05, 0.2, 1.4, -2.0}) {
      const cplx Z = std::polar(1.0, n * t);
      const cplx closed = -(sgn - v) / (sgn - u) * (Z - u) / (Z - v);
      CHECK(std::abs(uniformizer(f, std::polar(1.0, t)) - closed) < 1e-12 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST_CASE("preimages") {
  auto g = three_arcs();
  for (double X : {1e-3, 0.2, 1.0, 7.0, 1e3}) {
    auto p = preimages(g, X);
    REQUIRE(p.size() == 3);
    for (int k = 0; k < 3; ++k) {
      CHECK(g.locate(p[k].theta) == k);
      CHECK(X_of_z(g, CirclePoint(p[k].z)) == doctest::Approx(X).epsilon(1e-10));
      const double h = 1e-6 * X;
      const double fd = (preimages(g, X + h)[k].theta - preimages(g, X - h)[k].theta) / (2 * h);
      CHECK(p[k].theta_prime == doctest::Approx(fd).epsilon(1e-6));
      CHECK(std::abs(p[k].sqrt_z_prime * p[k].sqrt_z_prime - p[k].z_prime) < 1e-12 * std::abs(p[k].z_prime));
    }
  }
  CHECK_THROWS_AS(preimages(g, 0.0), std::domain_error);
  CHECK_THROWS_AS(preimages(g, -1.0), std::domain_error);

  auto s = IntervalFamily::symmetric(4, 0.2, 0.9);
  auto q = preimages(s, 2.5);
  const cplx omega = std::polar(1.0, kPi / 2);
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(q[k - 1].z - std::pow(omega, k) * q[3].z) < 1e-12);
}

TEST_CASE("mixing kernel") {
  auto g = three_arcs();
  const Eigen::MatrixXd K = K_of_X(g, 0.7);
  CHECK(max_abs(K + K.transpose()) < 1e-12);
  for (int k = 0; k < 3; ++k) CHECK(K(k, k) == 0.0);
  auto p = preimages(g, 0.7);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      if (j != k) {
        const double alt = kPi * std::sqrt(p[k].theta_prime * p[j].theta_prime) / std::sin((p[k].theta - p[j].theta) / 2);
        CHECK(K(k, j) == doctest::Approx(alt).epsilon(1e-12));
      }
  // principal roots differ from the real branch by signs only
  const Eigen::MatrixXcd Kp = K_of_X_principal(g, 0.7);
  CHECK((Kp.cwiseAbs() - K.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(K_of_X(IntervalFamily::general({{-1.0, 1.0}}), 3.0)(0, 0) == 0.0);
}

TEST_CASE("symmetric kernel is constant in the angle") {
  for (int n : {2, 3, 4}) {
    auto f = IntervalFamily::symmetric(n, 0.2, 0.2 + 2.0 / n);
    ModularGeometry g(f);
    const Eigen::MatrixXcd Kc = symmetric_K(n);
    for (double X : {0.3, 1.0, 4.0}) {
      const auto p = preimages(f, X);
      const Eigen::MatrixXd D = g.branch_signs(X).asDiagonal();
      // -(1/2 pi) K(X) dX = D K_c D dz / z
      const Eigen::MatrixXcd lhs = -K_of_X(f, X) / (2.0 * kPi);
      const Eigen::MatrixXcd rhs = D * Kc * D * (p[n - 1].z_prime / p[n - 1].z);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("constant kernel and its diagonalizer") {
  const Eigen::MatrixXcd K2 = symmetric_K(2);
  CHECK(std::abs(K2(0, 1) - cplx(0, -0.5)) < 1e-15);
  CHECK(std::abs(K2(1, 0) - cplx(0, 0.5)) < 1e-15);
  CHECK(symmetric_K(1).cwiseAbs().maxCoeff() == 0.0);
  const auto bm = B_and_M(3);
  CHECK(bm.m(0) == 1.0);
  CHECK(bm.m(1) == 0.0);
  CHECK(bm.m(2) == -1.0);
  for (int n = 1; n <= 8; ++n) {
    const auto c = diagonalizer_check(n);
    CHECK(c.intertwining <= 1e-12);
    CHECK(c.spectrum <= 1e-10);
    CHECK(c.unitarity <= 1e-12);
    const Eigen::MatrixXcd K = symmetric_K(n);
    CHECK((K + K.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((K - K.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("mixing matrix from the flow equation") {
  for (int n : {2, 3}) {
    ModularGeometry g(IntervalFamily::symmetric(n, 0.2, 0.9));
    const double X0 = g.base_point();
    CHECK(max_abs(g.O_of_X(X0).O - Eigen::MatrixXd::Identity(n, n)) == 0.0);
    for (double r : {0.1, 0.25, 0.6, 1.7, 4.0, 10.0}) {
      auto s = g.O_of_X(r * X0);
      CHECK(s.defect <= 1e-8);
      CHECK(max_abs(s.O - g.O_closed_form(r * X0)) <= 1e-6);
    }
  }
  ModularGeometry one(IntervalFamily::general({{-1.0, 1.0}}));
  CHECK(one.O_of_X(5.0).O(0, 0) == 1.0);
  CHECK_THROWS(one.O_closed_form(1.0));
}

TEST_CASE("cocycle identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ts(-0.12, 0.12), xs(0.4, 2.5);
  for (auto f : {IntervalFamily::symmetric(2, 0.2, 0.9), three_arcs()}) {
    ModularGeometry g(f);
    const double X0 = g.base_point();
    CHECK(max_abs(g.cocycle(0.0, 1.3 * X0) - Eigen::MatrixXd::Identity(g.size(), g.size())) == 0.0);
    for (int i = 0; i < 20; ++i) CHECK(g.cocycle_residual(ts(rng), ts(rng), xs(rng) * X0) <= 1e-7);
    const auto c = g.cocycle(0.05, X0);
    CHECK(max_abs(c.transpose() * c - Eigen::MatrixXd::Identity(g.size(), g.size())) <= 1e-8);
  }
}

TEST_CASE("time derivative of the cocycle carries the flow variable") {
  ModularGeometry g(three_arcs());
  const auto c = g.time_derivative_check(0.07, 1.3 * g.base_point());
  CHECK(c.scaled <= 1e-7);
  CHECK(c.unscaled > 1e-2);
}

TEST_CASE("chi fields are independent fermions on the half line") {
  for (auto f : {IntervalFamily::symmetric(2, 0.2, 0.9), IntervalFamily::symmetric(3, -0.1, 1.0), three_arcs()}) {
    ModularGeometry g(f);
    const double X0 = g.base_point();
    CHECK(g.diagonalization_defect(0.8 * X0, 2.5 * X0) <= 1e-8);
    // modular covariance at the two-point level
    const double X = 0.7 * X0, Y = 1.9 * X0;
    const Eigen::MatrixXcd base = g.chi_two_point(X, Y);
    for (double t : {-0.1, 0.05, 0.15}) {
      const double s = std::exp(-2 * kPi * t);
      const Eigen::MatrixXcd moved = g.chi_two_point(s * X, s * Y) * s;
      CHECK((moved - base).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("ordering of the flow equation") {
  ModularGeometry g(three_arcs());
  const double X0 = g.base_point();
  const auto r = g.compare_orderings(0.05, -0.03, 0.8 * X0, 2.5 * X0);
  CHECK(r.cocycle_right <= 1e-7);
  CHECK(r.cocycle_left <= 1e-7);
  CHECK(r.diagonal_right <= 1e-8);
  CHECK(r.diagonal_left > 1e-5);
  CHECK(r.selected == Ordering::Right);
}

TEST_CASE("rotated chi fields are the images of the complex fields") {
  for (int n : {2, 3, 4}) {
    ModularGeometry g(IntervalFamily::symmetric(n, 0.2, 0.2 + 2.0 / n));
    const double X0 = g.base_point();
    for (double r : {0.3, 1.0, 3.0}) CHECK(g.rotated_chi_residual(r * X0) <= 1e-8);
    CHECK(g.pair_correlator_residual(0.5 * X0, 2.0 * X0) <= 1e-8);
  }
  ModularGeometry g(three_arcs());
  CHECK_THROWS_AS(g.rotated_chi(1.0), std::logic_error);
}

TEST_CASE("single interval") {
  auto [x, w] = single_interval_flow(0.0, 2.0);
  CHECK(x == 2.0);
  CHECK(w == 1.0);
  auto [y, v] = single_interval_flow(0.2, 2.0);
  CHECK(y == doctest::Approx(2.0 * std::exp(-0.4 * kPi)));
  CHECK(v * v == doctest::Approx(std::exp(-0.4 * kPi)));
  CHECK_THROWS(single_interval_flow(0.1, -1.0));
  // n = 1: chi is the field in the half-line frame, and the flow preserves its two-point function
  ModularGeometry g(IntervalFamily::general({{-1.2, 0.9}}));
  const auto c = g.chi(1.5);
  REQUIRE(c.size() == 1);
  REQUIRE(c[0].size() == 1);
  const double a = 0.6, b = 2.2;
  const cplx w0 = g.chi_two_point(a, b)(0, 0);
  CHECK(std::abs(w0 - 1.0 / (a - b)) < 1e-12);
  auto [fa, sa] = single_interval_flow(0.13, a);
  auto [fb, sb] = single_interval_flow(0.13, b);
  CHECK(std::abs(sa * sb * g.chi_two_point(fa, fb)(0, 0) - w0) < 1e-12);
}
