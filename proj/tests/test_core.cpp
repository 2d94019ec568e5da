#include <doctest.h>

#include <cmath>
#include <random>

#include "mlf/core.hpp"

using namespace mlf;

TEST_CASE("half integers are exact") {
  const HalfInt a = HalfInt::half_odd(0);
  const HalfInt b = HalfInt::half_odd(1);
  CHECK((a + b) == HalfInt::integer(2));
  CHECK((a + a).is_integer());
  CHECK(a.is_half_odd());
  CHECK((-b).value() == doctest::Approx(-1.5));
  CHECK(HalfInt::from_twice(-3).abs() == b);
  CHECK(sign_power(HalfInt::integer(3)) == -1);
  CHECK_THROWS(a.as_integer());
  CHECK(a.str() == "1/2");
}

TEST_CASE("mode index parity") {
  CHECK_NOTHROW(ModeIndex(Sector::NS, HalfInt::half_odd(2)));
  CHECK_THROWS(ModeIndex(Sector::NS, HalfInt::integer(2)));
  CHECK_THROWS(ModeIndex(Sector::Ramond, HalfInt::half_odd(0)));
}

TEST_CASE("cayley transform") {
  CHECK(std::abs(cayley(0.0).z() - cplx(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(cayley(1.0).z() - kI) < 1e-15);
  const double x = 0.3;
  CHECK(std::abs(cayley(q_map(x)).z() - cayley(x).z() * cayley(x).z()) < 1e-13);
  CHECK_THROWS_AS(cayley_inverse(cplx(-1.0, 0.0)), std::domain_error);
  CHECK(std::abs(compact_weight(0.0) - cplx(M_SQRT1_2, 0.0)) < 1e-15);
}

TEST_CASE("cayley round trip up to |x| = 1e3") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(std::abs(cayley_inverse(cayley(x).z()) - x) <= 1e-12 * std::max(1.0, x * x));
  }
  CHECK(std::abs(cayley_inverse(cayley(1e3).z()) - 1e3) < 1e-6);
}

TEST_CASE("q map") {
  CHECK(q_map(0.0) == 0.0);
  CHECK(q_map(0.5) == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(q_map(1.0), std::domain_error);
  CHECK_THROWS_AS(q_map(-2.0), std::domain_error);
  // x and -1/x have the same image under x -> 2x/(1-x^2)
  const double x = 0.4;
  const double y = -1.0 / x;
  CHECK(2 * y / (1 - y * y) == doctest::Approx(q_map(x)));
}

TEST_CASE("squaring property over random samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const cplx c = cayley(x).z();
    worst = std::max(worst, std::abs(cayley(q_map(x)).z() - c * c));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("nth roots") {
  auto r = nth_roots(CirclePoint(cplx(1.0, 0.0)), 2);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0].z() - cplx(1, 0)) < 1e-15);
  CHECK(std::abs(r[1].z() - cplx(-1, 0)) < 1e-15);

  auto s = nth_roots(CirclePoint(kI), 2);
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0].z() - std::exp(cplx(0, -3 * kPi / 4))) < 1e-15);
  CHECK(std::abs(s[1].z() - std::exp(cplx(0, kPi / 4))) < 1e-15);

  const CirclePoint z = CirclePoint::from_phase(2.2);
  for (int n = 1; n <= 7; ++n)
    for (const auto& w : nth_roots(z, n)) CHECK(std::abs(std::pow(w.z(), n) - z.z()) < 1e-13);
}

TEST_CASE("principal branch") {
  const double eps = 1e-3;
  const CirclePoint z = CirclePoint::from_phase(kPi - eps);
  CHECK(std::abs(z.sqrt() - std::exp(cplx(0, (kPi - eps) / 2))) < 1e-15);
  CHECK(CirclePoint::from_phase(-kPi).phase() == doctest::Approx(kPi));
  CHECK_THROWS(CirclePoint(cplx(2.0, 0.0)));
  // sqrt(zw) = +- sqrt z sqrt w, with the sign flipping exactly when the phases wrap
  const CirclePoint a = CirclePoint::from_phase(2.0), b = CirclePoint::from_phase(2.5);
  const CirclePoint ab(a.z() * b.z());
  CHECK(std::abs(ab.sqrt() + a.sqrt() * b.sqrt()) < 1e-14);
  CHECK(std::abs(principal_sqrt(cplx(-4, 0)) - cplx(0, 2)) < 1e-15);
}
