#include <doctest.h>

#include <random>

#include "mlf/fock.hpp"
#include "mlf/wick.hpp"

using namespace mlf;

namespace {
FieldCombo at(cplx z, int f = 0) { return {FieldTerm(1.0, z, f)}; }
cplx eph(double t) { return std::polar(1.0, t); }
}  // namespace

TEST_CASE("kernel values") {
  auto ns = QuasifreeKernel::ns_vacuum();
  CHECK(std::abs(two_point(ns, at(1.0), at(kI)) - 1.0 / (1.0 - kI)) < 1e-15);

  const double th = 0.7;
  auto r = QuasifreeKernel::ramond_ground();
  CHECK(std::abs(two_point(r, at(eph(th)), at(eph(-th))) - std::cos(th) / (2.0 * kI * std::sin(th))) < 1e-14);

  const cplx z = eph(0.2), w = eph(0.9);
  auto t = QuasifreeKernel::twisted_current();
  const cplx expect = (z * z + w * w) / (2.0 * z * w * std::pow(w * w - z * z, 2));
  CHECK(std::abs(two_point(t, {FieldTerm::at_root(1.0, z)}, {FieldTerm::at_root(1.0, w)}) - expect) < 1e-13);
  // symmetric in its arguments
  CHECK(std::abs(two_point(t, at(z), at(w)) - two_point(t, at(w), at(z))) < 1e-13);

  CHECK_THROWS_AS(two_point(ns, at(kI), at(kI)), std::domain_error);
  auto split = ns.with_lambda(0.9);
  CHECK(std::abs(two_point(split, at(kI), at(kI)) - 1.0 / (kI - 0.9 * kI)) < 1e-14);
}

TEST_CASE("pfaffian basics") {
  Eigen::MatrixXcd a(2, 2);
  a << 0, cplx(2, 1), -cplx(2, 1), 0;
  CHECK(std::abs(pfaffian(a) - cplx(2, 1)) < 1e-15);

  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4, 4);
  b(0, 1) = 3.0; b(1, 0) = -3.0; b(2, 3) = cplx(0, 5); b(3, 2) = cplx(0, -5);
  CHECK(std::abs(pfaffian(b) - cplx(0, 15)) < 1e-14);

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Ones(2, 2);
  CHECK_THROWS(pfaffian(bad));
  CHECK(pfaffian(Eigen::MatrixXcd::Zero(3, 3)) == cplx{});
}

TEST_CASE("pfaffian squared equals determinant") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int n : {4, 8, 12, 14, 20}) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        a(i, j) = cplx(g(rng), g(rng));
        a(j, i) = -a(i, j);
      }
    const cplx pf = pfaffian(a);
    const cplx det = a.determinant();
    CHECK(std::abs(pf * pf - det) <= 1e-8 * std::abs(det));
  }
}

TEST_CASE("four-point Pfaffian expansion") {
  auto ns = QuasifreeKernel::ns_vacuum();
  std::vector<cplx> p = {eph(0.1), eph(1.3), eph(2.4), eph(-1.9)};
  auto A = [&](int i, int j) { return 1.0 / (p[i] - p[j]); };
  const cplx expect = A(0, 1) * A(2, 3) - A(0, 2) * A(1, 3) + A(0, 3) * A(1, 2);
  CHECK(std::abs(npoint(ns, {at(p[0]), at(p[1]), at(p[2]), at(p[3])}) - expect) < 1e-13);
  CHECK(std::abs(npoint(ns, {at(p[0]), at(p[1])}) - A(0, 1)) < 1e-15);
  CHECK(npoint(ns, {at(p[0]), at(p[1]), at(p[2])}) == cplx{});
}

TEST_CASE("fermionic exchange sign and clustering") {
  auto ns = QuasifreeKernel::ns_vacuum();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FieldCombo> f;
    for (int i = 0; i < 6; ++i) f.push_back(at(eph(u(rng))));
    const cplx v = npoint(ns, f);
    for (int i = 0; i + 1 < 6; ++i) {
      auto g = f;
      std::swap(g[i], g[i + 1]);
      CHECK(std::abs(npoint(ns, g) + v) <= 1e-9 * std::max(1.0, std::abs(v)));
    }
  }
  // line picture: separate one pair by a growing distance
  auto line = QuasifreeKernel::line_vacuum();
  double prev = 1e9;
  for (double s : {10.0, 100.0, 1000.0}) {
    const cplx x1 = 0.1, x2 = 0.7, y1 = s, y2 = s + 0.5;
    const cplx four = npoint(line, {at(x1), at(x2), at(y1), at(y2)});
    const cplx prod = two_point(line, at(x1), at(x2)) * two_point(line, at(y1), at(y2));
    const double err = std::abs(four - prod);
    CHECK(err < prev);
    CHECK(err * s < 1.0);
    prev = err;
  }
}

TEST_CASE("kernel modes match the Fock vacuum") {
  auto ns = QuasifreeKernel::ns_vacuum();
  auto fock = FockSpace::build(Sector::NS, HalfInt::from_twice(7));
  for (auto a : fock.modes())
    for (auto b : fock.modes()) {
      const cplx k = mode_two_point(ns, a.index, b.index);
      const cplx f = fock.vacuum_expectation(ModePolynomial::product(a, b));
      CHECK(std::abs(k - f) < 1e-8);
    }

  auto r = QuasifreeKernel::ramond_periodic();
  auto rf = FockSpace::build(Sector::Ramond, HalfInt::integer(3));
  for (auto a : rf.modes())
    for (auto b : rf.modes()) {
      const cplx k = mode_two_point(r, a.index, b.index);
      const cplx f = rf.vacuum_expectation(ModePolynomial::product(a, b));
      CHECK(std::abs(k - f) < 1e-8);
    }

  // twisted current: <j_r j_s> = r delta_{r+s,0} for r > 0
  auto t = QuasifreeKernel::twisted_current();
  for (int tr = -5; tr <= 5; tr += 2)
    for (int ts = -5; ts <= 5; ts += 2) {
      const cplx k = mode_two_point(t, HalfInt::from_twice(tr), HalfInt::from_twice(ts));
      const double expect = (tr + ts == 0 && tr > 0) ? tr / 2.0 : 0.0;
      CHECK(std::abs(k - expect) < 1e-8);
    }
}

TEST_CASE("four-point NS function against Fock modes") {
  auto fock = FockSpace::build(Sector::NS, HalfInt::from_twice(5));
  ModePolynomial p;
  const FermionMode a{0, HalfInt::from_twice(1)}, b{0, HalfInt::from_twice(3)}, c{0, HalfInt::from_twice(-3)},
      d{0, HalfInt::from_twice(-1)};
  p.add_term(1.0, {a, b, c, d});
  CHECK(std::abs(fock.vacuum_expectation(p) - 1.0) < 1e-15);
  // Pfaffian of mode two-points
  auto ns = QuasifreeKernel::ns_vacuum();
  std::vector<FermionMode> ms = {a, b, c, d};
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      A(i, j) = mode_two_point(ns, ms[i].index, ms[j].index);
      A(j, i) = -A(i, j);
    }
  CHECK(std::abs(pfaffian(A, 1e-8) - 1.0) < 1e-8);
}

TEST_CASE("hafnian") {
  Eigen::MatrixXcd a(4, 4);
  a << 0, 1, 2, 3, 1, 0, 4, 5, 2, 4, 0, 6, 3, 5, 6, 0;
  CHECK(std::abs(hafnian(a) - cplx(1 * 6 + 2 * 5 + 3 * 4, 0)) < 1e-15);
}
