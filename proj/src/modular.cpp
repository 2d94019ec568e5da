#include "mlf/modular.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unsupported/Eigen/Polynomials>

#include "mlf/isomap.hpp"

namespace mlf {

namespace {

double wrap_phase(double p) {
  p = std::remainder(p, 2.0 * kPi);
  return p <= -kPi ? p + 2.0 * kPi : p;
}

void validate(const std::vector<std::pair<double, double>>& arcs) {
  if (arcs.empty()) throw std::invalid_argument("interval family: no intervals");
  for (auto [a, b] : arcs) {
    if (!(a > -kPi && b < kPi && a < b))
      throw std::invalid_argument("interval family: arcs need -pi < a < b < pi (the point -1 must stay outside)");
  }
  auto sorted = arcs;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (!(sorted[k - 1].second < sorted[k].first)) throw std::invalid_argument("interval family: closures intersect");
}

// Coefficients, lowest degree first, of c * prod (z - r_k).
Eigen::VectorXcd poly_from_roots(const std::vector<cplx>& roots, cplx c) {
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(roots.size()) + 1);
  p(0) = c;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    for (auto i = static_cast<Eigen::Index>(k) + 1; i >= 1; --i) p(i) = p(i - 1) - roots[k] * p(i);
    p(0) = -roots[k] * p(0);
  }
  return p;
}

cplx horner(const Eigen::VectorXcd& p, cplx z) {
  cplx s{};
  for (auto i = p.size() - 1; i >= 0; --i) s = s * z + p(i);
  return s;
}

cplx horner_derivative(const Eigen::VectorXcd& p, cplx z) {
  cplx s{};
  for (auto i = p.size() - 1; i >= 1; --i) s = s * z + static_cast<double>(i) * p(i);
  return s;
}

cplx endpoint_constant(const IntervalFamily& f) {
  cplx c = 1.0;
  for (int k = 0; k < f.size(); ++k) c *= (1.0 + f.v(k).z()) / (1.0 + f.u(k).z());
  return c;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double orthogonality_defect(const Eigen::MatrixXd& o) {
  return max_abs(o.transpose() * o - Eigen::MatrixXd::Identity(o.rows(), o.cols()));
}

}  // namespace

// ---------------------------------------------------------------- family

IntervalFamily IntervalFamily::general(const std::vector<std::pair<double, double>>& arcs) {
  validate(arcs);
  IntervalFamily f;
  f.arcs_ = arcs;
  std::sort(f.arcs_.begin(), f.arcs_.end());
  return f;
}

IntervalFamily IntervalFamily::symmetric(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("interval family: n must be positive");
  if (!(a < b) || b - a >= 2.0 * kPi / n) throw std::invalid_argument("interval family: principal arc too long");
  IntervalFamily f;
  f.symmetric_ = true;
  for (int k = 1; k <= n; ++k) {
    const double s = 2.0 * kPi * k / n;
    const double lo = wrap_phase(a + s);
    f.arcs_.emplace_back(lo, lo + (b - a));
  }
  validate(f.arcs_);
  return f;
}

int IntervalFamily::locate(double phase) const {
  for (int k = 0; k < size(); ++k)
    if (arcs_[k].first < phase && phase < arcs_[k].second) return k;
  return -1;
}

// ---------------------------------------------------------------- uniformizer

cplx uniformizer(const IntervalFamily& f, cplx z) {
  cplx x = -endpoint_constant(f);
  for (int k = 0; k < f.size(); ++k) {
    const cplx d = z - f.v(k).z();
    if (std::abs(d) < 1e-14) throw std::domain_error("uniformizer: pole at an interval endpoint");
    x *= (z - f.u(k).z()) / d;
  }
  return x;
}

double X_of_z(const IntervalFamily& f, const CirclePoint& z) {
  const cplx x = uniformizer(f, z.z());
  if (std::abs(x.imag()) > 1e-10 * std::max(1.0, std::abs(x))) throw std::runtime_error("X_of_z: value is not real");
  return x.real();
}

cplx uniformizer_derivative(const IntervalFamily& f, cplx z) {
  cplx s{};
  for (int k = 0; k < f.size(); ++k) s += 1.0 / (z - f.u(k).z()) - 1.0 / (z - f.v(k).z());
  return uniformizer(f, z) * s;
}

std::vector<Preimage> preimages(const IntervalFamily& f, double X) {
  if (!(X > 0.0)) throw std::domain_error("preimages: X must be positive");
  const int n = f.size();
  std::vector<cplx> us, vs;
  for (int k = 0; k < n; ++k) {
    us.push_back(f.u(k).z());
    vs.push_back(f.v(k).z());
  }
  const Eigen::VectorXcd p = poly_from_roots(us, endpoint_constant(f)) + poly_from_roots(vs, X);
  if (std::abs(p(n)) < 1e-14) throw std::runtime_error("preimages: degenerate leading coefficient");

  std::vector<cplx> roots;
  if (n == 1) {
    roots.push_back(-p(0) / p(1));
  } else {
    Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver(p);
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) roots.push_back(solver.roots()(i));
  }

  std::vector<Preimage> out(n);
  std::vector<int> hit(n, 0);
  for (cplx z : roots) {
    for (int it = 0; it < 2; ++it) z -= horner(p, z) / horner_derivative(p, z);
    if (std::abs(std::abs(z) - 1.0) > 1e-8) throw std::runtime_error("preimages: root off the circle");
    z /= std::abs(z);
    const int k = f.locate(std::arg(z));
    if (k < 0) throw std::runtime_error("preimages: root outside the intervals");
    ++hit[k];
    Preimage& q = out[k];
    q.z = z;
    q.theta = std::arg(z);
    const cplx dx_dtheta = uniformizer_derivative(f, z) * kI * z;
    q.theta_prime = 1.0 / dx_dtheta.real();
    if (!(q.theta_prime > 0.0)) throw std::runtime_error("preimages: uniformizer is not increasing");
    q.z_prime = kI * z * q.theta_prime;
    q.sqrt_z_prime = std::polar(std::sqrt(q.theta_prime), kPi / 4 + q.theta / 2);
  }
  for (int k = 0; k < n; ++k)
    if (hit[k] != 1) throw std::runtime_error("preimages: root count per interval is not one");
  return out;
}

Eigen::MatrixXd K_of_X(const IntervalFamily& f, double X) {
  const auto pts = preimages(f, X);
  const int n = f.size();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      const cplx v = 2.0 * kPi * pts[k].sqrt_z_prime * pts[j].sqrt_z_prime / (pts[k].z - pts[j].z);
      if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v))) throw std::runtime_error("K_of_X: entry is not real");
      K(k, j) = v.real();
    }
  return K;
}

Eigen::MatrixXcd K_of_X_principal(const IntervalFamily& f, double X) {
  const auto pts = preimages(f, X);
  const int n = f.size();
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      if (j != k)
        K(k, j) = 2.0 * kPi * principal_sqrt(pts[k].z_prime) * principal_sqrt(pts[j].z_prime) / (pts[k].z - pts[j].z);
  return K;
}

// ---------------------------------------------------------------- constant kernel diagonalizer

Eigen::MatrixXcd symmetric_K(int n) {
  if (n < 1) throw std::invalid_argument("symmetric_K: n must be positive");
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n, n);
  auto w = [n](double s) { return std::polar(1.0, kPi * s / n); };  // omega^{s/2}
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      if (j != k) K(k - 1, j - 1) = -w(k + j) / (w(2 * k) - w(2 * j));
  return K;
}

KernelDiagonalizer B_and_M(int n) {
  if (n < 1) throw std::invalid_argument("B_and_M: n must be positive");
  KernelDiagonalizer r;
  r.B.resize(n, n);
  r.m.resize(n);
  for (int k = 1; k <= n; ++k) {
    r.m(k - 1) = (n + 1) / 2.0 - k;
    for (int j = 1; j <= n; ++j) r.B(k - 1, j - 1) = std::polar(1.0, 2.0 * kPi * (0.5 - k) * j / n);
  }
  return r;
}

DiagonalizerCheck diagonalizer_check(int n) {
  const auto K = symmetric_K(n);
  const auto [B, m] = B_and_M(n);
  DiagonalizerCheck c;
  c.intertwining = (B * K - m.asDiagonal() * B).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
  Eigen::VectorXd ev = es.eigenvalues(), ms = m;
  std::sort(ev.data(), ev.data() + n);
  std::sort(ms.data(), ms.data() + n);
  c.spectrum = (ev - ms).cwiseAbs().maxCoeff();
  c.unitarity = (B * B.adjoint() / static_cast<double>(n) - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  return c;
}

// ---------------------------------------------------------------- flow

ModularGeometry::ModularGeometry(IntervalFamily family) : family_(std::move(family)) {
  const int n = family_.size();
  if (family_.is_symmetric()) {
    const auto [a, b] = family_.arcs()[n - 1];
    base_phase_ = (a < 0.0 && 0.0 < b) ? 0.0 : 0.5 * (a + b);
  } else {
    const auto [a, b] = family_.arcs()[0];
    base_phase_ = 0.5 * (a + b);
  }
  x0_ = X_of_z(family_, CirclePoint::from_phase(base_phase_));
}

FlowSolution ModularGeometry::O_of_X(double X, Ordering ord) const {
  if (!(X > 0.0)) throw std::domain_error("O_of_X: X must be positive");
  const int n = size();
  using State = std::vector<double>;
  auto rhs = [&](const State& y, State& dy, double s) {
    const double x = std::exp(s);
    const Eigen::MatrixXd K = K_of_X(family_, x);
    Eigen::Map<const Eigen::MatrixXd> O(y.data(), n, n);
    Eigen::Map<Eigen::MatrixXd> D(dy.data(), n, n);
    D = (ord == Ordering::Right ? Eigen::MatrixXd(O * K) : Eigen::MatrixXd(K * O)) * (-x / (2.0 * kPi));
  };
  const double s0 = std::log(x0_), s1 = std::log(X);
  auto solve = [&](int steps) {
    State y(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i) * n + i] = 1.0;
    if (steps == 0) return y;
    boost::numeric::odeint::runge_kutta4<State> stepper;
    const double h = (s1 - s0) / steps;
    for (int i = 0; i < steps; ++i) stepper.do_step(rhs, y, s0 + i * h, h);
    return y;
  };
  auto as_matrix = [n](const State& y) { return Eigen::MatrixXd(Eigen::Map<const Eigen::MatrixXd>(y.data(), n, n)); };

  FlowSolution r;
  if (s0 == s1 || n == 1) {
    r.O = Eigen::MatrixXd::Identity(n, n);
    return r;
  }
  int steps = std::max(16, static_cast<int>(std::ceil(std::abs(s1 - s0) / 0.02)));
  Eigen::MatrixXd prev = as_matrix(solve(steps));
  for (; steps <= (1 << 18); steps *= 2) {
    const Eigen::MatrixXd next = as_matrix(solve(2 * steps));
    const double defect = orthogonality_defect(next);
    if (defect <= 1e-8 && max_abs(next - prev) <= 1e-10) {
      r.O = next;
      r.steps = 2 * steps;
      r.defect = defect;
      return r;
    }
    prev = next;
  }
  throw std::runtime_error("O_of_X: integration did not converge");
}

Eigen::VectorXd ModularGeometry::branch_signs(double X) const {
  if (!family_.is_symmetric()) throw std::logic_error("branch_signs: symmetric families only");
  const int n = size();
  const auto pts = preimages(family_, X);
  const double phi = pts[n - 1].theta;
  Eigen::VectorXd d(n);
  for (int j = 1; j <= n; ++j) {
    const cplx r = std::polar(1.0, pts[j - 1].theta / 2) / std::polar(1.0, kPi * j / n + phi / 2);
    d(j - 1) = r.real() > 0 ? 1.0 : -1.0;
  }
  return d;
}

Eigen::MatrixXd ModularGeometry::O_closed_form(double X) const {
  if (!family_.is_symmetric()) throw std::logic_error("O_closed_form: symmetric families only");
  const int n = size();
  const auto pts = preimages(family_, X);
  const double dphi = pts[n - 1].theta - base_phase_;
  const auto [B, m] = B_and_M(n);
  Eigen::VectorXcd e(n);
  for (int k = 0; k < n; ++k) e(k) = std::polar(1.0, dphi * m(k));
  const Eigen::MatrixXd D = branch_signs(X).asDiagonal();
  const Eigen::MatrixXcd O = D * (B.adjoint() / static_cast<double>(n)) * e.asDiagonal() * B * D;
  if (O.imag().cwiseAbs().maxCoeff() > 1e-10) throw std::runtime_error("O_closed_form: not real");
  return O.real();
}

Eigen::MatrixXd ModularGeometry::cocycle(double t, double X) const {
  if (t == 0.0) return Eigen::MatrixXd::Identity(size(), size());
  return O_of_X(X).O.transpose() * O_of_X(std::exp(-2.0 * kPi * t) * X).O;
}

double ModularGeometry::cocycle_residual(double t, double s, double X) const {
  const Eigen::MatrixXd lhs = cocycle(t + s, X);
  const Eigen::MatrixXd rhs = cocycle(t, X) * cocycle(s, std::exp(-2.0 * kPi * t) * X);
  return max_abs(lhs - rhs);
}

ModularGeometry::TimeDerivativeCheck ModularGeometry::time_derivative_check(double t, double X, double h) const {
  const Eigen::MatrixXd d =
      (-cocycle(t + 2 * h, X) + 8.0 * cocycle(t + h, X) - 8.0 * cocycle(t - h, X) + cocycle(t - 2 * h, X)) / (12.0 * h);
  const double Y = std::exp(-2.0 * kPi * t) * X;
  const Eigen::MatrixXd O = cocycle(t, X), K = K_of_X(family_, Y);
  TimeDerivativeCheck c;
  c.scaled = max_abs(d - O * (Y * K));
  c.unscaled = max_abs(d - O * K);
  return c;
}

std::vector<FieldCombo> ModularGeometry::chi(double X, Ordering ord) const {
  const int n = size();
  const auto pts = preimages(family_, X);
  const Eigen::MatrixXd O = O_of_X(X, ord).O;
  std::vector<FieldCombo> out(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out[k].emplace_back(O(k, j) * pts[j].sqrt_z_prime, pts[j].z, 0);
  return out;
}

Eigen::MatrixXcd ModularGeometry::chi_two_point(double X, double Y, Ordering ord) const {
  const auto a = chi(X, ord), b = chi(Y, ord);
  const auto kernel = QuasifreeKernel::ns_vacuum();
  const int n = size();
  Eigen::MatrixXcd g(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) g(k, l) = two_point(kernel, a[k], b[l]);
  return g;
}

double ModularGeometry::diagonalization_defect(double X, double Y, Ordering ord) const {
  const Eigen::MatrixXcd g = chi_two_point(X, Y, ord) * (X - Y);
  return (g - Eigen::MatrixXcd::Identity(size(), size())).cwiseAbs().maxCoeff();
}

ModularGeometry::OrderingReport ModularGeometry::compare_orderings(double t, double s, double X, double Y) const {
  auto cocycle_with = [&](Ordering ord) {
    auto c = [&](double tt, double x) {
      return Eigen::MatrixXd(O_of_X(x, ord).O.transpose() * O_of_X(std::exp(-2.0 * kPi * tt) * x, ord).O);
    };
    return max_abs(c(t + s, X) - c(t, X) * c(s, std::exp(-2.0 * kPi * t) * X));
  };
  OrderingReport r;
  r.cocycle_right = cocycle_with(Ordering::Right);
  r.cocycle_left = cocycle_with(Ordering::Left);
  r.diagonal_right = diagonalization_defect(X, Y, Ordering::Right);
  r.diagonal_left = diagonalization_defect(X, Y, Ordering::Left);
  r.selected = r.diagonal_left < r.diagonal_right ? Ordering::Left : Ordering::Right;
  return r;
}

cplx ModularGeometry::sqrt_dZ_dX(double X) const {
  if (!family_.is_symmetric()) throw std::logic_error("sqrt_dZ_dX: symmetric families only");
  const int n = size();
  const Preimage p = preimages(family_, X)[n - 1];
  return std::polar(std::sqrt(n * p.theta_prime), kPi / 4 + n * p.theta / 2);
}

std::vector<FieldCombo> ModularGeometry::rotated_chi(double X) const {
  if (!family_.is_symmetric()) throw std::logic_error("rotated_chi: symmetric families only");
  const int n = size();
  const auto [B, m] = B_and_M(n);
  Eigen::VectorXcd e(n);
  for (int k = 0; k < n; ++k) e(k) = std::polar(1.0, base_phase_ * m(k));
  const Eigen::MatrixXcd R = e.asDiagonal() * B * branch_signs(X).asDiagonal();
  const auto c = chi(X);
  std::vector<FieldCombo> out(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out[k] = concat(out[k], scale(c[j], R(k, j)));
  return out;
}

double ModularGeometry::rotated_chi_residual(double X) const {
  const int n = size();
  const auto rc = rotated_chi(X);
  const cplx z = preimages(family_, X)[n - 1].z;
  const cplx factor = std::sqrt(static_cast<double>(n)) * sqrt_dZ_dX(X);
  double d = 0;
  for (int k = 1; k <= n; ++k) d = std::max(d, combo_distance(rc[k - 1], scale(beta_field_at_root(n, k, z), factor)));
  return d;
}

double ModularGeometry::pair_correlator_residual(double X, double Y) const {
  const int n = size();
  const auto a = rotated_chi(X), b = rotated_chi(Y);
  const cplx zx = std::pow(preimages(family_, X)[n - 1].z, n), zy = std::pow(preimages(family_, Y)[n - 1].z, n);
  const cplx w = static_cast<double>(n) * sqrt_dZ_dX(X) * sqrt_dZ_dX(Y);
  const auto ns = QuasifreeKernel::ns_vacuum();
  const auto pair = QuasifreeKernel::complex_pair(n);
  double d = 0;
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      const cplx lhs = two_point(ns, a[k - 1], b[l - 1]);
      const cplx rhs = w * pair(FieldTerm(1.0, zx, k), FieldTerm(1.0, zy, l));
      d = std::max(d, std::abs(lhs - rhs));
    }
  return d;
}

std::pair<double, double> single_interval_flow(double t, double x) {
  if (!(x > 0.0)) throw std::domain_error("single_interval_flow: x must be positive");
  return {std::exp(-2.0 * kPi * t) * x, std::exp(-kPi * t)};
}

double combo_distance(const FieldCombo& a, const FieldCombo& b) {
  using Key = std::tuple<int, long long, long long>;
  auto key = [](const FieldTerm& t) {
    return Key{t.field, std::llround(t.position.real() * 1e9), std::llround(t.position.imag() * 1e9)};
  };
  std::map<Key, cplx> acc;
  for (const auto& t : a) acc[key(t)] += t.coef;
  for (const auto& t : b) acc[key(t)] -= t.coef;
  double d = 0;
  for (auto& [k, v] : acc) d = std::max(d, std::abs(v));
  return d;
}

}  // namespace mlf
