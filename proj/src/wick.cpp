#include "mlf/wick.hpp"

#include <cmath>
#include <stdexcept>

namespace mlf {

FieldTerm::FieldTerm(cplx c, cplx pos, int f) : coef(c), position(pos), field(f), root(principal_sqrt(pos)) {}

FieldTerm FieldTerm::at_root(cplx c, cplx r, int f) {
  FieldTerm t(c, r * r, f);
  t.root = r;
  return t;
}

FieldCombo scale(const FieldCombo& a, cplx c) {
  FieldCombo out = a;
  for (auto& t : out) t.coef *= c;
  return out;
}

FieldCombo concat(const FieldCombo& a, const FieldCombo& b) {
  FieldCombo out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

QuasifreeKernel QuasifreeKernel::complex_pair(int n) {
  if (n < 1) throw std::invalid_argument("complex_pair: n must be positive");
  QuasifreeKernel k(KernelKind::ComplexPair);
  k.n_ = n;
  return k;
}

QuasifreeKernel QuasifreeKernel::line_pair(int n) {
  if (n < 1) throw std::invalid_argument("line_pair: n must be positive");
  QuasifreeKernel k(KernelKind::LinePair);
  k.n_ = n;
  return k;
}

QuasifreeKernel QuasifreeKernel::with_lambda(double lambda) const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in (0, 1]");
  QuasifreeKernel k = *this;
  k.lambda_ = lambda;
  return k;
}

cplx QuasifreeKernel::operator()(const FieldTerm& a, const FieldTerm& b) const {
  const cplx z = a.position;
  const cplx w = lambda_ * b.position;
  const cplx rw = std::sqrt(lambda_) * b.root;
  const cplx d = z - w;
  if (std::abs(d) == 0.0) throw std::domain_error("two-point kernel evaluated at coincident points");
  switch (kind_) {
    case KernelKind::NSVacuum:
      return a.field == b.field ? 1.0 / d : cplx{};
    case KernelKind::RamondGround:
      return a.field == b.field ? (z + w) / (2.0 * a.root * rw * d) : cplx{};
    case KernelKind::RamondPeriodic:
      return a.field == b.field ? (z + w) / (2.0 * d) : cplx{};
    case KernelKind::TwistedCurrent:
      return a.field == b.field ? (z + w) / (2.0 * a.root * rw * d * d) : cplx{};
    case KernelKind::LineVacuum:
      return a.field == b.field ? -kI / d : cplx{};
    case KernelKind::ComplexPair:
      return a.field + b.field == n_ + 1 ? 1.0 / d : cplx{};
    case KernelKind::LinePair:
      return a.field + b.field == n_ + 1 ? -kI / d : cplx{};
    case KernelKind::RamondVacuum:
      if (a.field != b.field) return {};
      return a.field == 1 ? (z + w) / (2.0 * d) : 1.0 / d;
  }
  return {};
}

cplx two_point(const QuasifreeKernel& k, const FieldCombo& a, const FieldCombo& b) {
  cplx s{};
  for (const auto& x : a)
    for (const auto& y : b) s += x.coef * y.coef * k(x, y);
  return s;
}

namespace {

Eigen::MatrixXcd drop_pair(const Eigen::MatrixXcd& a, Eigen::Index j) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd out(n - 2, n - 2);
  Eigen::Index r = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (i == j) continue;
    Eigen::Index c = 0;
    for (Eigen::Index l = 1; l < n; ++l) {
      if (l == j) continue;
      out(r, c++) = a(i, l);
    }
    ++r;
  }
  return out;
}

cplx pfaffian_expand(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 1.0;
  if (n == 2) return a(0, 1);
  cplx s{};
  for (Eigen::Index j = 1; j < n; ++j) {
    if (a(0, j) == cplx{}) continue;
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    s += sign * a(0, j) * pfaffian_expand(drop_pair(a, j));
  }
  return s;
}

cplx pfaffian_parlett_reid(Eigen::MatrixXcd a) {
  const Eigen::Index n = a.rows();
  cplx pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = k + 1;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == cplx{}) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      Eigen::VectorXcd tau = a.row(k).tail(m).transpose() / a(k, k + 1);
      Eigen::VectorXcd col = a.col(k + 1).tail(m);
      a.bottomRightCorner(m, m) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

}  // namespace

cplx pfaffian(const Eigen::MatrixXcd& a, double asym_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("pfaffian: matrix must be square");
  if (a.rows() % 2 != 0) return 0.0;
  if (a.rows() == 0) return 1.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > asym_tol * scale)
    throw std::invalid_argument("pfaffian: matrix is not antisymmetric");
  if (a.rows() <= 12) return pfaffian_expand(a);
  return pfaffian_parlett_reid(a);
}

cplx hafnian(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("hafnian: matrix must be square");
  if (n % 2 != 0) return 0.0;
  if (n == 0) return 1.0;
  cplx s{};
  for (Eigen::Index j = 1; j < n; ++j)
    if (a(0, j) != cplx{}) s += a(0, j) * hafnian(drop_pair(a, j));
  return s;
}

cplx npoint_wick(const QuasifreeKernel& k, const std::vector<FieldCombo>& fields,
                 const std::vector<int>& groups) {
  const auto n = static_cast<Eigen::Index>(fields.size());
  if (groups.size() != fields.size()) throw std::invalid_argument("npoint_wick: group list size mismatch");
  if (n % 2 != 0) return 0.0;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (groups[i] == groups[j]) continue;
      a(i, j) = two_point(k, fields[i], fields[j]);
      a(j, i) = k.fermionic() ? -a(i, j) : a(i, j);
    }
  return k.fermionic() ? pfaffian(a) : hafnian(a);
}

cplx npoint(const QuasifreeKernel& k, const std::vector<FieldCombo>& fields) {
  std::vector<int> groups(fields.size());
  for (std::size_t i = 0; i < groups.size(); ++i) groups[i] = static_cast<int>(i);
  return npoint_wick(k, fields, groups);
}

cplx mode_two_point(const QuasifreeKernel& k, HalfInt m, HalfInt l, int nodes, double radius) {
  HalfInt h;
  switch (k.kind()) {
    case KernelKind::NSVacuum: h = HalfInt::half_odd(0); break;
    case KernelKind::RamondPeriodic: h = HalfInt{}; break;
    case KernelKind::TwistedCurrent: h = HalfInt::integer(1); break;
    default: throw std::invalid_argument("mode_two_point: unsupported kernel");
  }
  if (!(radius > 0.0 && radius < 1.0)) throw std::invalid_argument("mode_two_point: radius must lie in (0,1)");
  const std::int64_t pm = (m + h).twice();
  const std::int64_t pl = (l + h).twice();
  cplx s{};
  for (int a = 0; a < nodes; ++a) {
    const double ta = 2.0 * kPi * (a + 0.5) / nodes;
    const cplx rz = std::polar(1.0, ta / 2.0);
    const FieldTerm fz = FieldTerm::at_root(1.0, rz);
    const cplx wz = std::pow(rz, static_cast<int>(pm));
    for (int b = 0; b < nodes; ++b) {
      const double tb = 2.0 * kPi * b / nodes;
      const cplx rw = std::polar(std::sqrt(radius), tb / 2.0);
      const FieldTerm fw = FieldTerm::at_root(1.0, rw);
      s += wz * std::pow(rw, static_cast<int>(pl)) * k(fz, fw);
    }
  }
  return s / (static_cast<double>(nodes) * nodes);
}

}  // namespace mlf
