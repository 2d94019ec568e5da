#include "mlf/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mlf {

ModePolynomial ModePolynomial::constant(cplx c) {
  ModePolynomial p;
  p.add_term(c, {});
  return p;
}

ModePolynomial ModePolynomial::generator(FermionMode m, cplx c) {
  ModePolynomial p;
  p.add_term(c, {m});
  return p;
}

ModePolynomial ModePolynomial::product(FermionMode a, FermionMode b, cplx c) {
  ModePolynomial p;
  p.add_term(c, {a, b});
  return p;
}

void ModePolynomial::add_term(cplx coef, std::vector<FermionMode> factors) {
  if (coef == cplx{}) return;
  terms_.push_back({coef, std::move(factors)});
}

ModePolynomial& ModePolynomial::operator+=(const ModePolynomial& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

ModePolynomial& ModePolynomial::operator-=(const ModePolynomial& o) {
  for (const auto& t : o.terms_) terms_.push_back({-t.coef, t.factors});
  return *this;
}

ModePolynomial& ModePolynomial::operator*=(cplx c) {
  if (c == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= c;
  return *this;
}

ModePolynomial operator*(const ModePolynomial& a, const ModePolynomial& b) {
  ModePolynomial r;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      std::vector<FermionMode> f = x.factors;
      f.insert(f.end(), y.factors.begin(), y.factors.end());
      r.add_term(x.coef * y.coef, std::move(f));
    }
  }
  return r;
}

ModePolynomial ModePolynomial::adjoint() const {
  ModePolynomial r;
  for (const auto& t : terms_) {
    std::vector<FermionMode> f;
    f.reserve(t.factors.size());
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) f.push_back({it->species, -it->index});
    r.add_term(std::conj(t.coef), std::move(f));
  }
  return r;
}

ModePolynomial ModePolynomial::simplified(double eps) const {
  std::map<std::vector<FermionMode>, cplx> acc;
  for (const auto& t : terms_) acc[t.factors] += t.coef;
  ModePolynomial r;
  for (auto& [f, c] : acc)
    if (std::abs(c) > eps) r.add_term(c, f);
  return r;
}

ModePolynomial ModePolynomial::truncated(HalfInt cutoff) const {
  ModePolynomial r;
  for (const auto& t : terms_) {
    bool keep = std::all_of(t.factors.begin(), t.factors.end(),
                            [&](const FermionMode& m) { return m.index.abs() <= cutoff; });
    if (keep) r.terms_.push_back(t);
  }
  return r;
}

ModePolynomial ModePolynomial::substitute(
    const std::function<ModePolynomial(const FermionMode&)>& f) const {
  ModePolynomial r;
  for (const auto& t : terms_) {
    ModePolynomial acc = constant(t.coef);
    for (const auto& m : t.factors) acc = acc * f(m);
    r += acc;
  }
  return r;
}

namespace {

void normalize(std::vector<FermionMode> f, cplx coef, std::map<std::vector<FermionMode>, cplx>& out) {
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    if (f[i] < f[i + 1]) continue;
    std::vector<FermionMode> removed;
    removed.reserve(f.size() - 2);
    for (std::size_t j = 0; j < f.size(); ++j)
      if (j != i && j != i + 1) removed.push_back(f[j]);
    if (f[i] == f[i + 1]) {
      // psi_a psi_a = (1/2){psi_a, psi_a}
      if (f[i].index == HalfInt{}) normalize(std::move(removed), 0.5 * coef, out);
      return;
    }
    const bool contracts = f[i].species == f[i + 1].species && (f[i].index + f[i + 1].index) == HalfInt{};
    std::swap(f[i], f[i + 1]);
    normalize(f, -coef, out);
    if (contracts) normalize(std::move(removed), coef, out);
    return;
  }
  out[f] += coef;
}

}  // namespace

ModePolynomial ModePolynomial::canonical(double eps) const {
  std::map<std::vector<FermionMode>, cplx> acc;
  for (const auto& t : terms_) normalize(t.factors, t.coef, acc);
  ModePolynomial r;
  for (auto& [f, c] : acc)
    if (std::abs(c) > eps) r.add_term(c, f);
  return r;
}

cplx ModePolynomial::quadratic_vev(Sector sector) const {
  cplx v{};
  for (const auto& t : terms_) {
    const auto d = t.factors.size();
    if (d == 0) {
      v += t.coef;
    } else if (d == 2) {
      const auto& a = t.factors[0];
      const auto& b = t.factors[1];
      if (a.species != b.species || (a.index + b.index) != HalfInt{}) continue;
      if (a.index > HalfInt{}) v += t.coef;
      else if (a.index == HalfInt{} && sector == Sector::Ramond) v += 0.5 * t.coef;
    } else if (d % 2 == 0) {
      throw std::invalid_argument("quadratic_vev: degree > 2");
    }
  }
  return v;
}

cplx ModePolynomial::scalar_part() const {
  cplx v{};
  for (const auto& t : terms_)
    if (t.factors.empty()) v += t.coef;
  return v;
}

HalfInt ModePolynomial::max_abs_index() const {
  HalfInt m{};
  for (const auto& t : terms_)
    for (const auto& f : t.factors) m = std::max(m, f.index.abs());
  return m;
}

std::size_t ModePolynomial::max_degree() const {
  std::size_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.factors.size());
  return d;
}

std::string ModePolynomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << t.coef.real() << (t.coef.imag() < 0 ? "" : "+") << t.coef.imag() << "i)";
    for (const auto& f : t.factors) os << " psi" << f.species << "[" << f.index.str() << "]";
  }
  if (first) os << "0";
  return os.str();
}

ModePolynomial wick_ordered(const ModePolynomial& q, Sector sector) {
  return q - ModePolynomial::constant(q.quadratic_vev(sector));
}

// ---------------------------------------------------------------------------

FockSpace FockSpace::build(Sector sector, HalfInt cutoff, int species, std::size_t max_dim) {
  if (species < 1) throw std::invalid_argument("FockSpace: species must be positive");
  if (sector == Sector::NS && !cutoff.is_half_odd())
    throw std::invalid_argument("FockSpace: NS cutoff must be half-odd");
  if (sector == Sector::Ramond && !cutoff.is_integer())
    throw std::invalid_argument("FockSpace: Ramond cutoff must be an integer");
  if (cutoff < HalfInt{}) throw std::invalid_argument("FockSpace: negative cutoff");

  FockSpace f;
  f.sector_ = sector;
  f.cutoff_ = cutoff;
  f.species_ = species;
  f.positive_modes_ = sector == Sector::NS ? static_cast<int>((cutoff.twice() + 1) / 2)
                                           : static_cast<int>(cutoff.twice() / 2);
  f.qubits_ = species * f.positive_modes_ + (sector == Sector::Ramond ? species : 0);
  if (f.qubits_ >= 63 || (std::size_t{1} << f.qubits_) > max_dim)
    throw std::length_error("FockSpace: dimension 2^" + std::to_string(f.qubits_) + " exceeds limit");
  f.dim_ = std::size_t{1} << f.qubits_;

  std::vector<double> qubit_energy(f.qubits_, 0.0);
  for (int s = 0; s < species; ++s)
    for (int p = 0; p < f.positive_modes_; ++p)
      qubit_energy[s * f.positive_modes_ + p] = sector == Sector::NS ? p + 0.5 : p + 1.0;
  f.energy_.resize(f.dim_);
  for (std::size_t b = 0; b < f.dim_; ++b) {
    double e = 0.0;
    for (int q = 0; q < f.qubits_; ++q)
      if (b >> q & 1U) e += qubit_energy[q];
    f.energy_[b] = e;
  }
  return f;
}

bool FockSpace::contains(const FermionMode& m) const {
  if (m.species < 0 || m.species >= species_) return false;
  if (m.index.abs() > cutoff_) return false;
  return sector_ == Sector::NS ? m.index.is_half_odd() : m.index.is_integer();
}

int FockSpace::qubit(const FermionMode& m) const {
  if (!contains(m)) throw std::out_of_range("FockSpace: mode " + m.index.str() + " not represented");
  const auto a = m.index.abs();
  if (a == HalfInt{}) return species_ * positive_modes_ + m.species;
  const int p = sector_ == Sector::NS ? static_cast<int>((a.twice() - 1) / 2)
                                      : static_cast<int>(a.twice() / 2 - 1);
  return m.species * positive_modes_ + p;
}

bool FockSpace::act(const FermionMode& m, std::uint64_t& state, cplx& amp) const {
  const int q = qubit(m);
  const std::uint64_t bit = std::uint64_t{1} << q;
  const bool odd = std::popcount(state & (bit - 1)) & 1;
  if (m.index == HalfInt{}) {
    state ^= bit;
    amp *= odd ? -M_SQRT1_2 : M_SQRT1_2;
    return true;
  }
  const bool occupied = state & bit;
  if (m.index > HalfInt{}) {
    if (!occupied) return false;
  } else if (occupied) {
    return false;
  }
  state ^= bit;
  if (odd) amp = -amp;
  return true;
}

SparseMatrix FockSpace::mode(const FermionMode& m) const { return matrix(ModePolynomial::generator(m)); }

std::vector<FermionMode> FockSpace::modes(int species) const {
  std::vector<FermionMode> out;
  const HalfInt step = HalfInt::integer(1);
  for (HalfInt m = -cutoff_; m <= cutoff_; m += step) out.push_back({species, m});
  return out;
}

Vector FockSpace::vacuum() const { return basis(0); }

Vector FockSpace::basis(std::size_t index) const {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim_));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

double FockSpace::energy(std::size_t index) const { return energy_.at(index); }

std::vector<std::size_t> FockSpace::window(double emax) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < dim_; ++b)
    if (energy_[b] <= emax + 1e-12) out.push_back(b);
  return out;
}

Vector FockSpace::apply(const ModePolynomial& p, const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != dim_) throw std::invalid_argument("FockSpace::apply: size mismatch");
  for (const auto& t : p.terms())
    for (const auto& f : t.factors) (void)qubit(f);
  Vector out = Vector::Zero(v.size());
  for (Eigen::Index b = 0; b < v.size(); ++b) {
    if (v(b) == cplx{}) continue;
    for (const auto& t : p.terms()) {
      std::uint64_t s = static_cast<std::uint64_t>(b);
      cplx amp = t.coef * v(b);
      bool alive = true;
      for (auto it = t.factors.rbegin(); it != t.factors.rend() && alive; ++it) alive = act(*it, s, amp);
      if (alive) out(static_cast<Eigen::Index>(s)) += amp;
    }
  }
  return out;
}

LinearOp FockSpace::op(const ModePolynomial& p) const {
  return [this, p](const Vector& v) { return apply(p, v); };
}

SparseMatrix FockSpace::matrix(const ModePolynomial& p) const {
  for (const auto& t : p.terms())
    for (const auto& f : t.factors) (void)qubit(f);
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t b = 0; b < dim_; ++b) {
    for (const auto& t : p.terms()) {
      std::uint64_t s = b;
      cplx amp = t.coef;
      bool alive = true;
      for (auto it = t.factors.rbegin(); it != t.factors.rend() && alive; ++it) alive = act(*it, s, amp);
      if (alive) trip.emplace_back(static_cast<int>(s), static_cast<int>(b), amp);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cplx{}, 0.0);
  return m;
}

DenseMatrix FockSpace::dense(const ModePolynomial& p) const { return DenseMatrix(matrix(p)); }

cplx FockSpace::vacuum_expectation(const ModePolynomial& p) const { return apply(p, vacuum())(0); }

// ---------------------------------------------------------------------------

double safe_energy(HalfInt cutoff, std::initializer_list<double> shifts_in_application_order) {
  double partial = 0.0;
  double worst = 0.0;
  for (double d : shifts_in_application_order) {
    worst = std::max(worst, partial + std::abs(d));
    partial += d;
  }
  return cutoff.value() - worst;
}

double window_residual(const FockSpace& space, const LinearOp& op, double emax) {
  double worst = 0.0;
  for (auto b : space.window(emax)) worst = std::max(worst, op(space.basis(b)).lpNorm<Eigen::Infinity>());
  return worst;
}

LinearOp commutator(const LinearOp& a, const LinearOp& b) {
  return [a, b](const Vector& v) -> Vector { return a(b(v)) - b(a(v)); };
}

LinearOp anticommutator(const LinearOp& a, const LinearOp& b) {
  return [a, b](const Vector& v) -> Vector { return a(b(v)) + b(a(v)); };
}

LinearOp operator+(const LinearOp& a, const LinearOp& b) {
  return [a, b](const Vector& v) -> Vector { return a(v) + b(v); };
}

LinearOp operator-(const LinearOp& a, const LinearOp& b) {
  return [a, b](const Vector& v) -> Vector { return a(v) - b(v); };
}

LinearOp scaled(cplx c, const LinearOp& a) {
  return [c, a](const Vector& v) -> Vector { return c * a(v); };
}

LinearOp identity_op() {
  return [](const Vector& v) { return v; };
}

DenseMatrix expm_blockwise(const SparseMatrix& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("expm_blockwise: matrix must be square");
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      auto r = find(it.row()), c = find(it.col());
      if (r != c) parent[r] = c;
    }
  std::map<Eigen::Index, std::vector<Eigen::Index>> blocks;
  for (Eigen::Index i = 0; i < n; ++i) blocks[find(i)].push_back(i);

  DenseMatrix dense_a(a);
  DenseMatrix out = DenseMatrix::Zero(n, n);
  for (const auto& [root, idx] : blocks) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    DenseMatrix sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = dense_a(idx[i], idx[j]);
    DenseMatrix e = sub.exp();
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) out(idx[i], idx[j]) = e(i, j);
  }
  return out;
}

}  // namespace mlf
