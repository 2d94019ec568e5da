#include "mlf/symgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlf {

namespace {

HalfInt hi(int twice) { return HalfInt::from_twice(twice); }
HalfInt half_odd_floor(double x) { return HalfInt::half_odd(static_cast<std::int64_t>(std::floor(x - 0.5))); }

// All labels of one sector with |m| <= cutoff, ascending.
std::vector<HalfInt> labels(Sector s, HalfInt cutoff) {
  std::vector<HalfInt> out;
  const HalfInt start = s == Sector::NS ? (cutoff.is_half_odd() ? -cutoff : -(cutoff - hi(1)))
                                        : (cutoff.is_integer() ? -cutoff : -(cutoff - hi(1)));
  for (HalfInt m = start; m <= cutoff; m += HalfInt::integer(1)) out.push_back(m);
  return out;
}

cplx ipow(cplx z, HalfInt e) { return std::pow(z, static_cast<int>(e.as_integer())); }

// pairs (a, b), a + b = n, a <= b, 2b <= energy would act nontrivially; checks exactness
bool sugawara_exact(int n, double energy, HalfInt cutoff, bool twisted) {
  const double M = cutoff.value();
  const CurrentPolynomial s = sugawara_mode(n, half_odd_floor(energy / 2.0 + 2.0), twisted);
  for (const auto& t : s.terms()) {
    if (t.modes.size() != 2) continue;
    const double a = t.modes[0].value(), b = t.modes[1].value();
    if (2 * b > energy + 1e-12) continue;
    if (energy + 2 * std::abs(b) > M + 1e-12) return false;
    if (energy - 2 * b + 2 * std::abs(a) > M + 1e-12) return false;
  }
  return true;
}

double find_window(const std::function<bool(double)>& ok, HalfInt cutoff) {
  for (double e = cutoff.value(); e >= 0.0; e -= 0.5)
    if (ok(e)) return e;
  throw std::domain_error("no safe window at cutoff " + cutoff.str());
}

ModePolynomial to_real2(const ModePolynomial& p) { return p.substitute(complex_to_real(2)).simplified(1e-15); }

}  // namespace

Pairing real_pairing() {
  return [](const FermionMode& a, const FermionMode& b) {
    return (a.species == b.species && (a.index + b.index) == HalfInt{}) ? 1.0 : 0.0;
  };
}

Pairing complex_pairing(int n) {
  return [n](const FermionMode& a, const FermionMode& b) {
    return (a.species + b.species == n + 1 && (a.index + b.index) == HalfInt{}) ? 1.0 : 0.0;
  };
}

ModePolynomial normal_pair(const FermionMode& a, const FermionMode& b, cplx c) {
  if (a.index == HalfInt{} && b.index == HalfInt{}) {
    if (a.species == b.species) return {};
    return ModePolynomial::product(a, b, c);
  }
  if ((a.index + b.index) == HalfInt{} && a.index > HalfInt{}) return ModePolynomial::product(b, a, -c);
  return ModePolynomial::product(a, b, c);
}

ModePolynomial commutator_linear(const ModePolynomial& q, const ModePolynomial& l, const Pairing& pairing) {
  ModePolynomial out;
  for (const auto& t : q.terms()) {
    const auto d = t.factors.size();
    if (d % 2 != 0) throw std::invalid_argument("commutator_linear: odd-degree term");
    for (const auto& x : l.terms()) {
      if (x.factors.size() != 1) throw std::invalid_argument("commutator_linear: second argument must be linear");
      const FermionMode& g = x.factors[0];
      // [f_1..f_d, g] = -sum_i (-1)^{i-1} {g, f_i} f_1..^f_i..f_d
      for (std::size_t i = 0; i < d; ++i) {
        const double p = pairing(g, t.factors[i]);
        if (p == 0.0) continue;
        std::vector<FermionMode> rest;
        for (std::size_t j = 0; j < d; ++j)
          if (j != i) rest.push_back(t.factors[j]);
        const double sign = (i % 2 == 0) ? -1.0 : 1.0;
        out.add_term(sign * p * t.coef * x.coef, std::move(rest));
      }
    }
  }
  return out.simplified();
}

ModePolynomial restrict_band(const ModePolynomial& l, HalfInt band) {
  ModePolynomial out;
  for (const auto& t : l.terms()) {
    bool keep = std::all_of(t.factors.begin(), t.factors.end(), [&](const FermionMode& f) { return f.index.abs() <= band; });
    if (keep) out.add_term(t.coef, t.factors);
  }
  return out;
}

double linear_distance(const ModePolynomial& a, const ModePolynomial& b) {
  double d = 0;
  const ModePolynomial diff = (a - b).simplified();
  for (const auto& t : diff.terms()) d = std::max(d, std::abs(t.coef));
  return d;
}

// ---------------------------------------------------------------- currents

ModePolynomial embedded_current_mode(int n, HalfInt cutoff) {
  ModePolynomial p;
  for (int nu = 0;; ++nu) {
    const HalfInt a = HalfInt::integer(n - nu) - hi(1);
    const HalfInt b = HalfInt::integer(n + nu) + hi(1);
    if (a.abs() > cutoff && b.abs() > cutoff && nu > std::abs(n) + 1) break;
    if (a.abs() > cutoff || b.abs() > cutoff) continue;
    const double sign = ((n + nu + 1) % 2 == 0) ? 1.0 : -1.0;
    p.add_term(sign, {{0, a}, {0, b}});
  }
  return p;
}

ModePolynomial current_mode_complex(int n, HalfInt cutoff) {
  ModePolynomial p;
  for (HalfInt k : labels(Sector::NS, cutoff)) {
    const HalfInt a = HalfInt::integer(n) - k;
    if (a.abs() > cutoff) continue;
    p += normal_pair({kPhiStar, a}, {kPhi, k});
  }
  return p;
}

ModePolynomial embed(const ModePolynomial& complex_poly, HalfInt psi_cutoff) {
  return complex_poly.substitute(complex_to_single(2)).truncated(psi_cutoff).simplified();
}

ModePolynomial pull_back(const ModePolynomial& real_poly, HalfInt phi_cutoff) {
  return real_poly.substitute(single_to_complex(2)).truncated(phi_cutoff).simplified();
}

// ---------------------------------------------------------------- Virasoro

ModePolynomial virasoro_real_mode(int n, HalfInt cutoff, Sector sector, int species) {
  ModePolynomial p;
  for (HalfInt b : labels(sector, cutoff)) {
    const HalfInt a = HalfInt::integer(n) - b;
    if (a.abs() > cutoff) continue;
    const double c = 0.5 * (b.value() - 0.5 * n);
    if (c == 0.0) continue;
    p += normal_pair({species, a}, {species, b}, c);
  }
  if (sector == Sector::Ramond && n == 0) p += ModePolynomial::constant(1.0 / 16.0);
  return p;
}

ModePolynomial virasoro_complex_mode(int n, HalfInt cutoff) {
  ModePolynomial p;
  for (HalfInt b : labels(Sector::NS, cutoff)) {
    const HalfInt a = HalfInt::integer(n) - b;
    if (a.abs() > cutoff) continue;
    p += normal_pair({kPhiStar, a}, {kPhi, b}, b.value() - 0.5 * n);
  }
  return p;
}

CurrentPolynomial CurrentPolynomial::constant(cplx c) {
  CurrentPolynomial p;
  p.add_term(c, {});
  return p;
}

CurrentPolynomial CurrentPolynomial::mode(HalfInt r, cplx c) {
  CurrentPolynomial p;
  p.add_term(c, {r});
  return p;
}

void CurrentPolynomial::add_term(cplx c, std::vector<HalfInt> modes) {
  if (c != cplx{}) terms_.push_back({c, std::move(modes)});
}

CurrentPolynomial& CurrentPolynomial::operator+=(const CurrentPolynomial& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

CurrentPolynomial operator*(const CurrentPolynomial& a, const CurrentPolynomial& b) {
  CurrentPolynomial r;
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) {
      auto m = x.modes;
      m.insert(m.end(), y.modes.begin(), y.modes.end());
      r.add_term(x.coef * y.coef, std::move(m));
    }
  return r;
}

CurrentPolynomial operator*(cplx c, CurrentPolynomial a) {
  CurrentPolynomial r;
  for (const auto& t : a.terms()) r.add_term(c * t.coef, t.modes);
  return r;
}

CurrentPolynomial CurrentPolynomial::simplified(double eps) const {
  std::map<std::vector<HalfInt>, cplx> acc;
  for (const auto& t : terms_) acc[t.modes] += t.coef;
  CurrentPolynomial r;
  for (auto& [m, c] : acc)
    if (std::abs(c) > eps) r.add_term(c, m);
  return r;
}

ModePolynomial CurrentPolynomial::realize(const std::function<ModePolynomial(HalfInt)>& j) const {
  std::map<HalfInt, ModePolynomial> cache;
  auto get = [&](HalfInt r) -> const ModePolynomial& {
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, j(r)).first;
    return it->second;
  };
  ModePolynomial out;
  for (const auto& t : terms_) {
    ModePolynomial acc = ModePolynomial::constant(t.coef);
    for (HalfInt r : t.modes) acc = acc * get(r);
    out += acc;
  }
  return out.simplified();
}

CurrentPolynomial sugawara_mode(int n, HalfInt max_right, bool twisted) {
  CurrentPolynomial p;
  const HalfInt N = HalfInt::integer(n);
  const HalfInt step = HalfInt::integer(1);
  const auto fl = static_cast<std::int64_t>(std::floor(n / 2.0));
  HalfInt b = twisted ? HalfInt::half_odd(fl - 1) : HalfInt::integer(fl - 1);
  while (b * 2 <= N) b += step;
  for (; b <= max_right; b += step) p.add_term(1.0, {N - b, b});
  const HalfInt mid = HalfInt::from_twice(n);
  const bool on_lattice = twisted ? mid.is_half_odd() : mid.is_integer();
  if (on_lattice && mid <= max_right) p.add_term(0.5, {mid, mid});
  return p;
}

CurrentPolynomial ChargeAutomorphism::apply(const CurrentPolynomial& p) const {
  CurrentPolynomial out;
  for (const auto& t : p.terms()) {
    CurrentPolynomial acc = CurrentPolynomial::constant(t.coef);
    for (HalfInt r : t.modes) {
      CurrentPolynomial f = CurrentPolynomial::mode(r);
      if (r == HalfInt{}) f += CurrentPolynomial::constant(q);
      acc = acc * f;
    }
    out += acc;
  }
  return out.simplified();
}

// ---------------------------------------------------------------- checks

WindowCheck compare_on_window(const FockSpace& space, const ModePolynomial& a, const ModePolynomial& b, double emax) {
  WindowCheck c;
  c.window_energy = emax;
  c.window_states = space.window(emax).size();
  c.residual = window_residual(space, space.op((a - b).simplified()), emax);
  return c;
}

WindowCheck current_ccr(int m, int n, HalfInt cutoff) {
  auto space = FockSpace::build(Sector::NS, cutoff);
  const ModePolynomial a = embedded_current_mode(m, cutoff), b = embedded_current_mode(n, cutoff);
  ModePolynomial rhs;
  if (m + n == 0) rhs = ModePolynomial::constant(static_cast<double>(m));
  const double e = cutoff.value() - 2.0 * std::max(std::abs(m), std::abs(n));
  if (e < 0) throw std::domain_error("current_ccr: cutoff too small");
  return compare_on_window(space, a * b - b * a, rhs, e);
}

double vacuum_bracket(StressRealization kind, int m, HalfInt cutoff) {
  switch (kind) {
    case StressRealization::RealFermion: {
      if (cutoff.value() < std::abs(m)) throw std::domain_error("vacuum_bracket: cutoff too small");
      auto space = FockSpace::build(Sector::NS, cutoff);
      const ModePolynomial a = virasoro_real_mode(m, cutoff), b = virasoro_real_mode(-m, cutoff);
      return space.vacuum_expectation(a * b - b * a).real();
    }
    case StressRealization::ComplexFermion: {
      if (cutoff.value() < std::abs(m)) throw std::domain_error("vacuum_bracket: cutoff too small");
      auto space = FockSpace::build(Sector::NS, cutoff, 2);
      const ModePolynomial a = to_real2(virasoro_complex_mode(m, cutoff)), b = to_real2(virasoro_complex_mode(-m, cutoff));
      return space.vacuum_expectation(a * b - b * a).real();
    }
    case StressRealization::EmbeddedSugawara: {
      if (cutoff.value() < 2.0 * std::abs(m)) throw std::domain_error("vacuum_bracket: cutoff too small");
      auto space = FockSpace::build(Sector::NS, cutoff);
      const HalfInt right = HalfInt::integer(std::abs(m) + 1);
      auto j = [&](HalfInt k) { return embedded_current_mode(static_cast<int>(k.as_integer()), cutoff); };
      const ModePolynomial a = sugawara_mode(m, right).realize(j), b = sugawara_mode(-m, right).realize(j);
      return space.vacuum_expectation(a * b - b * a).real();
    }
  }
  return 0.0;
}

StressModeResult stress_mode_identity(int n, HalfInt cutoff, bool charged) {
  auto space = FockSpace::build(Sector::NS, cutoff);
  const ModePolynomial half_L = virasoro_real_mode(2 * n, cutoff) * 0.5;
  StressModeResult r;
  if (!charged) {
    const ModePolynomial lhs = embed(virasoro_complex_mode(n, cutoff), cutoff);
    const ModePolynomial rhs = embedded_current_mode(n, cutoff) * (-0.25) + half_L;
    r.residual = (lhs - rhs).canonical();
    const double e = cutoff.value() - std::abs(2.0 * n);
    r.check = compare_on_window(space, lhs, rhs, e);
    return r;
  }
  const double e = find_window([&](double en) { return sugawara_exact(n, en, cutoff, false); }, cutoff);
  const CurrentPolynomial L = ChargeAutomorphism{0.25}.apply(sugawara_mode(n, half_odd_floor(e / 2.0 + 1.0)));
  const ModePolynomial lhs = L.realize([&](HalfInt k) { return embedded_current_mode(static_cast<int>(k.as_integer()), cutoff); });
  ModePolynomial rhs = half_L;
  if (n == 0) rhs += ModePolynomial::constant(1.0 / 32.0);
  r.check = compare_on_window(space, lhs, rhs, e);
  return r;
}

GaugeMixingResult gauge_mixing(double theta, const CirclePoint& z, HalfInt cutoff) {
  auto space = FockSpace::build(Sector::NS, cutoff);
  const SparseMatrix B = space.matrix(embedded_current_mode(0, cutoff));
  const DenseMatrix U = expm_blockwise(SparseMatrix(kI * theta * B));
  const HalfInt K = half_odd_floor(cutoff.value() / 2.0 + 0.5);
  ModePolynomial F, Fr;
  for (HalfInt m : labels(Sector::NS, K)) {
    const cplx w = ipow(z.z(), -m - hi(1));
    F += ModePolynomial::generator({0, m}, w);
    Fr += ModePolynomial::generator({0, m}, w * static_cast<double>(sign_power(-m - hi(1))));
  }
  const SparseMatrix f = space.matrix(F), fr = space.matrix(Fr);
  GaugeMixingResult res;
  res.window_energy = cutoff.value() - K.value();
  const double c = std::cos(theta), s = std::sin(theta);
  for (auto idx : space.window(res.window_energy)) {
    const Vector v = space.basis(idx);
    const Vector lhs = U * (f * (U.adjoint() * v));
    const Vector fv = f * v, frv = fr * v;
    res.finite = std::max(res.finite, (lhs - (c * fv - kI * s * frv)).lpNorm<Eigen::Infinity>());
    res.finite_literal = std::max(res.finite_literal, (lhs - (c * fv + s * frv)).lpNorm<Eigen::Infinity>());
    const Vector inf = kI * (B * fv - f * (B * v));
    res.infinitesimal = std::max(res.infinitesimal, (inf + kI * frv).lpNorm<Eigen::Infinity>());
    res.infinitesimal_literal = std::max(res.infinitesimal_literal, (inf - frv).lpNorm<Eigen::Infinity>());
  }
  return res;
}

ActionResult embedded_diffeo_action(int m, cplx z, HalfInt cutoff) {
  const ModePolynomial Q = embed(virasoro_complex_mode(m, cutoff), cutoff);
  const HalfInt K = half_odd_floor((cutoff.value() - 2.0 * std::abs(m)) / 2.0 + 0.5);
  if (K < hi(1)) throw std::domain_error("embedded_diffeo_action: cutoff too small");
  ModePolynomial F;
  for (HalfInt k : labels(Sector::NS, K)) F += ModePolynomial::generator({0, k}, ipow(z, -k - hi(1)));
  const ModePolynomial lhs = commutator_linear(Q, F, real_pairing()) * (-1.0);

  ModePolynomial rhs;
  for (HalfInt k : labels(Sector::NS, K)) {
    const HalfInt p = k + HalfInt::integer(2 * m);
    const double c = 0.5 * (p.value() + 0.5) - 0.5 * (m + 1) + 0.25 * (1.0 - sign_power(-p - hi(1)));
    rhs += ModePolynomial::generator({0, p}, c * ipow(z, HalfInt::integer(2 * m) - p - hi(1)));
  }
  ActionResult r;
  r.band = linear_distance(lhs, rhs);

  auto space = FockSpace::build(Sector::NS, cutoff);
  const double e = cutoff.value() - K.value() - 2.0 * std::abs(m);
  const LinearOp q = space.op(Q), f = space.op(F), g = space.op(rhs);
  const LinearOp diff = scaled(-1.0, commutator(q, f)) - g;
  r.window = window_residual(space, diff, e);
  return r;
}

double charged_stress_field_residual(cplx z, HalfInt cutoff) {
  auto space = FockSpace::build(Sector::NS, cutoff);
  const double e = std::floor(cutoff.value()) / 2.0;
  const cplx Z = z * z;
  ModePolynomial lhs, rhs;
  const double inv2pi = 1.0 / (2.0 * kPi);
  for (int n = -static_cast<int>(e); n <= static_cast<int>(e); ++n) {
    if (std::abs(2.0 * n) > e) continue;
    ModePolynomial t = embed(virasoro_complex_mode(n, cutoff), cutoff) + embedded_current_mode(n, cutoff) * 0.25;
    if (n == 0) t += ModePolynomial::constant(1.0 / 32.0);
    lhs += t * (inv2pi * std::pow(Z, -n - 2));
  }
  for (int N = -static_cast<int>(e); N <= static_cast<int>(e); ++N) {
    const cplx w = std::pow(z, -N - 2) + std::pow(-z, -N - 2);
    if (std::abs(w) == 0.0) continue;
    rhs += virasoro_real_mode(N, cutoff) * (inv2pi * w / (4.0 * Z));
  }
  rhs += ModePolynomial::constant(1.0 / (64.0 * kPi * Z * Z));
  return compare_on_window(space, lhs, rhs, e).residual;
}

WindowCheck inverse_stress_mode_check(int N, HalfInt cutoff, bool negated_stress) {
  auto space = FockSpace::build(Sector::NS, cutoff, 2);
  const HalfInt psi_cut = cutoff * 2 + hi(1);
  const ModePolynomial lhs = pull_back(virasoro_real_mode(N, psi_cut), cutoff);
  ModePolynomial rhs;
  if (N % 2 == 0) {
    const int n = N / 2;
    rhs = virasoro_complex_mode(n, cutoff) * (negated_stress ? -2.0 : 2.0) + current_mode_complex(n, cutoff) * 0.5;
  } else {
    const int s = (N - 1) / 2;
    for (HalfInt b : labels(Sector::NS, cutoff)) {
      const HalfInt a = HalfInt::integer(s) - b;
      if (a.abs() <= cutoff) rhs += normal_pair({kPhi, a}, {kPhi, b}, b.value() + 0.5);
      const HalfInt a2 = HalfInt::integer(s + 1) - b;
      if (a2.abs() <= cutoff) rhs += normal_pair({kPhiStar, a2}, {kPhiStar, b}, b.value() + 0.5);
    }
  }
  return compare_on_window(space, to_real2(lhs), to_real2(rhs), cutoff.value() - std::abs(N) / 2.0);
}

ActionResult embedded_real_on_complex(const std::map<int, cplx>& f, cplx z, HalfInt cutoff) {
  int max_shift = 0;
  for (auto& [N, c] : f) max_shift = std::max(max_shift, std::abs(N));
  const HalfInt psi_cut = cutoff * 2 + hi(1);
  ModePolynomial Q;
  for (auto& [N, c] : f) Q -= pull_back(virasoro_real_mode(N, psi_cut), cutoff) * c;
  const cplx Z = z * z;

  // Laurent coefficients of f_-(Z) = z (f(z) - f(-z)) and f_+(Z) = f(z) + f(-z)
  std::map<int, cplx> fm, fp;
  for (auto& [N, c] : f) {
    if (N % 2 == 0) fm[N / 2 + 1] += 2.0 * c;
    else fp[(N + 1) / 2] += 2.0 * c;
  }
  auto eval = [&](const std::map<int, cplx>& g, int shift, bool deriv) {
    cplx s{};
    for (auto& [e, c] : g) s += (deriv ? c * static_cast<double>(e) * std::pow(Z, e - 1) : c * std::pow(Z, e)) * std::pow(Z, shift);
    return s;
  };
  const cplx fmZ = eval(fm, 0, false), dfmZ = eval(fm, 0, true), fpZ = eval(fp, 0, false), dfpZ = eval(fp, 0, true);

  const HalfInt K = cutoff;
  ModePolynomial Phi, rhs;
  for (HalfInt nu : labels(Sector::NS, K)) {
    const cplx p = ipow(Z, -nu - hi(1));
    const double e = -nu.value() - 0.5;
    Phi += ModePolynomial::generator({kPhi, nu}, p);
    const cplx a = -fmZ * e * p / Z - 0.5 * dfmZ * p + fmZ * p / (4.0 * Z);
    const cplx b = -Z * fpZ * e * p / Z - 0.5 * Z * dfpZ * p - 0.5 * fpZ * p;
    rhs += ModePolynomial::generator({kPhi, nu}, a);
    rhs += ModePolynomial::generator({kPhiStar, nu}, b);
  }
  const ModePolynomial lhs = commutator_linear(Q, Phi, complex_pairing(2));
  ActionResult r;
  const HalfInt band = K - HalfInt::integer((max_shift + 3) / 2) - HalfInt::integer(1);
  const ModePolynomial lb = restrict_band(lhs, band), rb = restrict_band(rhs, band);
  r.band = linear_distance(lb, rb);

  // Fock realization: the commutator evaluated as matrices, then the band identity
  auto space = FockSpace::build(Sector::NS, cutoff, 2);
  const HalfInt kf = half_odd_floor(cutoff.value() / 2.0);
  const ModePolynomial phf = restrict_band(Phi, kf);
  const LinearOp q = space.op(to_real2(Q)), ph = space.op(to_real2(phf));
  const ModePolynomial lhsf = commutator_linear(Q, phf, complex_pairing(2));
  const double comm = window_residual(space, commutator(q, ph) - space.op(to_real2(lhsf)), cutoff.value() - kf.value());
  const double ident = window_residual(space, space.op(to_real2(lb - rb)), cutoff.value() - band.value());
  r.window = std::max(comm, ident);
  return r;
}

// ---------------------------------------------------------------- Ramond

ModePolynomial ramond_current_mode(HalfInt r, HalfInt cutoff) {
  if (!r.is_half_odd()) throw std::invalid_argument("ramond_current_mode: r must be half-odd");
  ModePolynomial p;
  const HalfInt two_r = r * 2;
  for (HalfInt b : labels(Sector::Ramond, cutoff)) {
    const HalfInt a = two_r - b;
    if (a.abs() > cutoff) continue;
    p += normal_pair({0, a}, {0, b}, static_cast<double>(sign_power(b)) / (2.0 * kI));
  }
  return p.simplified();
}

cplx ramond_current_one_point(cplx z) {
  const auto k = QuasifreeKernel::ramond_periodic();
  return two_point(k, {FieldTerm(1.0, z)}, {FieldTerm(1.0, -z)}) / (2.0 * kI * z * z);
}

cplx ramond_current_two_point(cplx z, cplx w) {
  const auto k = QuasifreeKernel::ramond_periodic();
  const std::vector<FieldCombo> f = {{FieldTerm(1.0, z)}, {FieldTerm(1.0, -z)}, {FieldTerm(1.0, w)}, {FieldTerm(1.0, -w)}};
  return -npoint_wick(k, f, {0, 0, 1, 1}) / (4.0 * z * z * w * w);
}

namespace {

std::function<ModePolynomial(HalfInt)> ramond_currents(HalfInt cutoff) {
  return [cutoff](HalfInt r) { return ramond_current_mode(r, cutoff); };
}

}  // namespace

double ramond_L0_expectation(int cutoff) {
  const HalfInt M = HalfInt::integer(cutoff);
  auto space = FockSpace::build(Sector::Ramond, M);
  const HalfInt B = hi(5);
  const ModePolynomial L1 = sugawara_mode(1, B, true).realize(ramond_currents(M));
  const ModePolynomial Lm1 = sugawara_mode(-1, B, true).realize(ramond_currents(M));
  const Vector v = space.vacuum();
  const cplx val = 0.5 * (v.dot(space.apply(L1, space.apply(Lm1, v))) - v.dot(space.apply(Lm1, space.apply(L1, v))));
  return val.real();
}

double ramond_L0_point_split(double lambda, cplx w) {
  const cplx u = std::sqrt(lambda) * w;
  const cplx W = w * w, V = u * u;
  const cplx g = ramond_current_two_point(w, u);
  return (0.5 * W * W * (g - 1.0 / ((W - V) * (W - V)))).real();
}

WindowCheck ramond_stress_check(int n, int cutoff) {
  const HalfInt M = HalfInt::integer(cutoff);
  auto space = FockSpace::build(Sector::Ramond, M);
  const ModePolynomial rhs = virasoro_real_mode(2 * n, M, Sector::Ramond) * 0.5 +
                             (n == 0 ? ModePolynomial::constant(1.0 / 32.0) : ModePolynomial{});
  if (n != 0) {
    const double e = find_window([&](double en) { return sugawara_exact(n, en, M, true); }, M);
    const ModePolynomial lhs = sugawara_mode(n, half_odd_floor(e / 2.0 + 1.0), true).realize(ramond_currents(M));
    return compare_on_window(space, lhs, rhs, e);
  }
  const double e = find_window(
      [&](double en) {
        return sugawara_exact(-1, en, M, true) && sugawara_exact(1, en + 2.0, M, true) && sugawara_exact(1, en, M, true);
      },
      M);
  const HalfInt B = half_odd_floor(e / 2.0 + 2.0);
  const ModePolynomial L1 = sugawara_mode(1, B, true).realize(ramond_currents(M));
  const ModePolynomial Lm1 = sugawara_mode(-1, B, true).realize(ramond_currents(M));
  const LinearOp lhs = scaled(0.5, commutator(space.op(L1), space.op(Lm1)));
  WindowCheck c;
  c.window_energy = e;
  c.window_states = space.window(e).size();
  c.residual = window_residual(space, lhs - space.op(rhs), e);
  return c;
}

}  // namespace mlf
