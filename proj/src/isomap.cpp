#include "mlf/isomap.hpp"

#include <cmath>
#include <stdexcept>

namespace mlf {

namespace {

cplx omega_pow(int n, std::int64_t e) {
  const std::int64_t r = ((e % n) + n) % n;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / n);
}

void check_label(int n, int k) {
  if (n < 1) throw std::invalid_argument("number of fields must be positive");
  if (k < 1 || k > n) throw std::out_of_range("field label k=" + std::to_string(k) + " outside 1.." + std::to_string(n));
}

}  // namespace

FieldLabel::FieldLabel(int n_fields, int index) : n(n_fields), k(index) { check_label(n, k); }

HalfInt beta_mode(int n, int k, HalfInt nu) {
  check_label(n, k);
  if (!nu.is_half_odd()) throw std::invalid_argument("beta_mode: nu must be half-odd");
  const std::int64_t p = (nu + HalfInt::half_odd(0)).as_integer();
  return HalfInt::half_odd(0) - HalfInt::integer(k) + HalfInt::integer(p * n);
}

std::pair<int, HalfInt> beta_mode_inverse(int n, HalfInt m) {
  if (n < 1) throw std::invalid_argument("number of fields must be positive");
  if (!m.is_half_odd()) throw std::invalid_argument("beta_mode_inverse: m must be half-odd");
  // m - 1/2 = p n - k with p integer, k in 1..n
  const std::int64_t a = (m - HalfInt::half_odd(0)).as_integer();
  std::int64_t k = ((-a) % n + n) % n;
  if (k == 0) k = n;
  const std::int64_t p = (a + k) / n;
  return {static_cast<int>(k), HalfInt::half_odd(p - 1)};
}

FieldCombo beta_field_at_root(int n, int k, cplx z) {
  check_label(n, k);
  FieldCombo out;
  const cplx pre = std::pow(z, 1 - k) / static_cast<double>(n);
  for (int j = 0; j < n; ++j) out.emplace_back(pre * omega_pow(n, static_cast<std::int64_t>(1 - k) * j), omega_pow(n, j) * z, 0);
  return out;
}

FieldCombo beta_field(int n, int k, const CirclePoint& Z) {
  return beta_field_at_root(n, k, std::polar(1.0, Z.phase() / n));
}

FieldCombo beta_inv_field(int n, const CirclePoint& z) {
  if (n < 1) throw std::invalid_argument("number of fields must be positive");
  FieldCombo out;
  const cplx Z = std::pow(z.z(), n);
  for (int k = 1; k <= n; ++k) out.emplace_back(std::pow(z.z(), k - 1), Z, k);
  return out;
}

NoncompactImage beta_noncompact(double x) {
  if (x == 0.0 || std::abs(x) >= 1.0) throw std::domain_error("beta_noncompact: need 0 < |x| < 1");
  const cplx a = 1.0 - kI * x, b = 1.0 + kI * x;
  const double s = 1.0 - x * x;
  NoncompactImage r;
  r.phi = {FieldTerm(s / (2.0 * a), x, 0), FieldTerm(kI * s / (2.0 * x * a), -1.0 / x, 0)};
  r.phi_star = {FieldTerm(s / (2.0 * b), x, 0), FieldTerm(-kI * s / (2.0 * x * b), -1.0 / x, 0)};
  return r;
}

NoncompactImage beta_noncompact_swapped(double x) {
  if (x == 0.0 || std::abs(x) >= 1.0) throw std::domain_error("beta_noncompact: need 0 < |x| < 1");
  const cplx a = 1.0 - kI * x, b = 1.0 + kI * x;
  const double q = q_map(x);
  NoncompactImage r;
  r.phi = {FieldTerm(x / (q * a), x, 0), FieldTerm(kI / (q * b), -1.0 / x, 0)};
  r.phi_star = {FieldTerm(x / (q * b), x, 0), FieldTerm(-kI / (q * a), -1.0 / x, 0)};
  return r;
}

FieldCombo beta_inv_noncompact(double x) {
  const double q = q_map(x);
  const double s = 1.0 - x * x;
  return {FieldTerm((1.0 - kI * x) / s, q, 1), FieldTerm((1.0 + kI * x) / s, q, 2)};
}

FieldCombo beta_inv_noncompact_swapped(double x) {
  const double q = q_map(x);
  const double s = 1.0 - x * x;
  return {FieldTerm((1.0 + kI * x) / s, q, 1), FieldTerm((1.0 - kI * x) / s, q, 2)};
}

HalfInt betaR_mode(RamondSource which, HalfInt nu) {
  if (which == RamondSource::RamondField && !nu.is_integer())
    throw std::invalid_argument("betaR_mode: Ramond factor modes are integers");
  if (which == RamondSource::VacuumField && !nu.is_half_odd())
    throw std::invalid_argument("betaR_mode: vacuum factor modes are half-odd");
  return nu * 2;
}

FieldCombo betaR_field(RamondSource which, cplx z) {
  if (which == RamondSource::RamondField) return {FieldTerm(0.5, z, 1), FieldTerm(0.5, -z, 1)};
  return {FieldTerm(0.5 / z, z, 1), FieldTerm(-0.5 / z, -z, 1)};
}

ModeMap complex_to_single(int n) {
  return [n](const FermionMode& m) {
    return ModePolynomial::generator({0, beta_mode(n, m.species, m.index)});
  };
}

ModeMap complex_to_real(int n) {
  return [n](const FermionMode& m) {
    const int k = m.species;
    check_label(n, k);
    const double r = M_SQRT1_2;
    if (2 * k == n + 1) return ModePolynomial::generator({k - 1, m.index});
    if (2 * k < n + 1)
      return ModePolynomial::generator({k - 1, m.index}, r) + ModePolynomial::generator({n - k, m.index}, kI * r);
    const int p = n + 1 - k;
    return ModePolynomial::generator({p - 1, m.index}, r) + ModePolynomial::generator({k - 1, m.index}, -kI * r);
  };
}

FermionMode complex_adjoint(int n, const FermionMode& m) {
  check_label(n, m.species);
  return {n + 1 - m.species, -m.index};
}

ModeMap single_to_complex(int n) {
  return [n](const FermionMode& m) {
    auto [k, nu] = beta_mode_inverse(n, m.index);
    return ModePolynomial::generator({k, nu});
  };
}

}  // namespace mlf
