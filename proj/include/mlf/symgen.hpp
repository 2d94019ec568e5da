#pragma once

#include <functional>
#include <map>
#include <vector>

#include "mlf/fock.hpp"
#include "mlf/isomap.hpp"

namespace mlf {

// Species conventions. The single real field is species 0. Complex fields
// for n = 2 carry labels 1 (phi) and 2 (phi*), realized on two real species
// through complex_to_real(2).
inline constexpr int kPhi = 1;
inline constexpr int kPhiStar = 2;

/// {a, b} as a multiple of the identity.
using Pairing = std::function<double(const FermionMode&, const FermionMode&)>;
Pairing real_pairing();
/// {phi^(k)_a, phi^(l)_b} = delta_{k+l, n+1} delta_{a+b, 0}.
Pairing complex_pairing(int n);

/// c :ab: with respect to the NS vacuum or the Ramond ground state.
ModePolynomial normal_pair(const FermionMode& a, const FermionMode& b, cplx c = 1.0);

/// [Q, L] for Q with only even-degree terms and L linear.
ModePolynomial commutator_linear(const ModePolynomial& q, const ModePolynomial& l, const Pairing& pairing);

/// Linear polynomial restricted to generators with |index| <= band.
ModePolynomial restrict_band(const ModePolynomial& l, HalfInt band);
/// Largest coefficient difference between two linear polynomials.
double linear_distance(const ModePolynomial& a, const ModePolynomial& b);

// ---------------------------------------------------------------- currents

/// beta(j_n) = sum_{nu >= 0} (-1)^{n+nu+1} psi_{n-nu-1/2} psi_{n+nu+1/2}, modes within cutoff.
ModePolynomial embedded_current_mode(int n, HalfInt cutoff);
/// j_n = sum_k :phi*_{n-k} phi_k:, phi modes within cutoff.
ModePolynomial current_mode_complex(int n, HalfInt cutoff);
/// beta(X) for a polynomial X in phi labels, truncated at the psi cutoff.
ModePolynomial embed(const ModePolynomial& complex_poly, HalfInt psi_cutoff);
/// beta^{-1}(X) for a polynomial in the single real field, truncated at the phi cutoff.
ModePolynomial pull_back(const ModePolynomial& real_poly, HalfInt phi_cutoff);

// ---------------------------------------------------------------- Virasoro

/// L_n = 1/2 sum_b (b - n/2) :psi_{n-b} psi_b: (+1/16 at n = 0 in the Ramond sector).
ModePolynomial virasoro_real_mode(int n, HalfInt cutoff, Sector sector = Sector::NS, int species = 0);
/// L_n = sum_b (b - n/2) :phi*_{n-b} phi_b:.
ModePolynomial virasoro_complex_mode(int n, HalfInt cutoff);

/// Polynomial in current modes j_r (integer or half-odd r).
class CurrentPolynomial {
 public:
  struct Term {
    cplx coef;
    std::vector<HalfInt> modes;
  };
  static CurrentPolynomial constant(cplx c);
  static CurrentPolynomial mode(HalfInt r, cplx c = 1.0);
  const std::vector<Term>& terms() const { return terms_; }
  void add_term(cplx c, std::vector<HalfInt> modes);
  CurrentPolynomial& operator+=(const CurrentPolynomial& o);
  friend CurrentPolynomial operator+(CurrentPolynomial a, const CurrentPolynomial& b) { return a += b; }
  friend CurrentPolynomial operator*(const CurrentPolynomial& a, const CurrentPolynomial& b);
  friend CurrentPolynomial operator*(cplx c, CurrentPolynomial a);
  CurrentPolynomial simplified(double eps = 0.0) const;
  /// Substitutes fermion polynomials for the current modes.
  ModePolynomial realize(const std::function<ModePolynomial(HalfInt)>& j) const;

 private:
  std::vector<Term> terms_;
};

/// L_n = 1/2 sum_r :j_{n-r} j_r: with the larger index on the right; only
/// pairs whose right index is <= max_right are kept (they annihilate states
/// of lower energy). Half-odd r when twisted. No constant is added.
CurrentPolynomial sugawara_mode(int n, HalfInt max_right, bool twisted = false);

/// rho^q: j_r -> j_r + q delta_{r,0}.
struct ChargeAutomorphism {
  double q = 0.0;
  CurrentPolynomial apply(const CurrentPolynomial& p) const;
};

// ---------------------------------------------------------------- checks

struct WindowCheck {
  double residual = 0.0;
  double window_energy = 0.0;
  std::size_t window_states = 0;
};

/// max window residual of A - B, both realized in `space`.
WindowCheck compare_on_window(const FockSpace& space, const ModePolynomial& a, const ModePolynomial& b, double emax);

/// [beta(j_m), beta(j_n)] - m delta_{m+n,0} on the NS window.
WindowCheck current_ccr(int m, int n, HalfInt cutoff);

/// <Omega, [L_m, L_{-m}] Omega> for the three realizations.
enum class StressRealization { RealFermion, ComplexFermion, EmbeddedSugawara };
double vacuum_bracket(StressRealization kind, int m, HalfInt cutoff);

/// beta(L^{c=1}_n) + 1/4 beta(j_n) - 1/2 L_{2n} on the single-field window; with
/// `charged`, beta(rho^{1/4}(L^curr_n)) - 1/2 L_{2n} - delta_{n,0}/32 using the
/// Sugawara form in embedded currents.
struct StressModeResult {
  ModePolynomial residual;  // symbolic, canonical form (charged = false only)
  WindowCheck check;
};
StressModeResult stress_mode_identity(int n, HalfInt cutoff, bool charged = false);

/// Gauge mixing under exp(i theta beta(j_0)): compares Ad(U) psi-hat(z) with
/// cos(theta) psi-hat(z) - i sin(theta) psi-hat(-z) on the window.
struct GaugeMixingResult {
  double finite = 0.0;         // finite rotation, reflected field -i psi-hat(-z)
  double finite_literal = 0.0; // same with psi-hat(-z) in place of -i psi-hat(-z)
  double infinitesimal = 0.0;  // i[beta(j_0), psi-hat(z)] + i psi-hat(-z)
  double infinitesimal_literal = 0.0;
  double window_energy = 0.0;
};
GaugeMixingResult gauge_mixing(double theta, const CirclePoint& z, HalfInt cutoff);

/// i[beta(T^{c=1}(f)), psi-hat(z)] for f(Z) = Z^{m+1} against the
/// geometric-plus-mixing formula, compared on a complete mode band and on
/// the Fock window.
struct ActionResult {
  double band = 0.0;
  double window = 0.0;
};
ActionResult embedded_diffeo_action(int m, cplx z, HalfInt cutoff);

/// Field-level form of the charged identity: matrix elements of
/// beta(rho^{1/4}(T^{c=1}(z^2))) and (T(z) + T(-z))/(4z^2) + 1/(64 pi z^4) on the window.
double charged_stress_field_residual(cplx z, HalfInt cutoff);

/// beta^{-1}(L_N) against 2 L^{c=1}_n + 1/2 j_n (N = 2n) or -A_s - B_{s+1}
/// (N = 2s+1) on the two-species window. `negated_stress` uses -2 instead of +2.
WindowCheck inverse_stress_mode_check(int N, HalfInt cutoff, bool negated_stress = false);

/// i[beta^{-1}(T^{c=1/2}(f)), phi(z^2)] for f(z) = sum_N c_N z^{N+1}, against
/// the f_+/f_- action formula.
ActionResult embedded_real_on_complex(const std::map<int, cplx>& f, cplx z, HalfInt cutoff);

// ---------------------------------------------------------------- Ramond

/// beta_R(j_r) = (1/2i) sum_b (-1)^b :psi_{R,2r-b} psi_{R,b}:, r half-odd.
ModePolynomial ramond_current_mode(HalfInt r, HalfInt cutoff);
/// omega_R(beta_R(j-hat(z^2))) from the Ramond kernel without subtraction.
cplx ramond_current_one_point(cplx z);
/// omega_R(beta_R(j-hat(z^2)) beta_R(j-hat(w^2))) by Pfaffian.
cplx ramond_current_two_point(cplx z, cplx w);
/// <beta_R(L^curr_0)> with L_0 = [L_1, L_{-1}]/2 in the Ramond Fock space.
double ramond_L0_expectation(int cutoff);
/// w^2/2 (omega(j(w) j(lambda w)) - 1/(w - lambda w)^2) through the embedded current.
double ramond_L0_point_split(double lambda, cplx w = cplx(0.6, 0.8));
/// beta_R(L^curr_n) - 1/2 pi_R(L_{2n}) - delta_{n,0}/32 on the Ramond window (n != 0 via
/// Sugawara; n = 0 via the bracket).
WindowCheck ramond_stress_check(int n, int cutoff);

}  // namespace mlf
