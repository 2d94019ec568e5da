#pragma once

#include <functional>
#include <utility>

#include "mlf/core.hpp"
#include "mlf/fock.hpp"
#include "mlf/wick.hpp"

namespace mlf {

/// Complex field label phi^(k), k = 1..n, with (phi^(k))^* = phi^(n+1-k).
struct FieldLabel {
  int n;
  int k;
  FieldLabel(int n_fields, int index);
  FieldLabel conjugate() const { return FieldLabel(n, n + 1 - k); }
  bool is_real() const { return 2 * k == n + 1; }
};

/// NS mode 1/2 - k + (nu + 1/2) n of the single real field carrying phi^(k)_nu.
HalfInt beta_mode(int n, int k, HalfInt nu);
/// The unique (k, nu) with beta_mode(n, k, nu) = m.
std::pair<int, HalfInt> beta_mode_inverse(int n, HalfInt m);

/// Image of phi^(k)(z^n) as a combination of psi-hat (field 0) at the points
/// omega^j z. Any n-th root z of Z may be supplied.
FieldCombo beta_field_at_root(int n, int k, cplx z);
/// Same with the principal n-th root of Z.
FieldCombo beta_field(int n, int k, const CirclePoint& Z);
/// Preimage of psi-hat(z): sum_k z^{k-1} phi^(k)(z^n), complex fields 1..n.
FieldCombo beta_inv_field(int n, const CirclePoint& z);

/// Line-picture images of phi(q(x)) (field 1) and phi*(q(x)) (field 2).
struct NoncompactImage {
  FieldCombo phi;
  FieldCombo phi_star;
};
/// Obtained from beta_field by the transformation law of dimension 1/2
/// fields; terms live on the line field 0 at x and -1/x. Requires 0 < |x| < 1.
NoncompactImage beta_noncompact(double x);
/// Variant with 1 - ix and 1 + ix exchanged in one term of each image.
NoncompactImage beta_noncompact_swapped(double x);
/// Preimage of psi(x), |x| < 1, over line fields phi (1), phi* (2) at q(x).
FieldCombo beta_inv_noncompact(double x);
FieldCombo beta_inv_noncompact_swapped(double x);

enum class RamondSource { RamondField, VacuumField };

/// Mode of the Ramond field psi_R carrying mode nu of the given factor:
/// Ramond factor nu (integer) -> 2 nu; vacuum factor nu (half-odd) -> 2 nu.
HalfInt betaR_mode(RamondSource which, HalfInt nu);
/// Image of the factor field at z^2 in terms of psi_R (field 1 of
/// QuasifreeKernel::ramond_periodic) at z and -z. The vacuum factor is taken
/// in the psi-hat frame.
FieldCombo betaR_field(RamondSource which, cplx z);

using ModeMap = std::function<ModePolynomial(const FermionMode&)>;

/// phi^(k)_nu (species = k) -> psi_{beta_mode(n,k,nu)} of the single field (species 0).
ModeMap complex_to_single(int n);
/// phi^(k)_nu (species = k) -> combination of n real fields (species 0..n-1).
ModeMap complex_to_real(int n);
/// Adjoint of a complex-field generator: phi^(k)_nu -> phi^(n+1-k)_{-nu}.
FermionMode complex_adjoint(int n, const FermionMode& m);
/// psi_m of the single real field -> phi^(k)_nu.
ModeMap single_to_complex(int n);

}  // namespace mlf
