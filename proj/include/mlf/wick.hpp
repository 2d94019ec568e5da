#pragma once

#include <Eigen/Dense>

#include <vector>

#include "mlf/core.hpp"

namespace mlf {

/// One term c * F_field(position) of a linear field combination. `root` is
/// the square root of the position used by kernels with a branch cut; by
/// default it is the principal root.
struct FieldTerm {
  cplx coef;
  cplx position;
  int field = 0;
  cplx root;

  FieldTerm(cplx c, cplx pos, int f = 0);
  /// Term at position r^2 whose branch of the square root is r.
  static FieldTerm at_root(cplx c, cplx r, int f = 0);
};

using FieldCombo = std::vector<FieldTerm>;

FieldCombo scale(const FieldCombo& a, cplx c);
FieldCombo concat(const FieldCombo& a, const FieldCombo& b);

enum class KernelKind {
  NSVacuum,      // delta_fg / (z - w), real species f, g
  RamondGround,  // (z + w) / (2 sqrt z sqrt w (z - w)), psi-hat frame
  RamondPeriodic,// (z + w) / (2 (z - w)), psi_R frame
  TwistedCurrent,// (z + w) / (2 sqrt z sqrt w (z - w)^2), bosonic
  LineVacuum,    // -i delta_fg / (x - y)
  ComplexPair,   // delta_{f+g, n+1} / (z - w), complex fields labeled 1..n
  LinePair,      // -i delta_{f+g, n+1} / (x - y)
  RamondVacuum,  // field 1: Ramond, psi_R frame; field 2: NS vacuum; no cross terms
};

/// Two-point function of a quasifree state. Fields of all kinds except
/// TwistedCurrent are fermionic.
class QuasifreeKernel {
 public:
  static QuasifreeKernel ns_vacuum() { return QuasifreeKernel(KernelKind::NSVacuum); }
  static QuasifreeKernel ramond_ground() { return QuasifreeKernel(KernelKind::RamondGround); }
  static QuasifreeKernel ramond_periodic() { return QuasifreeKernel(KernelKind::RamondPeriodic); }
  static QuasifreeKernel twisted_current() { return QuasifreeKernel(KernelKind::TwistedCurrent); }
  static QuasifreeKernel line_vacuum() { return QuasifreeKernel(KernelKind::LineVacuum); }
  static QuasifreeKernel complex_pair(int n);
  static QuasifreeKernel line_pair(int n);
  static QuasifreeKernel ramond_vacuum() { return QuasifreeKernel(KernelKind::RamondVacuum); }

  KernelKind kind() const { return kind_; }
  bool fermionic() const { return kind_ != KernelKind::TwistedCurrent; }
  /// Point-split parameter: the second argument is evaluated at lambda * w.
  QuasifreeKernel with_lambda(double lambda) const;
  double lambda() const { return lambda_; }

  cplx operator()(const FieldTerm& a, const FieldTerm& b) const;

 private:
  explicit QuasifreeKernel(KernelKind k) : kind_(k) {}
  KernelKind kind_;
  int n_ = 0;
  double lambda_ = 1.0;
};

/// Bilinear extension of the kernel.
cplx two_point(const QuasifreeKernel& k, const FieldCombo& a, const FieldCombo& b);

/// Expectation of the ordered product of the given fields: Pfaffian (fermions)
/// or hafnian (bosons) of the pairwise two-point matrix. Odd counts give 0.
cplx npoint(const QuasifreeKernel& k, const std::vector<FieldCombo>& fields);

/// As npoint, but pairings inside one group are omitted. Consecutive fields
/// with equal group id form one Wick-ordered product.
cplx npoint_wick(const QuasifreeKernel& k, const std::vector<FieldCombo>& fields,
                 const std::vector<int>& groups);

/// Pfaffian of an even-dimensional antisymmetric matrix.
cplx pfaffian(const Eigen::MatrixXcd& a, double asym_tol = 1e-10);
/// Hafnian of an even-dimensional symmetric matrix.
cplx hafnian(const Eigen::MatrixXcd& a);

/// <F_m F_k> from the kernel by trapezoidal contour integration over |z| = 1
/// and |w| = radius < 1, where F(z) = sum_m F_m z^{-m-h}. Supported for the
/// kernels whose field is single valued with the given weight h:
/// NSVacuum (h = 1/2), RamondPeriodic (h = 0), TwistedCurrent (h = 1).
cplx mode_two_point(const QuasifreeKernel& k, HalfInt m, HalfInt l, int nodes = 64,
                    double radius = 0.5);

}  // namespace mlf
