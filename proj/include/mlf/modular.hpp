#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mlf/core.hpp"
#include "mlf/wick.hpp"

namespace mlf {

/// n disjoint open arcs (u_k, v_k) of the circle, stored as phases
/// a_k < b_k inside (-pi, pi); -1 lies outside every closure.
class IntervalFamily {
 public:
  /// Arcs given by endpoint phases; sorted counterclockwise.
  static IntervalFamily general(const std::vector<std::pair<double, double>>& arcs);
  /// n-th roots of the arc with phases (n a, n b): interval k is omega^k (a, b),
  /// k = 1..n, so interval n is the principal arc.
  static IntervalFamily symmetric(int n, double a, double b);

  int size() const { return static_cast<int>(arcs_.size()); }
  bool is_symmetric() const { return symmetric_; }
  const std::vector<std::pair<double, double>>& arcs() const { return arcs_; }
  CirclePoint u(int k) const { return CirclePoint::from_phase(arcs_[k].first); }
  CirclePoint v(int k) const { return CirclePoint::from_phase(arcs_[k].second); }
  /// Index of the arc containing the phase, or -1.
  int locate(double phase) const;

 private:
  std::vector<std::pair<double, double>> arcs_;
  bool symmetric_ = false;
};

/// X(z) = -prod (1+v_k)/(1+u_k) prod (z-u_k)/(z-v_k); analytic continuation off the circle.
cplx uniformizer(const IntervalFamily& f, cplx z);
/// Real value on the circle; throws at a pole or if the imaginary part is not negligible.
double X_of_z(const IntervalFamily& f, const CirclePoint& z);
/// dX/dz.
cplx uniformizer_derivative(const IntervalFamily& f, cplx z);

struct Preimage {
  cplx z;
  double theta;        // phase of z in (-pi, pi)
  double theta_prime;  // d theta / dX > 0
  cplx z_prime;        // dz / dX
  cplx sqrt_z_prime;   // e^{i pi/4} e^{i theta/2} sqrt(theta')
};

/// The n solutions of X(z) = X, one per arc, in arc order.
std::vector<Preimage> preimages(const IntervalFamily& f, double X);

/// 2 pi sqrt(z'_k z'_j) / (z_k - z_j) with the branch of Preimage::sqrt_z_prime;
/// real antisymmetric.
Eigen::MatrixXd K_of_X(const IntervalFamily& f, double X);
/// Same formula with principal square roots of each z'_k.
Eigen::MatrixXcd K_of_X_principal(const IntervalFamily& f, double X);

/// K_kj = -omega^{(k+j)/2} / (omega^k - omega^j), omega^{s/2} = e^{i pi s / n}.
Eigen::MatrixXcd symmetric_K(int n);

struct KernelDiagonalizer {
  Eigen::MatrixXcd B;  // B_kj = omega^{(1/2 - k) j}
  Eigen::VectorXd m;   // m_k = (n+1)/2 - k
};
KernelDiagonalizer B_and_M(int n);

struct DiagonalizerCheck {
  double intertwining = 0.0;  // max |BK - MB|
  double spectrum = 0.0;      // max |sorted eig(K) - sorted m|
  double unitarity = 0.0;     // max |B B^dagger / n - 1|
};
DiagonalizerCheck diagonalizer_check(int n);

enum class Ordering { Right, Left };

struct FlowSolution {
  Eigen::MatrixXd O;
  int steps = 0;
  double defect = 0.0;  // max |O^T O - 1|
};

/// Mixing geometry of an interval family with a fixed base point.
class ModularGeometry {
 public:
  explicit ModularGeometry(IntervalFamily family);

  const IntervalFamily& family() const { return family_; }
  int size() const { return family_.size(); }
  double base_point() const { return x0_; }
  /// Phase whose image is the base point.
  double base_phase() const { return base_phase_; }

  /// dO/dX = -(1/2 pi) O K (Right) or -(1/2 pi) K O (Left), O(X0) = 1,
  /// RK4 in log X with step halving.
  FlowSolution O_of_X(double X, Ordering ord = Ordering::Right) const;

  /// Symmetric families only: D B^{-1} diag(e^{i (phi - phi0) m_k}) B D,
  /// where phi is the phase of the preimage in the principal arc.
  Eigen::MatrixXd O_closed_form(double X) const;
  /// Signs relating the preimage branch to omega^{j/2} e^{i phi/2}.
  Eigen::VectorXd branch_signs(double X) const;

  /// O(X)^T O(e^{-2 pi t} X).
  Eigen::MatrixXd cocycle(double t, double X) const;
  /// max |O(t+s, X) - O(t, X) O(s, e^{-2 pi t} X)|.
  double cocycle_residual(double t, double s, double X) const;

  struct TimeDerivativeCheck {
    double scaled = 0.0;   // against O(t,X) Y K(Y), Y = e^{-2 pi t} X
    double unscaled = 0.0;  // against O(t,X) K(Y)
  };
  /// Five-point finite difference of t -> O(t, X).
  TimeDerivativeCheck time_derivative_check(double t, double X, double h = 1e-3) const;

  /// chi_k(X) = sum_j O_kj(X) sqrt(z'_j) psi-hat(z_j).
  std::vector<FieldCombo> chi(double X, Ordering ord = Ordering::Right) const;
  /// omega(chi_k(X) chi_l(Y)).
  Eigen::MatrixXcd chi_two_point(double X, double Y, Ordering ord = Ordering::Right) const;

  /// max |(X - Y) omega(chi_k(X) chi_l(Y)) - delta_kl|.
  double diagonalization_defect(double X, double Y, Ordering ord = Ordering::Right) const;

  /// Both orderings evaluated on the same data. The cocycle identity holds for
  /// any orthogonal O, so the ordering is selected by the diagonalization defect.
  struct OrderingReport {
    double cocycle_right = 0.0, cocycle_left = 0.0;
    double diagonal_right = 0.0, diagonal_left = 0.0;
    Ordering selected = Ordering::Right;
  };
  OrderingReport compare_orderings(double t, double s, double X, double Y) const;

  /// Symmetric families: the branch e^{i pi/4} e^{i n phi/2} sqrt(n theta') of sqrt(dZ/dX), Z = z^n.
  cplx sqrt_dZ_dX(double X) const;
  /// Symmetric families: combos (e^{i phi0 M} B D chi)_k(X).
  std::vector<FieldCombo> rotated_chi(double X) const;
  /// Symmetric families: max coefficient distance between rotated_chi and
  /// sqrt(n) sqrt(dZ/dX) beta(phi^(k)(Z)).
  double rotated_chi_residual(double X) const;
  /// Symmetric families: max over k, l of |omega(rc_k(X) rc_l(Y)) - n sqrt(Z'(X) Z'(Y)) G_kl(Z(X), Z(Y))|
  /// with rc = rotated_chi and G the complex-fermion pair kernel.
  double pair_correlator_residual(double X, double Y) const;

 private:
  IntervalFamily family_;
  double x0_ = 1.0;
  double base_phase_ = 0.0;
};

/// Dilation flow on the half line: (e^{-2 pi t} x, e^{-pi t}).
std::pair<double, double> single_interval_flow(double t, double x);

/// max coefficient distance between two combos after merging equal positions.
double combo_distance(const FieldCombo& a, const FieldCombo& b);

}  // namespace mlf
