#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "mlf/core.hpp"

namespace mlf {

/// One fermion mode generator: species s, mode label m.
struct FermionMode {
  int species = 0;
  HalfInt index;
  auto operator<=>(const FermionMode&) const = default;
};

/// Finite linear combination of ordered products of fermion modes.
/// The meaning of the species label depends on context: real fields in a
/// FockSpace, or complex field labels phi^(k) before substitution.
class ModePolynomial {
 public:
  struct Term {
    cplx coef;
    std::vector<FermionMode> factors;
  };

  ModePolynomial() = default;
  static ModePolynomial constant(cplx c);
  static ModePolynomial generator(FermionMode m, cplx c = 1.0);
  static ModePolynomial product(FermionMode a, FermionMode b, cplx c = 1.0);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  void add_term(cplx coef, std::vector<FermionMode> factors);

  ModePolynomial& operator+=(const ModePolynomial& o);
  ModePolynomial& operator-=(const ModePolynomial& o);
  ModePolynomial& operator*=(cplx c);
  friend ModePolynomial operator+(ModePolynomial a, const ModePolynomial& b) { return a += b; }
  friend ModePolynomial operator-(ModePolynomial a, const ModePolynomial& b) { return a -= b; }
  friend ModePolynomial operator*(ModePolynomial a, cplx c) { return a *= c; }
  friend ModePolynomial operator*(cplx c, ModePolynomial a) { return a *= c; }
  /// Operator product: factors of a to the left of factors of b.
  friend ModePolynomial operator*(const ModePolynomial& a, const ModePolynomial& b);

  /// Hermitian conjugate for real fields (psi_m^* = psi_{-m}).
  ModePolynomial adjoint() const;
  /// Merges identical monomials and drops coefficients below eps.
  ModePolynomial simplified(double eps = 0.0) const;
  /// Drops every term containing a mode with |m| > cutoff.
  ModePolynomial truncated(HalfInt cutoff) const;
  /// Replaces each generator by a polynomial (usually linear).
  ModePolynomial substitute(const std::function<ModePolynomial(const FermionMode&)>& f) const;
  /// Canonical form under the real CAR {psi^s_a, psi^t_b} = delta_st delta_{a+b,0}:
  /// factors sorted by (species, index), no repeated factors.
  ModePolynomial canonical(double eps = 1e-14) const;
  /// Vacuum (NS) or Ramond ground state value of a polynomial of degree <= 2
  /// in real fields. Throws for higher degree.
  cplx quadratic_vev(Sector sector) const;
  /// Constant part.
  cplx scalar_part() const;
  HalfInt max_abs_index() const;
  std::size_t max_degree() const;
  std::string str() const;

 private:
  std::vector<Term> terms_;
};

/// q - <q>: Wick ordering of a quadratic with respect to the sector's reference state.
ModePolynomial wick_ordered(const ModePolynomial& q, Sector sector);

using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using DenseMatrix = Eigen::MatrixXcd;
using LinearOp = std::function<Vector(const Vector&)>;

/// Truncated Fock representation of `species` real chiral fermions. Modes
/// with |m| <= cutoff are represented through a Jordan-Wigner ordering; the
/// Ramond zero mode lives on one extra qubit as sigma_x / sqrt(2) with a full
/// sign string.
class FockSpace {
 public:
  static constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 22;

  static FockSpace build(Sector sector, HalfInt cutoff, int species = 1,
                         std::size_t max_dim = kDefaultMaxDim);

  Sector sector() const { return sector_; }
  HalfInt cutoff() const { return cutoff_; }
  int species() const { return species_; }
  std::size_t dim() const { return dim_; }
  int qubits() const { return qubits_; }

  bool contains(const FermionMode& m) const;
  SparseMatrix mode(const FermionMode& m) const;
  /// All represented generators of one species in increasing index.
  std::vector<FermionMode> modes(int species = 0) const;

  Vector vacuum() const;
  Vector basis(std::size_t index) const;
  /// Sum of |m| over occupied modes.
  double energy(std::size_t index) const;
  /// Occupation-basis indices with energy <= emax.
  std::vector<std::size_t> window(double emax) const;

  Vector apply(const ModePolynomial& p, const Vector& v) const;
  LinearOp op(const ModePolynomial& p) const;
  SparseMatrix matrix(const ModePolynomial& p) const;
  DenseMatrix dense(const ModePolynomial& p) const;
  cplx vacuum_expectation(const ModePolynomial& p) const;

 private:
  FockSpace() = default;
  int qubit(const FermionMode& m) const;
  // Applies one generator to a basis state; returns false if the result vanishes.
  bool act(const FermionMode& m, std::uint64_t& state, cplx& amp) const;

  Sector sector_ = Sector::NS;
  HalfInt cutoff_;
  int species_ = 1;
  int positive_modes_ = 0;  // per species
  int qubits_ = 0;
  std::size_t dim_ = 1;
  std::vector<double> energy_;
};

/// Largest energy E such that every operator in a product (applied right to
/// left, with the given energy shifts) acts exactly at the given cutoff. A
/// bilinear with energy shift d acts exactly on states of energy E when
/// E + |d| <= cutoff.
double safe_energy(HalfInt cutoff, std::initializer_list<double> shifts_in_application_order);

/// max over window basis states e_s of ||op(e_s)||_inf.
double window_residual(const FockSpace& space, const LinearOp& op, double emax);

LinearOp commutator(const LinearOp& a, const LinearOp& b);
LinearOp anticommutator(const LinearOp& a, const LinearOp& b);
LinearOp operator+(const LinearOp& a, const LinearOp& b);
LinearOp operator-(const LinearOp& a, const LinearOp& b);
LinearOp scaled(cplx c, const LinearOp& a);
LinearOp identity_op();

/// exp(A) for a sparse matrix, computed blockwise over the connected
/// components of its sparsity graph with scaling-and-squaring Pade.
DenseMatrix expm_blockwise(const SparseMatrix& a);

}  // namespace mlf
