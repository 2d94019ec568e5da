#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mlf {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Exact element of Z/2: stores twice the value so integer and half-odd
/// mode labels are represented without rounding.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_twice(std::int64_t twice) { return HalfInt(twice); }
  static constexpr HalfInt integer(std::int64_t n) { return HalfInt(2 * n); }
  /// n + 1/2
  static constexpr HalfInt half_odd(std::int64_t n) { return HalfInt(2 * n + 1); }

  constexpr std::int64_t twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr bool is_half_odd() const { return !is_integer(); }
  constexpr double value() const { return 0.5 * static_cast<double>(twice_); }
  /// Requires is_integer().
  std::int64_t as_integer() const;

  constexpr HalfInt abs() const { return HalfInt(twice_ < 0 ? -twice_ : twice_); }
  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
  constexpr HalfInt operator*(std::int64_t k) const { return HalfInt(twice_ * k); }
  HalfInt& operator+=(HalfInt o) { twice_ += o.twice_; return *this; }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const;

 private:
  constexpr explicit HalfInt(std::int64_t twice) : twice_(twice) {}
  std::int64_t twice_ = 0;
};

/// (-1)^e for an integer exponent e.
int sign_power(HalfInt e);

enum class Sector { NS, Ramond };

std::string to_string(Sector s);

/// Fermion mode label tagged with its sector. NS labels are half-odd,
/// Ramond labels are integers.
class ModeIndex {
 public:
  ModeIndex(Sector sector, HalfInt value);
  Sector sector() const { return sector_; }
  HalfInt value() const { return value_; }
  bool operator==(const ModeIndex&) const = default;

 private:
  Sector sector_;
  HalfInt value_;
};

/// A point on the unit circle with phase in (-pi, pi].
class CirclePoint {
 public:
  /// Normalizes; throws std::domain_error if |z| deviates from 1 by more than tol.
  explicit CirclePoint(cplx z, double tol = 1e-12);
  static CirclePoint from_phase(double phi);

  cplx z() const { return z_; }
  double phase() const { return phase_; }
  /// Principal branch e^{i phase/2}.
  cplx sqrt() const;

 private:
  cplx z_;
  double phase_;
};

/// Principal square root with the cut on the negative real axis; a value
/// exactly on the cut maps to the upper half plane.
cplx principal_sqrt(cplx z);

/// Cayley transform x -> (1+ix)/(1-ix).
CirclePoint cayley(double x);
/// Inverse Cayley transform; domain error at z = -1.
double cayley_inverse(cplx z);
/// (1-ix)/sqrt(2): the factor relating the line field psi(x) to the circle field.
cplx compact_weight(double x);

/// q(x) = 2x/(1-x^2) on (-1, 1).
double q_map(double x);

/// The n-th roots of z: omega^j * z^{1/n} with the principal root, sorted by phase.
std::vector<CirclePoint> nth_roots(const CirclePoint& z, int n);

}  // namespace mlf
