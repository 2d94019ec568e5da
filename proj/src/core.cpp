#include "mlf/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlf {

std::int64_t HalfInt::as_integer() const {
  if (!is_integer()) throw std::domain_error("HalfInt " + str() + " is not an integer");
  return twice_ / 2;
}

std::string HalfInt::str() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

int sign_power(HalfInt e) {
  const std::int64_t n = e.as_integer();
  return (n % 2 == 0) ? 1 : -1;
}

std::string to_string(Sector s) { return s == Sector::NS ? "NS" : "Ramond"; }

ModeIndex::ModeIndex(Sector sector, HalfInt value) : sector_(sector), value_(value) {
  if (sector == Sector::NS && !value.is_half_odd())
    throw std::invalid_argument("NS mode label must be half-odd, got " + value.str());
  if (sector == Sector::Ramond && !value.is_integer())
    throw std::invalid_argument("Ramond mode label must be an integer, got " + value.str());
}

namespace {
double normalized_phase(cplx z) {
  double phi = std::arg(z);
  if (phi <= -kPi) phi = kPi;
  return phi;
}
}  // namespace

CirclePoint::CirclePoint(cplx z, double tol) {
  const double r = std::abs(z);
  if (!std::isfinite(r) || std::abs(r - 1.0) > tol)
    throw std::domain_error("CirclePoint: |z| = " + std::to_string(r) + " is not 1");
  phase_ = normalized_phase(z);
  z_ = std::polar(1.0, phase_);
}

CirclePoint CirclePoint::from_phase(double phi) { return CirclePoint(std::polar(1.0, phi)); }

cplx CirclePoint::sqrt() const { return std::polar(1.0, 0.5 * phase_); }

cplx principal_sqrt(cplx z) {
  if (z.imag() == 0.0 && z.real() < 0.0) return {0.0, std::sqrt(-z.real())};
  return std::sqrt(z);
}

CirclePoint cayley(double x) {
  if (!std::isfinite(x)) throw std::domain_error("cayley: non-finite argument");
  return CirclePoint((1.0 + kI * x) / (1.0 - kI * x), 1e-10);
}

double cayley_inverse(cplx z) {
  if (std::abs(z + 1.0) < 1e-15) throw std::domain_error("cayley_inverse: z = -1 has no preimage");
  // z = (1+ix)/(1-ix)  =>  x = (z-1)/(i(z+1))
  return ((z - 1.0) / (kI * (z + 1.0))).real();
}

cplx compact_weight(double x) { return (1.0 - kI * x) / std::sqrt(2.0); }

double q_map(double x) {
  if (!(std::abs(x) < 1.0)) throw std::domain_error("q_map: |x| must be < 1");
  return 2.0 * x / (1.0 - x * x);
}

std::vector<CirclePoint> nth_roots(const CirclePoint& z, int n) {
  if (n < 1) throw std::invalid_argument("nth_roots: n must be positive");
  std::vector<CirclePoint> roots;
  roots.reserve(static_cast<std::size_t>(n));
  const double base = z.phase() / n;
  for (int j = 0; j < n; ++j) roots.push_back(CirclePoint::from_phase(base + 2.0 * kPi * j / n));
  std::sort(roots.begin(), roots.end(),
            [](const CirclePoint& a, const CirclePoint& b) { return a.phase() < b.phase(); });
  return roots;
}

}  // namespace mlf
