#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlf/core.hpp"

namespace mlf {

class ModularGeometry;

/// One verification record. `anchor` names the identity being checked;
/// infrastructure checks use "plumbing".
struct CheckRecord {
  std::string id;
  std::string anchor;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool informational = false;  // reported, never fails the run
  std::string note;
  std::optional<double> runtime_s;
};

/// Record comparing |computed - expected| against the tolerance.
CheckRecord make_record(std::string id, std::string anchor, double computed, double expected, double tolerance,
                        std::string note = {});
/// Record that is reported but does not enter the verdict.
CheckRecord make_info(std::string id, std::string anchor, double computed, std::string note = {});

struct SuiteConfig {
  std::string suite = "report-all";  // verify-iso | symmetries | modular | ramond | report-all
  int n = 2;
  HalfInt cutoff = HalfInt::from_twice(11);
  std::optional<double> tol;          // overrides every tolerance when set
  std::vector<double> intervals;      // endpoint phases u1, v1, u2, v2, ...
  int samples = 200;
  std::uint64_t seed = 1;
  bool timing = false;

  /// Throws std::invalid_argument on an unknown suite, bad numbers, or bad intervals.
  void validate() const;
};

struct Report {
  std::string suite;
  SuiteConfig config;
  std::vector<CheckRecord> records;
  std::map<std::string, std::string> environment;
  bool all_pass() const;
  bool resource_error() const;
};

Report run_suite(const SuiteConfig& config);

/// UTF-8 JSON, keys sorted, floats with 17 significant digits.
std::string report_json(const Report& report);
/// id, anchor, computed, expected, tolerance, pass, informational.
std::string report_csv(const Report& report);
/// Rows X, O_11, O_12, ... for log-spaced X over [X0/10, 10 X0].
std::string trajectory_csv(const ModularGeometry& g, int samples);

// ------------------------------------------------------------ individual checks
// Each returns max residuals; the suites and the acceptance program share them.

/// Max over beta-image mode pairs of |{A, B} - delta| and |A^dagger - A*| at the cutoff.
double iso_car_residual(int n, HalfInt cutoff);
/// Max relative deviation between beta-image and complex-field correlators of
/// `points` fields at `samples` random tuples.
double iso_correlator_residual(int n, int points, int samples, std::uint64_t seed);
/// Max over samples of |omega(j(z^2) j(w^2)) - twisted kernel|.
double ramond_twisted_residual(int samples, std::uint64_t seed);

}  // namespace mlf
