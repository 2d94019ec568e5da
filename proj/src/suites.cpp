#include "mlf/suites.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include "json.hpp"
#include <random>
#include <sstream>
#include <stdexcept>

#include "mlf/fock.hpp"
#include "mlf/isomap.hpp"
#include "mlf/modular.hpp"
#include "mlf/symgen.hpp"
#include "mlf/wick.hpp"

namespace mlf {

namespace {

using json = nlohmann::json;
using Check = std::function<std::vector<CheckRecord>()>;

constexpr const char* kVersion = "0.1.0";

double tol_or(const SuiteConfig& c, double t) { return c.tol ? *c.tol : t; }

HalfInt hi(int twice) { return HalfInt::from_twice(twice); }

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ------------------------------------------------------------ suites

std::vector<Check> iso_checks(const SuiteConfig& c) {
  const int n = c.n;
  const HalfInt M = c.cutoff;
  std::vector<Check> out;
  out.push_back([=] {
    return std::vector{make_record("iso.car", "isomorphism: CAR and adjoints of image modes", iso_car_residual(n, M), 0.0,
                                   tol_or(c, 1e-13), "cutoff " + M.str())};
  });
  for (int p : {2, 4, 6})
    out.push_back([=] {
      return std::vector{make_record("iso.vacuum." + std::to_string(p) + "pt", "isomorphism: vacuum correlators",
                                     iso_correlator_residual(n, p, c.samples, c.seed + p), 0.0, tol_or(c, 1e-9),
                                     "relative to max(1, |oracle|)")};
    });
  out.push_back([=] {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    double worst = 0;
    for (int s = 0; s < c.samples; ++s) {
      const CirclePoint z = CirclePoint::from_phase(ph(rng));
      FieldCombo total;
      for (const auto& t : beta_inv_field(n, z)) total = concat(total, scale(beta_field_at_root(n, t.field, z.z()), t.coef));
      worst = std::max(worst, combo_distance(total, {FieldTerm(1.0, z.z())}));
    }
    return std::vector{make_record("iso.inverse", "isomorphism: image of the inverse image", worst, 0.0, tol_or(c, 1e-12))};
  });
  if (n == 2)
    out.push_back([=] {
      std::mt19937_64 rng(c.seed + 11);
      std::uniform_real_distribution<double> xs(-0.95, 0.95);
      const auto line = QuasifreeKernel::line_vacuum();
      double worst = 0, swapped = 0;
      for (int s = 0; s < c.samples; ++s) {
        const double x = xs(rng), y = xs(rng);
        if (std::abs(x) < 1e-3 || std::abs(y) < 1e-3 || std::abs(x - y) < 1e-3) continue;
        const auto a = beta_noncompact(x), b = beta_noncompact(y);
        const double X = q_map(x), Y = q_map(y);
        worst = std::max(worst, std::abs(two_point(line, a.phi, b.phi_star) + kI / (X - Y)));
        worst = std::max(worst, std::abs(two_point(line, a.phi, b.phi)));
        FieldCombo back;
        const auto pa = beta_noncompact_swapped(x);
        for (const auto& t : beta_inv_noncompact_swapped(x))
          back = concat(back, scale(t.field == 1 ? pa.phi : pa.phi_star, t.coef));
        swapped = std::max(swapped, combo_distance(back, {FieldTerm(1.0, x, 0)}));
      }
      return std::vector{
          make_record("iso.line", "isomorphism: line picture two-point function", worst, 0.0, tol_or(c, 1e-10)),
          make_info("iso.line.swapped_inverse", "isomorphism: line-picture coefficients with 1 - ix and 1 + ix exchanged", swapped,
                    "composition defect of the exchanged image and inverse")};
    });
  return out;
}

std::vector<Check> sym_checks(const SuiteConfig& c) {
  const HalfInt M = c.cutoff;
  std::vector<Check> out;
  out.push_back([=] {
    double worst = 0;
    for (int m = -2; m <= 2; ++m)
      for (int k = -2; k <= 2; ++k) worst = std::max(worst, current_ccr(m, k, M).residual);
    return std::vector{
        make_info("sym.conventions", "normalization of fields and smearing", 1.0 / (2 * kPi),
                  "j(z) = (1/2pi) sum j_n z^{-n-1}, T(z) = (1/2pi) sum L_n z^{-n-2}, A(f) = oint f A dz/i; "
                  "j(z^n) = j_n, T(z^{n+1}) = L_n, gauge unitary exp(i theta j_0)"),
        make_record("sym.ccr", "embedded current commutation relations", worst, 0.0, tol_or(c, 1e-10))};
  });
  out.push_back([=] {
    return std::vector{
        make_record("sym.central.real", "Virasoro central term, real fermion",
                    vacuum_bracket(StressRealization::RealFermion, 2, M), 0.25, tol_or(c, 1e-9)),
        make_record("sym.central.complex", "Virasoro central term, complex fermion",
                    vacuum_bracket(StressRealization::ComplexFermion, 2, M), 0.5, tol_or(c, 1e-9)),
        make_record("sym.central.sugawara", "Virasoro central term, Sugawara form of the embedded current",
                    vacuum_bracket(StressRealization::EmbeddedSugawara, 2, M), 0.5, tol_or(c, 1e-9))};
  });
  out.push_back([=] {
    double plain = 0, charged = 0;
    for (int n = -2; n <= 2; ++n) {
      plain = std::max(plain, stress_mode_identity(n, M).check.residual);
      charged = std::max(charged, stress_mode_identity(n, M, true).check.residual);
    }
    return std::vector{
        make_record("sym.stress_modes", "stress tensor modes under the isomorphism", plain, 0.0, tol_or(c, 1e-10)),
        make_record("sym.stress_modes.charged", "stress tensor modes, charged Sugawara form with constant 1/32", charged, 0.0,
                    tol_or(c, 1e-10))};
  });
  out.push_back([=] {
    const HalfInt G = M + HalfInt::integer(2);
    const auto g = gauge_mixing(kPi / 2, CirclePoint::from_phase(0.7), G);
    return std::vector{
        make_record("sym.gauge.finite", "gauge rotation mixes psi-hat(z) and psi-hat(-z)", g.finite, 0.0,
                    tol_or(c, 1e-6), "theta = pi/2, cutoff " + G.str()),
        make_record("sym.gauge.infinitesimal", "gauge rotation, generator form", g.infinitesimal, 0.0, tol_or(c, 1e-9)),
        make_info("sym.gauge.without_phase", "gauge rotation with the reflected field taken without -i", g.finite_literal)};
  });
  out.push_back([=] {
    double worst = 0;
    for (int m = -1; m <= 1; ++m) {
      const auto a = embedded_diffeo_action(m, std::polar(1.0, 0.4), M);
      worst = std::max({worst, a.band, a.window});
    }
    return std::vector{
        make_record("sym.diffeo", "embedded diffeomorphisms act geometrically plus mixing", worst, 0.0, tol_or(c, 1e-10)),
        make_record("sym.stress_field", "field form of the charged stress tensor identity",
                    charged_stress_field_residual(std::polar(1.0, 0.3), M), 0.0, tol_or(c, 1e-10))};
  });
  out.push_back([=] {
    const HalfInt P = M - HalfInt::integer(2) < hi(5) ? hi(5) : M - HalfInt::integer(2);
    double worst = 0, negated = 0;
    for (int N = -3; N <= 3; ++N) {
      worst = std::max(worst, inverse_stress_mode_check(N, P).residual);
      if (N % 2 == 0) negated = std::max(negated, inverse_stress_mode_check(N, P, true).residual);
    }
    const auto a = embedded_real_on_complex({{0, 1.0}, {-2, 1.0}}, std::polar(1.0, 0.5), M);
    const auto b = embedded_real_on_complex({{-1, 1.0}, {1, 1.0}}, std::polar(1.0, 0.5), M);
    return std::vector{
        make_record("sym.inverse_stress", "inverse image of the real stress tensor", worst, 0.0, tol_or(c, 1e-10),
                    "complex cutoff " + P.str()),
        make_info("sym.inverse_stress.minus_two", "even modes with coefficient -2 in front of the complex stress tensor",
                  negated),
        make_record("sym.real_on_complex", "real diffeomorphisms acting on the complex field",
                    std::max({a.band, a.window, b.band, b.window}), 0.0, tol_or(c, 1e-10))};
  });
  return out;
}

std::vector<Check> mod_checks(const SuiteConfig& c) {
  std::vector<Check> out;
  out.push_back([=] {
    double inter = 0, spec = 0;
    for (int n = 1; n <= 8; ++n) {
      const auto l = diagonalizer_check(n);
      inter = std::max(inter, l.intertwining);
      spec = std::max(spec, l.spectrum);
    }
    return std::vector{make_record("mod.diagonalizer.intertwining", "diagonalizer of the constant kernel, n = 1..8", inter, 0.0,
                                   tol_or(c, 1e-12)),
                       make_record("mod.diagonalizer.spectrum", "integer-spaced spectrum, n = 1..8", spec, 0.0, tol_or(c, 1e-10))};
  });

  IntervalFamily fam = IntervalFamily::symmetric(c.n, 0.2, 0.2 + 1.5 / c.n);
  if (!c.intervals.empty()) {
    std::vector<std::pair<double, double>> arcs;
    for (std::size_t i = 0; i + 1 < c.intervals.size(); i += 2) arcs.emplace_back(c.intervals[i], c.intervals[i + 1]);
    fam = IntervalFamily::general(arcs);
  }
  const auto geo = std::make_shared<ModularGeometry>(fam);
  const double X0 = geo->base_point();
  const std::string base = "base point X0 = " + fmt(X0) + " at phase " + fmt(geo->base_phase());

  if (fam.is_symmetric())
    out.push_back([=] {
      double worst = 0;
      for (int i = 0; i <= 8; ++i) {
        const double X = X0 * std::pow(10.0, -1.0 + i / 4.0);
        worst = std::max(worst, (geo->O_of_X(X).O - geo->O_closed_form(X)).cwiseAbs().maxCoeff());
      }
      return std::vector{make_record("mod.ode_vs_closed_form", "mixing matrix: flow equation against z^K", worst, 0.0,
                                     tol_or(c, 1e-6), base)};
    });
  out.push_back([=] {
    std::mt19937_64 rng(c.seed + 101);
    std::uniform_real_distribution<double> ts(-0.12, 0.12), xs(std::log(0.4), std::log(2.5));
    double coc = 0, orth = 0;
    for (int i = 0; i < c.samples; ++i) {
      const double t = ts(rng), s = ts(rng), X = X0 * std::exp(xs(rng));
      coc = std::max(coc, geo->cocycle_residual(t, s, X));
      const auto sol = geo->O_of_X(X);
      const Eigen::MatrixXd ct = geo->cocycle(t, X);
      const auto I = Eigen::MatrixXd::Identity(geo->size(), geo->size());
      orth = std::max({orth, sol.defect, (ct.transpose() * ct - I).cwiseAbs().maxCoeff()});
    }
    return std::vector{
        make_record("mod.cocycle", "cocycle identity of the mixing matrix", coc, 0.0, tol_or(c, 1e-7), base),
        make_record("mod.orthogonality", "orthogonality of O(X) and O(t,X)", orth, 0.0, tol_or(c, 1e-8))};
  });
  out.push_back([=] {
    const auto d = geo->time_derivative_check(0.07, 1.3 * X0);
    const auto o = geo->compare_orderings(0.05, -0.03, 0.8 * X0, 2.5 * X0);
    return std::vector{
        make_record("mod.time_derivative", "d/dt O(t,X) = O(t,X) Y K(Y), Y = exp(-2 pi t) X", d.scaled, 0.0,
                    tol_or(c, 1e-6)),
        make_info("mod.time_derivative.without_Y", "d/dt O(t,X) against O(t,X) K(Y)", d.unscaled),
        make_info("mod.ordering.left", "diagonalization defect with the kernel on the left", o.diagonal_left,
                  std::string("selected ordering: ") + (o.selected == Ordering::Right ? "right" : "left"))};
  });
  out.push_back([=] {
    double diag = 0, cov = 0;
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.8, 2.5}, {0.3, 0.5}, {1.5, 6.0}}) {
      diag = std::max(diag, geo->diagonalization_defect(a * X0, b * X0));
      const Eigen::MatrixXcd base2 = geo->chi_two_point(a * X0, b * X0);
      for (double t : {-0.1, 0.05, 0.15}) {
        const double s = std::exp(-2 * kPi * t);
        cov = std::max(cov, (geo->chi_two_point(s * a * X0, s * b * X0) * s - base2).cwiseAbs().maxCoeff());
      }
    }
    std::vector<CheckRecord> r{
        make_record("mod.chi.diagonal", "chi fields: (X - Y) omega(chi_k(X) chi_l(Y)) = delta_kl", diag, 0.0,
                    tol_or(c, 1e-8)),
        make_record("mod.chi.covariance", "chi fields: two-point function under the dilation flow", cov, 0.0,
                    tol_or(c, 1e-8))};
    if (geo->family().is_symmetric()) {
      double rot = 0;
      for (double x : {0.3, 1.0, 3.0}) rot = std::max(rot, geo->rotated_chi_residual(x * X0));
      r.push_back(make_record("mod.chi.rotated", "rotated chi fields are images of the complex fields", rot, 0.0,
                              tol_or(c, 1e-8)));
      r.push_back(make_record("mod.chi.pair", "rotated chi correlators against the complex pair correlator",
                              geo->pair_correlator_residual(0.5 * X0, 2.0 * X0), 0.0, tol_or(c, 1e-8)));
    }
    return r;
  });
  return out;
}

std::vector<Check> ramond_checks(const SuiteConfig& c) {
  const int M = std::max(4, static_cast<int>(std::floor(c.cutoff.value())));
  std::vector<Check> out;
  out.push_back([=] {
    std::mt19937_64 rng(c.seed + 7);
    std::uniform_real_distribution<double> ph(-kPi, kPi);
    double one = 0;
    for (int i = 0; i < c.samples; ++i) one = std::max(one, std::abs(ramond_current_one_point(std::polar(1.0, ph(rng)))));
    return std::vector{
        make_record("ramond.one_point", "Ramond current one-point function", one, 0.0, tol_or(c, 1e-10)),
        make_record("ramond.twisted", "Ramond current two-point function against the twisted kernel",
                    ramond_twisted_residual(c.samples, c.seed + 8), 0.0, tol_or(c, 1e-8))};
  });
  out.push_back([=] {
    std::string seq;
    for (int k = 4; k <= M; k += 2) seq += (seq.empty() ? "" : ", ") + std::to_string(k) + ": " + fmt(ramond_L0_expectation(k));
    std::string split;
    double prev = 1.0, last = 0;
    bool monotone = true;
    for (double l : {0.9, 0.99, 0.999}) {
      last = ramond_L0_point_split(l);
      monotone = monotone && std::abs(last - 1.0 / 16) < std::abs(prev - 1.0 / 16);
      prev = last;
      split += (split.empty() ? "" : ", ") + fmt(l) + ": " + fmt(last);
    }
    return std::vector{
        make_record("ramond.L0", "Ramond ground state weight of the current stress tensor", ramond_L0_expectation(M),
                    1.0 / 16, tol_or(c, 1e-3), "cutoff " + std::to_string(M) + "; by cutoff " + seq),
        make_record("ramond.L0.point_split", "Ramond weight from the point-split current", last, 1.0 / 16,
                    tol_or(c, 1e-3), std::string(monotone ? "monotone" : "not monotone") + " in lambda; " + split)};
  });
  out.push_back([=] {
    double worst = 0;
    const int S = std::min(M, 8);
    for (int n = -2; n <= 2; ++n) worst = std::max(worst, ramond_stress_check(n, S).residual);
    return std::vector{make_record("ramond.stress", "Ramond stress tensor identity", worst, 0.0, tol_or(c, 1e-10),
                                   "cutoff " + std::to_string(S))};
  });
  return out;
}

std::vector<CheckRecord> run_checks(const std::vector<Check>& checks, bool timing) {
  std::vector<std::future<std::vector<CheckRecord>>> jobs;
  jobs.reserve(checks.size());
  for (const auto& ch : checks)
    jobs.push_back(std::async(std::launch::async, [ch, timing] {
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<CheckRecord> r;
      try {
        r = ch();
      } catch (const std::length_error& e) {
        r = {make_record("resource", "plumbing", 0, 0, 0, std::string("resource limit: ") + e.what())};
        r[0].pass = false;
      } catch (const std::bad_alloc&) {
        r = {make_record("resource", "plumbing", 0, 0, 0, "resource limit: allocation failed")};
        r[0].pass = false;
      } catch (const std::exception& e) {
        r = {make_record("error", "plumbing", 0, 0, 0, std::string("check failed to run: ") + e.what())};
        r[0].pass = false;
      }
      if (timing) {
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto& x : r) x.runtime_s = dt;
      }
      return r;
    }));
  std::vector<CheckRecord> out;
  for (auto& j : jobs)
    for (auto& r : j.get()) out.push_back(std::move(r));
  return out;
}

// Deterministic pretty printer: sorted keys (std::map), %.17g floats.
void dump(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad_in;
        dump(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char ch : s) r += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return r + "\"";
}

}  // namespace

CheckRecord make_record(std::string id, std::string anchor, double computed, double expected, double tolerance,
                        std::string note) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.computed = computed;
  r.expected = expected;
  r.tolerance = tolerance;
  r.pass = std::isfinite(computed) && std::abs(computed - expected) <= tolerance;
  r.note = std::move(note);
  return r;
}

CheckRecord make_info(std::string id, std::string anchor, double computed, std::string note) {
  CheckRecord r = make_record(std::move(id), std::move(anchor), computed, 0.0, 0.0, std::move(note));
  r.informational = true;
  r.pass = true;
  return r;
}

void SuiteConfig::validate() const {
  static const std::vector<std::string> names = {"verify-iso", "symmetries", "modular", "ramond", "report-all"};
  if (std::find(names.begin(), names.end(), suite) == names.end()) throw std::invalid_argument("unknown suite: " + suite);
  if (n < 1 || n > 8) throw std::invalid_argument("n must lie in 1..8");
  if (!cutoff.is_half_odd() && !cutoff.is_integer()) throw std::invalid_argument("bad cutoff");
  if (cutoff.value() <= 0) throw std::invalid_argument("cutoff must be positive");
  if (tol && !(*tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  if (!intervals.empty()) {
    if (intervals.size() % 2 != 0) throw std::invalid_argument("intervals need an even number of endpoints");
    std::vector<std::pair<double, double>> arcs;
    for (std::size_t i = 0; i + 1 < intervals.size(); i += 2) arcs.emplace_back(intervals[i], intervals[i + 1]);
    (void)IntervalFamily::general(arcs);
  } else if (suite == "modular" || suite == "report-all") {
    (void)IntervalFamily::symmetric(n, 0.2, 0.2 + 1.5 / n);
  }
}

bool Report::all_pass() const {
  return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

bool Report::resource_error() const {
  return std::any_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.id == "resource"; });
}

Report run_suite(const SuiteConfig& config) {
  config.validate();
  Report rep;
  rep.suite = config.suite;
  rep.config = config;
  rep.environment = {{"library_version", kVersion},
                     {"compiler", __VERSION__},
                     {"cxx_standard", std::to_string(__cplusplus)},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)}};
  std::vector<Check> checks;
  auto add = [&](std::vector<Check> more) { checks.insert(checks.end(), more.begin(), more.end()); };
  const std::string& s = config.suite;
  if (s == "verify-iso" || s == "report-all") add(iso_checks(config));
  if (s == "symmetries" || s == "report-all") {
    SuiteConfig c = config;
    if (s == "report-all") c.cutoff = std::max(config.cutoff, HalfInt::from_twice(15));
    add(sym_checks(c));
  }
  if (s == "modular" || s == "report-all") add(mod_checks(config));
  if (s == "ramond" || s == "report-all") {
    SuiteConfig c = config;
    if (s == "report-all") c.cutoff = HalfInt::integer(10);
    add(ramond_checks(c));
  }
  rep.records = run_checks(checks, config.timing);
  return rep;
}

std::string report_json(const Report& report) {
  json j;
  j["schema_version"] = 1;
  j["suite"] = report.suite;
  const auto& c = report.config;
  j["config"] = {{"n", c.n},
                 {"cutoff", c.cutoff.str()},
                 {"tol", c.tol ? json(*c.tol) : json(nullptr)},
                 {"intervals", c.intervals},
                 {"samples", c.samples},
                 {"seed", c.seed},
                 {"timing", c.timing}};
  j["environment"] = report.environment;
  json checks = json::array();
  int passed = 0, failed = 0, info = 0;
  for (const auto& r : report.records) {
    json x = {{"id", r.id},
              {"anchor", r.anchor},
              {"computed", r.computed},
              {"expected", r.expected},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"informational", r.informational},
              {"note", r.note}};
    if (r.runtime_s) x["runtime_s"] = *r.runtime_s;
    checks.push_back(std::move(x));
    if (r.informational) ++info;
    else if (r.pass) ++passed;
    else ++failed;
  }
  j["checks"] = std::move(checks);
  j["summary"] = {{"passed", passed}, {"failed", failed}, {"informational", info}, {"all_pass", report.all_pass()}};
  std::string out;
  dump(j, out, 0);
  return out + "\n";
}

std::string report_csv(const Report& report) {
  std::string out = "id,anchor,computed,expected,tolerance,pass,informational\n";
  for (const auto& r : report.records)
    out += csv_field(r.id) + "," + csv_field(r.anchor) + "," + fmt(r.computed) + "," + fmt(r.expected) + "," +
           fmt(r.tolerance) + "," + (r.pass ? "true" : "false") + "," + (r.informational ? "true" : "false") + "\n";
  return out;
}

std::string trajectory_csv(const ModularGeometry& g, int samples) {
  const int n = g.size();
  std::string out = "X";
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j) out += ",O_" + std::to_string(k) + std::to_string(j);
  out += "\n";
  const int m = std::max(samples, 2);
  for (int i = 0; i < m; ++i) {
    const double X = g.base_point() * std::pow(10.0, -1.0 + 2.0 * i / (m - 1));
    const Eigen::MatrixXd O = g.O_of_X(X).O;
    out += fmt(X);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) out += "," + fmt(O(k, j));
    out += "\n";
  }
  return out;
}

// ------------------------------------------------------------ individual checks

double iso_car_residual(int n, HalfInt cutoff) {
  auto fock = FockSpace::build(Sector::NS, cutoff);
  auto to_single = complex_to_single(n);
  std::vector<FermionMode> src;
  const auto span = 2 * (cutoff.twice() + 2 * n);
  for (int k = 1; k <= n; ++k)
    for (auto t = -span - 1; t <= span + 1; t += 2)
      if (beta_mode(n, k, hi(static_cast<int>(t))).abs() <= cutoff) src.push_back({k, hi(static_cast<int>(t))});
  std::vector<SparseMatrix> mats;
  for (const auto& a : src) mats.push_back(fock.matrix(to_single(a)));
  SparseMatrix I(static_cast<Eigen::Index>(fock.dim()), static_cast<Eigen::Index>(fock.dim()));
  I.setIdentity();
  auto maxabs = [](const SparseMatrix& m) {
    double d = 0;
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) d = std::max(d, std::abs(it.value()));
    return d;
  };
  double worst = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const SparseMatrix adj = fock.matrix(to_single(complex_adjoint(n, src[i])));
    worst = std::max(worst, maxabs(SparseMatrix(mats[i].adjoint()) - adj));
    for (std::size_t j = 0; j < src.size(); ++j) {
      const bool pair = src[i].species + src[j].species == n + 1 && (src[i].index + src[j].index) == HalfInt{};
      SparseMatrix ac = mats[i] * mats[j] + mats[j] * mats[i];
      if (pair) ac -= I;
      worst = std::max(worst, maxabs(ac));
    }
  }
  return worst;
}

double iso_correlator_residual(int n, int points, int samples, std::uint64_t seed) {
  if (points % 2 != 0) throw std::invalid_argument("iso_correlator_residual: even number of points");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  std::uniform_int_distribution<int> pick(1, n);
  const auto ns = QuasifreeKernel::ns_vacuum();
  const auto cp = QuasifreeKernel::complex_pair(n);
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    std::vector<int> labels;
    for (int i = 0; i < points / 2; ++i) {
      const int k = pick(rng);
      labels.push_back(k);
      labels.push_back(n + 1 - k);
    }
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<FieldCombo> img, src;
    for (int k : labels) {
      const cplx z = std::polar(1.0, ph(rng));
      img.push_back(beta_field_at_root(n, k, z));
      src.push_back({FieldTerm(1.0, std::pow(z, n), k)});
    }
    const cplx a = npoint(ns, img), b = npoint(cp, src);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  return worst;
}

double ramond_twisted_residual(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  const auto tw = QuasifreeKernel::twisted_current();
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const cplx z = std::polar(1.0, ph(rng)), w = std::polar(1.0, ph(rng));
    if (std::abs(z * z - w * w) < 1e-2) continue;
    const cplx formula = tw(FieldTerm::at_root(1.0, z), FieldTerm::at_root(1.0, w));
    const cplx pf = ramond_current_two_point(z, w);
    worst = std::max(worst, std::abs(pf - formula) / std::max(1.0, std::abs(formula)));
  }
  return worst;
}

}  // namespace mlf
