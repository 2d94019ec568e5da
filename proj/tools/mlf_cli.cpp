// Batch driver for the verification suites.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>

#include "mlf/modular.hpp"
#include "mlf/suites.hpp"

namespace {

// "11/2", "5.5" or "10".
mlf::HalfInt parse_cutoff(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t pos = 0;
  if (slash != std::string::npos) {
    const long num = std::stol(s.substr(0, slash), &pos);
    if (pos != slash || s.substr(slash + 1) != "2") throw std::invalid_argument("cutoff must be k/2, a decimal or an integer");
    return mlf::HalfInt::from_twice(num);
  }
  const double v = std::stod(s, &pos);
  if (pos != s.size() || std::abs(2 * v - std::round(2 * v)) > 1e-12)
    throw std::invalid_argument("cutoff must be a multiple of 1/2");
  return mlf::HalfInt::from_twice(std::lround(2 * v));
}

bool write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilocal fermion verification suites"};
  app.require_subcommand(1);

  mlf::SuiteConfig cfg;
  std::string cutoff, out, format = "json", trajectory;
  double tol = 0;
  int traj_samples = 41;

  for (const char* name : {"verify-iso", "symmetries", "modular", "ramond", "report-all"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--n", cfg.n, "number of complex fields / intervals")->check(CLI::Range(1, 8));
    sub->add_option("--cutoff", cutoff, "mode cutoff, e.g. 11/2, 7.5 or 10");
    sub->add_option("--tol", tol, "override every tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--intervals", cfg.intervals, "endpoint phases u1,v1,u2,v2,...")->delimiter(',');
    sub->add_option("--samples", cfg.samples, "random samples per sampled check")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", out, "report path (default stdout)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timing", cfg.timing, "record per-check runtimes (breaks byte identity)");
    if (std::string(name) == "modular") {
      sub->add_option("--trajectory", trajectory, "write X, O_11, O_12, ... as CSV to this path");
      sub->add_option("--trajectory-samples", traj_samples, "rows of the trajectory table")->check(CLI::PositiveNumber);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  mlf::Report report;
  try {
    cfg.suite = app.get_subcommands().front()->get_name();
    if (!cutoff.empty()) cfg.cutoff = parse_cutoff(cutoff);
    else if (cfg.suite == "symmetries") cfg.cutoff = mlf::HalfInt::from_twice(15);
    else if (cfg.suite == "ramond") cfg.cutoff = mlf::HalfInt::integer(10);
    if (tol > 0) cfg.tol = tol;
    cfg.validate();
    report = mlf::run_suite(cfg);
    if (!trajectory.empty()) {
      std::vector<std::pair<double, double>> arcs;
      for (std::size_t i = 0; i + 1 < cfg.intervals.size(); i += 2) arcs.emplace_back(cfg.intervals[i], cfg.intervals[i + 1]);
      const auto fam = arcs.empty() ? mlf::IntervalFamily::symmetric(cfg.n, 0.2, 0.2 + 1.5 / cfg.n)
                                    : mlf::IntervalFamily::general(arcs);
      if (!write_out(trajectory, mlf::trajectory_csv(mlf::ModularGeometry(fam), traj_samples)))
        throw std::runtime_error("cannot write " + trajectory);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!write_out(out, format == "csv" ? mlf::report_csv(report) : mlf::report_json(report))) {
    std::cerr << "error: cannot write " << out << "\n";
    return 2;
  }
  for (const auto& r : report.records)
    if (!r.pass) std::cerr << "FAIL " << r.id << " [" << r.anchor << "] " << r.note << "\n";
  if (report.resource_error()) return 2;
  return report.all_pass() ? 0 : 1;
}
