#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncgauss/diagram.hpp"
#include "ncgauss/farey.hpp"
#include "ncgauss/transfer.hpp"
#include "ncgauss/verify.hpp"

namespace {

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << content;
}

int run_verify(const ncgauss::RunConfig& cfg, const std::vector<std::string>& suites,
               const std::string& out_path, const std::string& format) {
  const ncgauss::Report report = ncgauss::run_suites(cfg, suites);
  write_or_print(out_path, format == "csv" ? report.to_csv() : report.to_json());
  for (const auto& c : report.checks) {
    if (c.status == ncgauss::CheckResult::Status::fail)
      std::cerr << "FAIL " << c.suite << "/" << c.name << " (" << c.params
                << "): abs_err=" << c.abs_err << " tol=" << c.tol << "\n";
  }
  std::cerr << report.passed_count() << " passed, " << report.failed_count()
            << " failed, " << report.skipped_count() << " skipped\n";
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Finite stages of the Farey AF algebra, its branch quotients, and the "
      "noncommutative Gauss map, with an identity-verification report"};
  app.require_subcommand(1);

  ncgauss::RunConfig cfg;
  std::string out_path;
  std::string format = "json";
  std::vector<std::string> suites;

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", suites,
                     "suites to run (default: all): farey measure af center branch "
                     "ideal transfer gkw states");
  verify->add_option("--level", cfg.max_level, "deepest main-diagram level");
  verify->add_option("--smax", cfg.max_branch, "largest branch index");
  verify->add_option("--truncation", cfg.truncation, "series truncation S");
  verify->add_option("--tol", cfg.tol_quad, "quadrature-backed tolerance");
  verify->add_option("--weak-tol", cfg.tol_weak, "weak-identity tolerance");
  verify->add_option("--exact-tol", cfg.tol_exact, "exact-identity tolerance");
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--gkw-grid", cfg.gkw_grid, "collocation grid for gkw");
  verify->add_option("--out", out_path, "report path ('-' for stdout)");
  verify->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  verify->add_flag_callback(
      "--no-timestamp", [&] { cfg.with_timestamp = false; },
      "suppress timestamps and timings for byte-stable reports");

  CLI::App* diagram = app.add_subcommand("diagram", "export a Bratteli diagram");
  int dg_levels = 3;
  int dg_branch = 0;
  std::string dg_which = "main";
  std::string dg_format = "dot";
  std::string dg_out;
  diagram->add_option("--levels", dg_levels, "levels to export")->check(CLI::Range(0, 12));
  diagram->add_option("--which", dg_which, "main|quotient")
      ->check(CLI::IsMember({"main", "quotient"}));
  diagram->add_option("--branch", dg_branch, "branch index for the quotient");
  diagram->add_option("--format", dg_format, "dot|json")
      ->check(CLI::IsMember({"dot", "json"}));
  diagram->add_option("--out", dg_out, "output path ('-' for stdout)");

  CLI::App* transfer = app.add_subcommand("transfer", "sample the transfer operator");
  std::string tr_fn = "one";
  int tr_S = 100;
  int tr_samples = 101;
  std::string tr_out;
  transfer->add_option("--fn", tr_fn, "one|id|square")
      ->check(CLI::IsMember({"one", "id", "square"}));
  transfer->add_option("--truncation", tr_S, "series truncation S");
  transfer->add_option("--samples", tr_samples, "sample count on [0,1]");
  transfer->add_option("--out", tr_out, "CSV path ('-' for stdout)");

  CLI::App* gkw = app.add_subcommand("gkw", "estimate the subdominant eigenvalue");
  int gkw_grid = 2000;
  gkw->add_option("--grid", gkw_grid, "collocation grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify(cfg, suites, out_path, format);

    if (diagram->parsed()) {
      ncgauss::DiagramPtr d = dg_which == "main"
                                  ? ncgauss::FareyDiagram::farey(dg_levels)
                                  : ncgauss::FareyDiagram::quotient(
                                        std::max(1, dg_branch), dg_levels);
      write_or_print(dg_out,
                     dg_format == "dot" ? d->to_dot(dg_levels) : d->to_json(dg_levels));
      return 0;
    }

    if (transfer->parsed()) {
      auto fn = [&](double t) {
        if (tr_fn == "one") return 1.0;
        if (tr_fn == "id") return t;
        return t * t;
      };
      std::ostringstream os;
      os.precision(17);
      os << "theta,value,tail_bound\n";
      for (int i = 0; i < tr_samples; ++i) {
        const double t = tr_samples == 1 ? 0.0 : static_cast<double>(i) / (tr_samples - 1);
        const auto r = ncgauss::apply_transfer(fn, t, tr_S);
        os << t << ',' << r.value << ',' << r.tail_bound << '\n';
      }
      write_or_print(tr_out, os.str());
      return 0;
    }

    if (gkw->parsed()) {
      std::vector<int> grids = {std::max(50, gkw_grid / 4),
                                std::max(50, gkw_grid / 2), gkw_grid};
      grids.erase(std::unique(grids.begin(), grids.end()), grids.end());
      for (int g : grids) {
        const auto r = ncgauss::gkw_estimate(g);
        std::cout << "grid=" << r.grid << " lambda1=" << r.lambda1
                  << " residual=" << r.lambda1_residual << " lambda2=" << r.lambda2
                  << " iterations=" << r.iterations << "\n";
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
