#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ncgauss {

/// One verified identity: what was compared, at which parameters, how close
/// the two sides came, and whether that clears the tolerance.
struct CheckResult {
  enum class Status { pass, fail, skipped };

  std::string suite;     // farey | measure | af | center | branch | ideal | transfer | gkw | states
  std::string name;      // stable machine id within the suite
  std::string identity;  // the identity under test, in math notation
  std::string params;    // rendered parameter record, e.g. "s=2 level=3 trials=200"
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double tol = 0.0;
  Status status = Status::pass;
  double wall_ms = 0.0;

  bool passed() const { return status == Status::pass; }

  static CheckResult make(std::string suite, std::string name, std::string identity,
                          std::string params, double lhs, double rhs, double abs_err,
                          double tol);
  static CheckResult skipped_check(std::string suite, std::string name,
                                   std::string identity, std::string params,
                                   std::string reason);

  std::string reason;  // populated for skipped checks
};

struct RunConfig {
  int max_level = 8;        // deepest main-diagram level exercised
  int max_branch = 4;       // largest branch index s
  int truncation = 100000;  // series truncation S for the transfer operator
  int quad_level = 8;       // Farey level whose intervals form quadrature panels
  int quad_points = 32;     // Gauss-Legendre points per panel
  double tol_exact = 1e-12;
  double tol_quad = 1e-8;
  double tol_weak = 1e-7;
  std::uint64_t seed = 20260808;
  bool with_timestamp = true;
  int gkw_grid = 2000;
};

struct Report {
  RunConfig config;
  std::vector<CheckResult> checks;

  int passed_count() const;
  int failed_count() const;
  int skipped_count() const;
  bool all_passed() const { return failed_count() == 0; }

  /// Order-stable (suite, name, params) sort; call before serializing.
  void sort();

  /// JSON document; when the config disables timestamps, every timing field
  /// is zeroed so reruns with one seed are byte-identical.
  std::string to_json() const;

  /// One row per check, flattened.
  std::string to_csv() const;
};

}  // namespace ncgauss
