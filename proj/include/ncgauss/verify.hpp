#pragma once

#include <string>
#include <vector>

#include "ncgauss/check.hpp"

namespace ncgauss {

/// Suite runners. Each exercises one cluster of identities at the scales set
/// by the config and returns one aggregated CheckResult per identity (trial
/// counts and parameter ranges are rendered into the params field). Budget
/// overruns surface as skipped checks, never as failures.
std::vector<CheckResult> run_farey_suite(const RunConfig& cfg);
std::vector<CheckResult> run_measure_suite(const RunConfig& cfg);
std::vector<CheckResult> run_af_suite(const RunConfig& cfg);
std::vector<CheckResult> run_center_suite(const RunConfig& cfg);
std::vector<CheckResult> run_branch_suite(const RunConfig& cfg);
std::vector<CheckResult> run_ideal_suite(const RunConfig& cfg);
std::vector<CheckResult> run_transfer_suite(const RunConfig& cfg);
std::vector<CheckResult> run_gkw_suite(const RunConfig& cfg);
std::vector<CheckResult> run_states_suite(const RunConfig& cfg);

const std::vector<std::string>& suite_names();

/// Run the named suites (all when empty) and assemble a sorted report.
Report run_suites(const RunConfig& cfg, const std::vector<std::string>& suites = {});

}  // namespace ncgauss
