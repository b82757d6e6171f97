#include "ncgauss/check.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ncgauss {

CheckResult CheckResult::make(std::string suite, std::string name, std::string identity,
                              std::string params, double lhs, double rhs,
                              double abs_err, double tol) {
  CheckResult r;
  r.suite = std::move(suite);
  r.name = std::move(name);
  r.identity = std::move(identity);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = abs_err;
  r.tol = tol;
  r.status = abs_err <= tol ? Status::pass : Status::fail;
  return r;
}

CheckResult CheckResult::skipped_check(std::string suite, std::string name,
                                       std::string identity, std::string params,
                                       std::string reason) {
  CheckResult r;
  r.suite = std::move(suite);
  r.name = std::move(name);
  r.identity = std::move(identity);
  r.params = std::move(params);
  r.status = Status::skipped;
  r.reason = std::move(reason);
  return r;
}

int Report::passed_count() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) {
    return c.status == CheckResult::Status::pass;
  }));
}

int Report::failed_count() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) {
    return c.status == CheckResult::Status::fail;
  }));
}

int Report::skipped_count() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) {
    return c.status == CheckResult::Status::skipped;
  }));
}

void Report::sort() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckResult& a, const CheckResult& b) {
                     return std::tie(a.suite, a.name, a.params) <
                            std::tie(b.suite, b.name, b.params);
                   });
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = {{"max_level", config.max_level},
                 {"max_branch", config.max_branch},
                 {"truncation", config.truncation},
                 {"quad_level", config.quad_level},
                 {"quad_points", config.quad_points},
                 {"tol_exact", config.tol_exact},
                 {"tol_quad", config.tol_quad},
                 {"tol_weak", config.tol_weak},
                 {"seed", config.seed},
                 {"gkw_grid", config.gkw_grid}};
  if (config.with_timestamp) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  }
  j["summary"] = {{"checks", checks.size()},
                  {"passed", passed_count()},
                  {"failed", failed_count()},
                  {"skipped", skipped_count()}};
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    nlohmann::ordered_json e;
    e["suite"] = c.suite;
    e["name"] = c.name;
    e["identity"] = c.identity;
    e["params"] = c.params;
    if (c.status == CheckResult::Status::skipped) {
      e["status"] = "skipped";
      e["reason"] = c.reason;
    } else {
      e["status"] = c.status == CheckResult::Status::pass ? "pass" : "fail";
      e["lhs"] = c.lhs;
      e["rhs"] = c.rhs;
      e["abs_err"] = c.abs_err;
      e["tol"] = c.tol;
      if (config.with_timestamp) e["wall_ms"] = c.wall_ms;
    }
    j["checks"].push_back(std::move(e));
  }
  return j.dump(2);
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "suite,name,params,status,lhs,rhs,abs_err,tol\n";
  os.precision(17);
  for (const CheckResult& c : checks) {
    const char* status = c.status == CheckResult::Status::pass     ? "pass"
                         : c.status == CheckResult::Status::fail   ? "fail"
                                                                   : "skipped";
    os << c.suite << ',' << c.name << ",\"" << c.params << "\"," << status << ','
       << c.lhs << ',' << c.rhs << ',' << c.abs_err << ',' << c.tol << '\n';
  }
  return os.str();
}

}  // namespace ncgauss
