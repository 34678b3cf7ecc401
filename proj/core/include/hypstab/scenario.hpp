#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hypstab {

inline constexpr const char* kVersion = "0.1.0";

struct CheckResult {
  std::string name;
  bool pass = false;
};

/// Outcome of one scenario document.  `report` is pretty-printed JSON with
/// timing confined to keys named "seconds"; `csv` holds the graph of h when
/// a perturb-verify check ran (last one wins).
struct ScenarioRun {
  std::string report;
  std::string csv;
  std::vector<CheckResult> checks;

  bool pass() const;
  /// 0 when every check passed, 1 otherwise.
  int exit_code() const { return pass() ? 0 : 1; }
};

/// Runs every check listed in a scenario:
///
///   {"model": "surface:2", "seed": 7,
///    "checks": [{"type": "delta", "radius": 6, "inner": 3}, ...]}
///
/// Check types: ball, delta, gromov, project, ledger, broken, reconstruct,
/// perturb-verify.  Malformed documents throw InvalidInput; a check whose
/// hypotheses fail is reported as failed with its step named.
ScenarioRun run_scenario(std::string_view document);

/// The report with every "seconds" field removed.
std::string strip_timing(std::string_view report);

}  // namespace hypstab
