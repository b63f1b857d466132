#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mqrm_cli/config.hpp"

namespace mqrm::cli {

enum class CheckStatus { Pass, Warn, Fail };

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct ValidateReport {
  std::vector<CheckResult> checks;
  bool ok() const;
};

/// Property battery on small reference systems. The numerics block of `cfg`
/// supplies the Hamiltonian conventions, the Hermiticity switch and the Fock
/// cutoff of the convergence check; model and state blocks are not used.
ValidateReport run_validate(const RunConfig& cfg, unsigned jobs = 1, std::ostream* progress = nullptr);

/// Pass/fail table with measured values and tolerances.
std::string format_report(const ValidateReport& report);

}  // namespace mqrm::cli
