#pragma once

// The nine acceptance criteria, shared by the acceptance binary and the
// `repro` subcommand.

#include <functional>
#include <string>
#include <vector>

namespace ymflow::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

/// Ids 1..9.
std::vector<int> criterion_ids();

/// Runs one criterion. The runtime budget is part of the verdict. Exceptions
/// are caught and reported as failures.
CriterionResult run_criterion(int id);

/// Runs the listed criteria in order, invoking on_result after each.
std::vector<CriterionResult> run(const std::vector<int>& ids,
                                 const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  [1] name (1.23 s / 5 s): detail"
std::string format_line(const CriterionResult& result);

}  // namespace ymflow::acceptance
