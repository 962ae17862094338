#pragma once

#include <string>
#include <vector>

namespace rnlw {

// One acceptance criterion: tolerances live in the implementation.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct CriteriaOptions {
  int mc_trials = 512;
  bool refined = false;  // add the refined-resolution oracle comparisons
};

inline constexpr int kCriterionCount = 13;

CriterionResult run_criterion(int id, const CriteriaOptions& opt = {});
// runs in order; trajectories are shared between criteria of one call
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const CriteriaOptions& opt = {});

// the subsets driven by the verify and mc subcommands
std::vector<int> verify_criteria();
std::vector<int> mc_criteria();

}  // namespace rnlw
