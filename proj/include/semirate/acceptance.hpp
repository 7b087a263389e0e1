#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace semirate::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  // artifact filename -> CSV content, written by the caller
  std::vector<std::pair<std::string, std::string>> artifacts;
};

// Criteria 1..10 (11, determinism, is handled by the callers since it needs
// either a second process or a second in-process pass).
std::vector<CriterionResult> run_criteria(std::uint64_t seed);

CriterionResult criterion_constants(std::uint64_t seed);              // 1
CriterionResult criterion_kernel_exactness();                        // 2
CriterionResult criterion_interpolation();                           // 3
CriterionResult criterion_upper_rates(std::uint64_t seed);           // 4
CriterionResult criterion_empirical_order(std::uint64_t seed);       // 5
CriterionResult criterion_analytic(std::uint64_t seed);              // 6
CriterionResult criterion_lower_bounds(std::uint64_t seed);          // 7
CriterionResult criterion_breakdown();                               // 8
CriterionResult criterion_appendix();                                // 9
CriterionResult criterion_doubling(std::uint64_t seed);              // 10

std::string summary_markdown(const std::vector<CriterionResult>& results);

// Runs all criteria, writes artifacts + summary.md under out_dir, returns
// overall pass. Used by the `reproduce` subcommand.
bool reproduce(const std::string& out_dir, std::uint64_t seed,
               bool check_determinism, std::string* log);

}  // namespace semirate::acceptance
