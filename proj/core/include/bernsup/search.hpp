#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bernsup/family.hpp"

namespace bernsup {

/// Best family found for the tail ratio P(X >= c) / P(Y >= 1).
struct SearchState {
  ProcessFamily incumbent;
  double ratio = 0.0;
  uint64_t count_x = 0;  // exact counts behind the ratio
  uint64_t count_y = 0;
  double c = 1.0;
  uint64_t budget = 0;
  uint64_t evaluations = 0;
  uint64_t seed = 0;
  std::string family_digest;
  bool counterexample_candidate = false;  // n >= 5 and ratio > 2
};

/// Derivative-free search over admissible families (conditions: pointwise
/// ordering and mass). Random restarts plus local jitter of one breakpoint
/// time or value, re-projected onto the admissible set; ratio evaluated by the
/// exact oracle; incumbent monotone; deterministic given the seed. The budget
/// counts oracle evaluations of candidates (the initial incumbent evaluation
/// is free).
SearchState search_ratio(uint32_t n, double c, uint64_t budget, uint64_t seed,
                         const std::optional<ProcessFamily>& init = std::nullopt);

struct SharpnessRow {
  uint32_t n = 0;
  double best_ratio = 0.0;
  std::string family_digest;
  bool counterexample_candidate = false;
  uint64_t evaluations = 0;
};

std::vector<SharpnessRow> sharpness_table(std::span<const uint32_t> ns, double c, uint64_t budget,
                                          uint64_t seed);

}  // namespace bernsup
