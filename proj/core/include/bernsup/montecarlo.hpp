#pragma once

#include <span>
#include <vector>

#include "bernsup/family.hpp"

namespace bernsup {

struct MCEstimate {
  double estimate = 0.0;  // k / samples
  double lo = 0.0, hi = 0.0;  // Wilson score interval at 95%
  uint64_t samples = 0;
  uint64_t seed = 0;
};

struct MeanEstimate {
  double mean = 0.0;
  double lo = 0.0, hi = 0.0;  // normal interval at 95%
};

struct MCReport {
  Mode mode = Mode::Float;
  uint32_t n = 0;
  uint64_t samples = 0;
  uint64_t seed = 0;
  std::vector<double> thresholds;
  std::vector<MCEstimate> p_x;
  std::vector<MCEstimate> p_y;
  MeanEstimate ex;
};

/// Seeded Monte-Carlo estimate of P(X >= u), P(Y >= u) and EX. Signs come from
/// a counter-based generator (sample index -> sign words), so the result is a
/// pure function of (family, thresholds, samples, seed): splitting the sample
/// range across workers reproduces the single-stream report exactly.
MCReport estimate_tails(const ProcessFamily& fam, std::span<const double> thresholds,
                        uint64_t samples, uint64_t seed, int workers = 1, Mode mode = Mode::Float);

/// Wilson 95% score interval for k successes out of n.
std::pair<double, double> wilson95(uint64_t k, uint64_t n);

}  // namespace bernsup
