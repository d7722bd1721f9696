#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bernsup/family.hpp"

namespace bernsup {

// ---------------------------------------------------------------------------
// Variance-quantile nets: u^k_l = inf{ t : V(t) >= (l/N_k) V(1) }.
// ---------------------------------------------------------------------------

struct NetLevel {
  int k = 0;
  uint64_t count = 0;          // N_k
  std::vector<double> points;  // u^k_l for l = 0..N_k-1

  /// pi_k(t) = max{ u^k_l <= t }.
  double project(double t) const;
};

struct ChainingNet {
  std::vector<NetLevel> levels;
};

/// Builds the nets for the given level sizes; each N_k must divide N_{k+1}.
ChainingNet build_net(const ProcessFamily& fam, std::span<const uint64_t> counts);

// ---------------------------------------------------------------------------
// Constant pipeline.
//
// Per-level series term:
//   term_k = C_k sqrt((p_k-1)/N_{k-1}) (1 + (1/2) N_k (1/(p_k-1)) ((p_k-1)/(C_k p_k))^{p_k})
// Level counts grow doubly exponentially, so everything with N_k or p_k in an
// exponent lives in the log2 domain; counts are kept exact while they fit a
// 64-bit integer and as (log2, real multiplier) afterwards.
// ---------------------------------------------------------------------------

/// One-sided moment-overshoot bound: (1/2) C (1/(p-1)) ((p-1)/(Cp))^p.
double kwa_bound(double C, double p);

/// log2 of the stated minimizer x = ((2^{k+1}-1)(2^k-1))^{1/3} (2^k/(2^k-1))^{(2/3)2^k} N_prev^{1/3} 2^{2^k}.
long double f_minimizer_log2(int k, long double log2_n_prev);
double f_minimizer(int k, uint64_t n_prev);

struct PlanLevel {
  int k = 0;
  double c = 2.0;
  double p = 4.0;
  long double multiplier = 1.0L;  // N_k / N_{k-1}, integer-valued while representable
  long double log2_count = 0.0L;  // log2 N_k
  std::optional<uint64_t> count;  // exact N_k when it fits
  double base = 0.0;
  double correction = 0.0;
  double term = 0.0;
};

struct ConstantPlan {
  int truncation = 0;  // K
  std::vector<PlanLevel> levels;
  double tail_bound = 0.0;            // overestimate of the series beyond K
  long double tail_bound_log2 = 0.0;  // log2 of the tail bound (it can underflow double)
  double total = 0.0;                 // sum of terms + tail bound
  bool paper_claim_met = false;       // total <= kClaimedTotal
};

/// The claimed upper bound the pipeline is compared against.
inline constexpr double kClaimedTotal = 4.45;

struct PlanParams {
  double c = 2.0;
  double p = 4.0;
  long double multiplier = 1.0L;  // N_k / N_{k-1}
};

/// Recompute all level terms, the tail bound, and the total for explicit
/// per-level parameters (k = 1..params.size()).
ConstantPlan make_plan(std::span<const PlanParams> params);

/// The default pipeline: C_1 = 1, C_k = 2 for k >= 2, p_k = 2^k, N_0 = 1 and
/// N_k the multiple of N_{k-1} closest to the stated f minimizer (ties up,
/// clamped to >= N_{k-1}).
ConstantPlan paper_plan(int K);

double total_constant(const ConstantPlan& plan);

/// Coordinate descent with seeded random restarts over C_k in [1,4], p_k >= 2
/// and the integer level multipliers. Budget counts plan evaluations; the
/// incumbent starts at paper_plan(K), so the result never exceeds it.
ConstantPlan optimize_plan(int K, uint64_t budget, uint64_t seed);

// ---------------------------------------------------------------------------
// Per-family bound on EX.
// ---------------------------------------------------------------------------

struct FamilyBound {
  double bound = 0.0;  // upper bound on EX
  double sigma = 0.0;  // ||a(1)||
  bool closed = false;
  int closure_level = 0;  // first level with V(1)/N_k below the smallest V gap
  double residual = 0.0;  // finite-max remainder term when closure is not reached
};

FamilyBound family_bound(const ProcessFamily& fam, const ConstantPlan& plan);

}  // namespace bernsup
