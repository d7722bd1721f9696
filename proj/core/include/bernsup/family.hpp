#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bernsup/step_function.hpp"

namespace bernsup {

/// One sign outcome eps in {-1,+1}^n, bit i set <=> eps_i = +1.
struct SignVector {
  uint32_t n = 0;
  uint64_t bits = 0;

  static SignVector from_bits(uint32_t n, uint64_t bits);
  int sign(uint32_t i) const { return (bits >> i) & 1 ? +1 : -1; }
};

/// All values immutable after construction; safe to share across threads.
class ProcessFamily {
 public:
  static ProcessFamily make(std::vector<StepFunction> functions);

  uint32_t n() const { return uint32_t(fns_.size()); }
  const StepFunction& function(uint32_t i) const { return fns_[i]; }
  std::span<const StepFunction> functions() const { return fns_; }

  /// Sorted distinct union of all breakpoint times plus {0, 1}. Every path
  /// t -> sum a_i(t) eps_i is constant between consecutive returned times.
  const std::vector<double>& merged_times() const { return merged_; }

  std::vector<double> values_at(double t) const;
  const std::vector<double>& terminal() const { return terminal_; }  // a(1)

  /// Variance profile V(t) = sum_i a_i(t)^2 at each merged time.
  const std::vector<double>& variance_profile() const { return variance_; }
  double terminal_variance() const { return variance_.back(); }  // V(1)
  double terminal_norm() const;                                  // ||a(1)||

  bool dyadic_values() const;
  std::string digest() const;

 private:
  std::vector<StepFunction> fns_;
  std::vector<double> merged_;
  std::vector<double> terminal_;
  std::vector<double> variance_;
};

std::vector<double> merged_times(const ProcessFamily& fam);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

enum class FamilyKind { OrderedAlpha, Indicator, Random, Szatzschneider };

FamilyKind parse_family_kind(std::string_view s);
const char* family_kind_name(FamilyKind k);

struct GenParams {
  std::optional<std::vector<double>> weights;  // indicator / szatzschneider presets
  std::optional<std::vector<double>> jumps;    // indicator jump times
  int max_breakpoints = 8;                     // per function, random kinds
  bool normalize = false;                      // rescale so sum of terminal values is 1
};

/// Deterministic in (kind, n, seed, params). All generated times and values
/// lie on the dyadic grid so the result is usable in exact mode.
///
/// ordered_alpha  a_i(t) = alpha_i(t) a_i(1) with 0 <= alpha_n <= ... <= alpha_1 <= 1.
/// indicator      a_i(t) = a_i(1) 1_{[t_i,1]}(t) with t_1 <= ... <= t_n.
/// random         arbitrary valid monotone step family (a(0) may be nonzero).
/// szatzschneider additionally satisfies the pointwise ordering a_1 >= ... >= a_n
///                and the mass condition sum a_i(1) >= 1 + 2 a_1(1); needs n >= 3.
ProcessFamily gen_family(FamilyKind kind, uint32_t n, uint64_t seed, const GenParams& params = {});

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

struct AdmissibilityReport {
  bool monotone = false;
  bool right_continuous = false;
  bool ordering = false;  // a_1(t) >= ... >= a_n(t) at every merged time
  bool mass = false;      // sum a_i(1) >= 1 + 2 a_1(1)
  double ordering_slack = 0.0;  // min over times/indices of a_i(t) - a_{i+1}(t)
  double mass_slack = 0.0;      // sum a_i(1) - 1 - 2 a_1(1)
  bool all() const { return monotone && right_continuous && ordering && mass; }
};

AdmissibilityReport admissibility_check(const ProcessFamily& fam);

/// Pointwise order statistics across functions: result_i(t) = i-th largest of
/// {a_j(t)}. Restores the pointwise ordering condition while preserving each
/// column's sum and monotonicity.
ProcessFamily pointwise_sorted(const ProcessFamily& fam);

// ---------------------------------------------------------------------------
// Family file format (JSON):
//   {"n": int, "functions": [[{"t": num, "v": num}, ...], ...]}
// Validation on load identical to make_step. Exact mode additionally requires
// all values dyadic.
// ---------------------------------------------------------------------------

ProcessFamily family_from_json(const std::string& text, Mode mode);
ProcessFamily family_from_file(const std::string& path, Mode mode);
std::string family_to_json(const ProcessFamily& fam);

}  // namespace bernsup
