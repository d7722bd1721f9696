#pragma once

#include <span>
#include <string>
#include <vector>

#include "bernsup/family.hpp"
#include "bernsup/oracle.hpp"

namespace bernsup {

/// One evaluated inequality instance. holds <=> lhs <= rhs (a relative
/// 1e-12 guard absorbs rounding of the transcendental sides; enumeration-exact
/// sides compare exactly, so equality cases pass).
struct CheckResult {
  std::string check_id;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double margin = 0.0;  // rhs - lhs
  std::string inputs_digest;
  bool theorem_backed = true;
  bool hypothesis_violated = false;
  std::string note;
};

bool holds_leq(double lhs, double rhs);

/// Tail-domination preset: multiplier C_1/sqrt(theta) + 1 + alpha against
/// tail constant max{18/(1-theta)^2, 2/(alpha sqrt(theta))}.
struct DominationPreset {
  double alpha = 0.1;
  double theta = 0.5;
  double c1 = 1.0;

  static DominationPreset make(double alpha, double theta, double c1);
  double multiplier() const;
  double tail_constant() const;
};

// ---------------------------------------------------------------------------
// Shared per-family snapshot: one exhaustive enumeration, queried many times.
// ---------------------------------------------------------------------------

class FamilyTails {
 public:
  static FamilyTails build(const ProcessFamily& fam, Mode mode, int workers = 1);

  uint32_t n() const { return n_; }
  uint64_t paths() const { return paths_; }
  double ex() const { return ex_; }
  double ey_plus() const { return ey_plus_; }
  double e_abs_y() const { return e_abs_y_; }
  double sigma() const { return sigma_; }
  double y_max() const { return y_max_; }  // sum a_i(1)
  const std::string& digest() const { return digest_; }
  const std::vector<double>& terminal() const { return terminal_; }

  uint64_t count_sup_geq(double u) const;
  uint64_t count_term_geq(double u) const;
  uint64_t count_abs_term_geq(double u) const;
  double p_x(double u) const { return double(count_sup_geq(u)) / double(paths_); }
  double p_y(double u) const { return double(count_term_geq(u)) / double(paths_); }
  double hinge(double u) const;       // E(Y-u)_+
  double abs_moment(double p) const;  // E|Y|^p
  const std::vector<double>& sup_values() const { return sups_; }
  const std::vector<double>& term_values() const { return terms_; }

 private:
  uint32_t n_ = 0;
  uint64_t paths_ = 0;
  Mode mode_ = Mode::Exact;
  std::vector<double> sups_;   // sorted
  std::vector<double> terms_;  // sorted
  std::vector<double> term_suffix_;
  std::vector<double> terminal_;
  double ex_ = 0, ey_plus_ = 0, e_abs_y_ = 0, sigma_ = 0, y_max_ = 0;
  std::string digest_;
};

// ---------------------------------------------------------------------------
// Individual checks. Weight-vector checks take the index point t directly;
// family checks take a FamilyTails snapshot. Hypothesis failures (e.g. n < 5)
// are reported via hypothesis_violated, never thrown.
// ---------------------------------------------------------------------------

CheckResult check_hyp(std::span<const double> t, double p, double q, Mode mode = Mode::Exact);
CheckResult check_szarek(std::span<const double> t, Mode mode = Mode::Exact);
std::vector<CheckResult> check_pz(std::span<const double> t, double theta, Mode mode = Mode::Exact);
CheckResult check_kahane(std::span<const double> t, double u, Mode mode = Mode::Exact);
CheckResult check_conc_phi(const BoxSpec& box, const PhiSpec& phi, Mode mode = Mode::Exact);
CheckResult check_subgauss(const BoxSpec& box, double u, Mode mode = Mode::Exact);

CheckResult check_domin_ey(const FamilyTails& ft, double alpha, double u);
CheckResult check_domina(const FamilyTails& ft, double u, const DominationPreset& preset);
CheckResult check_bt16(const FamilyTails& ft, double u, double c1);
CheckResult check_sza(const FamilyTails& ft, double u);
CheckResult check_classic_lo(std::span<const double> weights, double u, Mode mode = Mode::Exact);
std::vector<CheckResult> check_proposition(const ProcessFamily& fam, const FamilyTails& ft);
CheckResult check_remark_large_u(const FamilyTails& ft, double u, double eps);

// ---------------------------------------------------------------------------
// Constant table presets.
// ---------------------------------------------------------------------------

enum class ConstantPreset { Sza8_53, Six430, Bt16 };

struct ConstantRow {
  ConstantPreset preset;
  double c1 = 0.0;
  double multiplier = 0.0;
  double tail_constant = 0.0;
  double alpha = 0.0;
  double theta = 0.0;
};

const char* preset_name(ConstantPreset p);
ConstantRow derive_constants(ConstantPreset preset, double c1);

// ---------------------------------------------------------------------------
// Suite driver.
// ---------------------------------------------------------------------------

struct ConjectureCandidate {
  std::string family_digest;
  uint32_t n = 0;
  double ratio = 0.0;  // P(X >= 1) / P(Y >= 1)
};

struct SuiteSummary {
  size_t total = 0;
  size_t passed = 0;
  size_t failed = 0;  // theorem-backed failures only
  size_t skipped_hypothesis = 0;
};

struct SuiteReport {
  std::vector<CheckResult> results;
  std::vector<ConjectureCandidate> conjecture_candidates;
  SuiteSummary summary;

  void add(CheckResult r);
  void add(std::vector<CheckResult> rs);
};

/// Run every applicable check on one family, with thresholds defaulting to a
/// 10-point grid over the support of Y.
void run_family_suite(SuiteReport& rep, const ProcessFamily& fam, std::span<const double> thresholds,
                      Mode mode);

/// Seeded random battery: `count` families with n in [n_lo, n_hi].
SuiteReport run_random_suite(size_t count, uint32_t n_lo, uint32_t n_hi, uint64_t seed, Mode mode);

std::vector<double> default_threshold_grid(double y_max, int points = 10);

}  // namespace bernsup
