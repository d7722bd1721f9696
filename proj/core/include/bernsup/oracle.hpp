#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bernsup/family.hpp"

namespace bernsup {

/// Exhaustive enumeration is capped at 2^30 sign vectors; beyond that use the
/// Monte-Carlo estimator.
inline constexpr uint32_t kMaxEnumVars = 30;

struct PathEval {
  SignVector sign;
  double sup_value = 0.0;
  double argmax_time = 0.0;  // smallest time attaining the sup
};

/// X(eps) = max over merged times of sum_i a_i(t) eps_i.
PathEval path_sup(const ProcessFamily& fam, SignVector sign);

/// Tail/moment report from exhaustive enumeration over all 2^n sign vectors.
/// Probabilities are exact dyadics k/2^n in both modes; the mode controls how
/// atoms sitting on a threshold are classified.
struct TailReport {
  Mode mode = Mode::Exact;
  uint32_t n = 0;
  std::vector<double> thresholds;
  std::vector<Dyadic> p_x;        // P(X >= u)
  std::vector<Dyadic> p_y;        // P(Y >= u)
  std::vector<Dyadic> p_abs_dev;  // P(|X - EX| >= u)
  double ex = 0.0;
  double ey_plus = 0.0;  // E(Y)_+
  double e_abs_y = 0.0;
  std::vector<double> moment_orders;
  std::vector<double> moments;  // E|Y|^p per order
};

TailReport enumerate_exact(const ProcessFamily& fam, std::span<const double> thresholds,
                           std::span<const double> moment_orders, Mode mode = Mode::Exact,
                           int workers = 1);

// ---------------------------------------------------------------------------
// phi gap
// ---------------------------------------------------------------------------

/// Convex test functions.
struct PhiSpec {
  enum class Kind { Exp, Hinge, Power, Square };
  Kind kind = Kind::Square;
  double param = 0.0;  // lambda for Exp, u for Hinge, p for Power

  static PhiSpec exp(double lambda) { return {Kind::Exp, lambda}; }
  static PhiSpec hinge(double u) { return {Kind::Hinge, u}; }
  static PhiSpec power(double p);
  static PhiSpec square() { return {Kind::Square, 0.0}; }

  double operator()(double x) const;
  bool increasing() const { return kind == Kind::Hinge || (kind == Kind::Exp && param >= 0.0); }
  std::string name() const;
};

/// Box [0,t0_1] x ... x [0,t0_n], optionally restricted to a finite point set
/// with offsets b(t); without points the sup runs over the whole box.
struct BoxPoint {
  std::vector<double> t;
  double b = 0.0;
};
struct BoxSpec {
  std::vector<double> corner;  // t0
  std::optional<std::vector<BoxPoint>> points;
  void validate() const;
};

struct PhiGapResult {
  double lhs = 0.0;  // E phi(X - EX)
  double rhs = 0.0;  // E phi(Y)
  double ex = 0.0;
  bool whole_box = true;
};

PhiGapResult phi_gap(const BoxSpec& spec, const PhiSpec& phi, Mode mode = Mode::Exact);

/// P(|X - EX| >= u) for the whole-box sup (X - EX = Y/2 pathwise).
Dyadic box_abs_dev_tail(std::span<const double> corner, double u, Mode mode = Mode::Exact);

// ---------------------------------------------------------------------------
// partial-sum and terminal-variable statistics for plain weight vectors
// ---------------------------------------------------------------------------

struct ClassicLoStats {
  Dyadic p_max;   // P(max_k S_k >= u)
  Dyadic p_last;  // P(S_n >= u)
};
ClassicLoStats classic_lo_stats(std::span<const double> weights, double u, Mode mode = Mode::Exact);
std::vector<ClassicLoStats> classic_lo_stats_multi(std::span<const double> weights,
                                                   std::span<const double> thresholds,
                                                   Mode mode = Mode::Exact);

struct KahaneSides {
  double lhs = 0.0;  // integral of P(Y >= u+t) dt = E(Y-u)_+
  double rhs = 0.0;  // 4 P(Y >= u) E(Y)_+
  Dyadic p_tail;
  double ey_plus = 0.0;
};
KahaneSides kahane_integral(std::span<const double> weights, double u, Mode mode = Mode::Exact);

/// E|Y|^p for Y = sum w_i eps_i, by enumeration.
double weight_abs_moment(std::span<const double> weights, double p);
/// ||Y||_p = (E|Y|^p)^(1/p).
double weight_lp_norm(std::span<const double> weights, double p);
/// E|Y|.
double weight_abs_mean(std::span<const double> weights);

}  // namespace bernsup
