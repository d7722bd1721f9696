#include "bernsup/chaining.hpp"

#include <algorithm>
#include <cmath>

namespace bernsup {

namespace {

constexpr long double kLn2 = 0.6931471805599453094172321214581766L;
constexpr int kMaxLevels = 60;
constexpr uint64_t kMaxNetPoints = 1ull << 22;

long double log2_pow2_minus1(int j) {
  // log2(2^j - 1) = j + log(1 - 2^-j)/log 2
  return (long double)j + log1pl(-exp2l((long double)-j)) / kLn2;
}

}  // namespace

// ---------------------------------------------------------------------------
// nets
// ---------------------------------------------------------------------------

double NetLevel::project(double t) const {
  auto it = std::upper_bound(points.begin(), points.end(), t);
  if (it == points.begin()) return points.front();
  return *std::prev(it);
}

ChainingNet build_net(const ProcessFamily& fam, std::span<const uint64_t> counts) {
  const double v1 = fam.terminal_variance();
  if (!(v1 > 0.0)) fail(Errc::ZeroVariance, "variance profile vanishes at t = 1");
  if (counts.empty()) fail(Errc::InvalidParams, "need at least one level size");
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) fail(Errc::InvalidParams, "level sizes must be >= 1");
    if (counts[i] > kMaxNetPoints) fail(Errc::InvalidParams, "level size too large to materialize");
    if (i > 0 && counts[i] % counts[i - 1] != 0)
      fail(Errc::NonNestedCounts, "each N_k must divide N_{k+1}");
  }

  const auto& times = fam.merged_times();
  const auto& var = fam.variance_profile();

  ChainingNet net;
  net.levels.reserve(counts.size());
  for (size_t li = 0; li < counts.size(); ++li) {
    NetLevel level;
    level.k = int(li) + 1;
    level.count = counts[li];
    level.points.reserve(counts[li]);
    size_t j = 0;  // single scan: thresholds (l/N) V(1) are increasing in l
    for (uint64_t l = 0; l < counts[li]; ++l) {
      const double thr = v1 * (double(l) / double(counts[li]));
      while (j < var.size() && var[j] < thr) ++j;
      level.points.push_back(times[j]);
    }
    net.levels.push_back(std::move(level));
  }
  return net;
}

// ---------------------------------------------------------------------------
// constant pipeline
// ---------------------------------------------------------------------------

double kwa_bound(double C, double p) {
  if (!(C >= 1.0)) fail(Errc::ParamOutOfRange, "kwa bound needs C >= 1");
  if (!(p >= 2.0)) fail(Errc::ParamOutOfRange, "kwa bound needs p >= 2");
  const long double pl = p;
  const long double l2 = -1.0L + log2l((long double)C) - log2l(pl - 1) +
                         pl * (log2l(pl - 1) - log2l((long double)C * pl));
  return double(exp2l(l2));
}

long double f_minimizer_log2(int k, long double log2_n_prev) {
  if (k < 1) fail(Errc::ParamOutOfRange, "level must be >= 1");
  const long double pk = exp2l((long double)k);  // 2^k
  const long double a = (log2_pow2_minus1(k + 1) + log2_pow2_minus1(k) + log2_n_prev) / 3.0L;
  const long double b = (2.0L / 3.0L) * pk * ((long double)k - log2_pow2_minus1(k));
  return a + b + pk;
}

double f_minimizer(int k, uint64_t n_prev) {
  if (n_prev < 1) fail(Errc::ParamOutOfRange, "N_prev must be >= 1");
  return double(exp2l(f_minimizer_log2(k, log2l((long double)n_prev))));
}

namespace {

struct LevelOut {
  long double term = 0.0L;
  long double base = 0.0L;
  long double correction = 0.0L;
  long double log2_count_next = 0.0L;
};

// One series level with C, p (long double so tail levels can use p = 2^k far
// beyond double range), previous and own log2 counts.
LevelOut level_term(long double c, long double p, long double log2_n_prev, long double log2_n) {
  LevelOut out;
  out.log2_count_next = log2_n;
  const long double l2base = log2l(c) + 0.5L * (log2l(p - 1) - log2_n_prev);
  const long double l2corr = log2_n - 1.0L - log2l(p - 1) + p * (log2l(p - 1) - log2l(c * p));
  out.base = exp2l(l2base);
  out.correction = exp2l(l2corr);
  // log2(1 + corr), stable for both tiny and huge corrections
  long double l2one_plus;
  if (l2corr < 0)
    l2one_plus = log1pl(out.correction) / kLn2;
  else
    l2one_plus = l2corr + log1pl(exp2l(-l2corr)) / kLn2;
  out.term = exp2l(l2base + l2one_plus);
  return out;
}

// Overestimate of the series beyond K: extend with the template C = 2,
// p_k = 2^k and the f-minimizer recursion, keeping a lower chain of counts for
// the bases and an upper chain for the corrections so every tail term is an
// upper bound. Terms collapse doubly exponentially; the final window term is
// added once more to cover the geometric remainder.
long double tail_bound_log2_from(int K, long double log2_n_k) {
  long double lo = log2_n_k, hi = log2_n_k;
  long double sum = 0.0L;
  long double last = 0.0L;
  for (int j = K + 1; j <= K + 64; ++j) {
    const long double p = exp2l((long double)j);
    const long double l2x_lo = f_minimizer_log2(j, lo);
    const long double l2x_hi = f_minimizer_log2(j, hi);
    long double m_lo = std::max(0.0L, l2x_lo - lo);
    long double m_hi = std::max(0.0L, l2x_hi - hi);
    if (m_lo < 62) m_lo = log2l(std::max(1.0L, floorl(exp2l(m_lo))));
    if (m_hi < 62) m_hi = log2l(ceill(exp2l(m_hi)));
    const long double lo_prev = lo;
    lo += m_lo;
    hi += m_hi;
    const LevelOut t = level_term(2.0L, p, lo_prev, hi);
    sum += t.term;
    last = t.term;
    if (t.term > 0 && log2l(t.term) < -4000.0L) break;
  }
  sum += last;
  return sum > 0 ? log2l(sum) : -16384.0L;
}

}  // namespace

ConstantPlan make_plan(std::span<const PlanParams> params) {
  if (params.empty() || params.size() > kMaxLevels)
    fail(Errc::ParamOutOfRange, "plan needs between 1 and 60 levels");
  ConstantPlan plan;
  plan.truncation = int(params.size());
  plan.levels.reserve(params.size());

  long double l2n = 0.0L;  // log2 N_{k-1}, N_0 = 1
  std::optional<uint64_t> count = 1;
  long double sum = 0.0L;
  for (size_t i = 0; i < params.size(); ++i) {
    const auto& pp = params[i];
    if (!(pp.c >= 1.0)) fail(Errc::ParamOutOfRange, "C_k must be >= 1");
    if (!(pp.p >= 2.0)) fail(Errc::ParamOutOfRange, "p_k must be >= 2");
    if (!(pp.multiplier >= 1.0L)) fail(Errc::ParamOutOfRange, "N_k must be >= N_{k-1}");

    long double m = pp.multiplier;
    if (m < 0x1p62L) m = roundl(m);  // divisibility: integer multiple of N_{k-1}
    const long double l2n_next = l2n + log2l(m);

    PlanLevel lvl;
    lvl.k = int(i) + 1;
    lvl.c = pp.c;
    lvl.p = pp.p;
    lvl.multiplier = m;
    lvl.log2_count = l2n_next;
    if (count && m < 0x1p62L) {
      const unsigned __int128 next = (unsigned __int128)(*count) * (unsigned __int128)m;
      if (next < ((unsigned __int128)1 << 63))
        count = uint64_t(next);
      else
        count.reset();
    } else {
      count.reset();
    }
    lvl.count = count;

    const LevelOut t = level_term(pp.c, pp.p, l2n, l2n_next);
    lvl.base = double(t.base);
    lvl.correction = double(t.correction);
    lvl.term = double(t.term);
    sum += t.term;
    plan.levels.push_back(std::move(lvl));
    l2n = l2n_next;
  }

  plan.tail_bound_log2 = tail_bound_log2_from(plan.truncation, l2n);
  const long double tail = exp2l(plan.tail_bound_log2);
  plan.tail_bound = double(tail);
  plan.total = double(sum + tail);
  plan.paper_claim_met = plan.total <= kClaimedTotal;
  return plan;
}

ConstantPlan paper_plan(int K) {
  if (K < 1 || K > kMaxLevels) fail(Errc::ParamOutOfRange, "K must be in [1,60]");
  std::vector<PlanParams> params;
  params.reserve(K);
  long double l2n = 0.0L;
  for (int k = 1; k <= K; ++k) {
    PlanParams pp;
    pp.c = k == 1 ? 1.0 : 2.0;
    pp.p = std::ldexp(1.0, k);  // 2^k
    const long double l2m = f_minimizer_log2(k, l2n) - l2n;
    long double m;
    if (l2m < 62)
      m = std::max(1.0L, floorl(exp2l(l2m) + 0.5L));  // closest multiple, ties up
    else
      m = exp2l(l2m);
    pp.multiplier = m;
    params.push_back(pp);
    l2n += log2l(m);
  }
  return make_plan(params);
}

double total_constant(const ConstantPlan& plan) { return plan.total; }

// ---------------------------------------------------------------------------
// plan optimization
// ---------------------------------------------------------------------------

namespace {

std::vector<PlanParams> params_of(const ConstantPlan& plan) {
  std::vector<PlanParams> out;
  out.reserve(plan.levels.size());
  for (const auto& l : plan.levels) out.push_back({l.c, l.p, l.multiplier});
  return out;
}

long double round_mult(long double m) {
  if (m < 1.0L) return 1.0L;
  return m < 0x1p62L ? roundl(m) : m;
}

}  // namespace

ConstantPlan optimize_plan(int K, uint64_t budget, uint64_t seed) {
  ConstantPlan best = paper_plan(K);
  if (budget == 0) return best;

  uint64_t evals = 0;
  auto eval = [&](const std::vector<PlanParams>& cand) -> double {
    ++evals;
    try {
      return make_plan(cand).total;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Rng rng(mix64(seed ^ 0x706c616eull));
  const std::vector<PlanParams> paper = params_of(best);
  std::vector<PlanParams> cur = paper;
  double cur_total = best.total;

  auto consider_best = [&](const std::vector<PlanParams>& cand, double total) {
    if (total < best.total) best = make_plan(cand);
  };

  while (evals < budget) {
    bool improved = false;
    for (size_t lvl = 0; lvl < cur.size() && evals < budget; ++lvl) {
      // candidate moves per coordinate; greedy accept of the best improving one
      std::vector<PlanParams> moves[12];
      int nm = 0;
      for (double dc : {0.5, -0.5, 0.1, -0.1, 0.02, -0.02}) {
        auto cand = cur;
        cand[lvl].c = std::clamp(cand[lvl].c + dc, 1.0, 4.0);
        moves[nm++] = std::move(cand);
      }
      for (double fp : {2.0, 0.5}) {
        auto cand = cur;
        cand[lvl].p = std::max(2.0, cand[lvl].p * fp);
        moves[nm++] = std::move(cand);
      }
      for (double dp : {1.0, -1.0}) {
        auto cand = cur;
        cand[lvl].p = std::max(2.0, cand[lvl].p + dp);
        moves[nm++] = std::move(cand);
      }
      for (long double fm : {2.0L, 0.5L}) {
        auto cand = cur;
        cand[lvl].multiplier = round_mult(cand[lvl].multiplier * fm);
        moves[nm++] = std::move(cand);
      }
      double move_total = cur_total;
      int move_idx = -1;
      for (int i = 0; i < nm && evals < budget; ++i) {
        const double t = eval(moves[i]);
        if (t < move_total) {
          move_total = t;
          move_idx = i;
        }
      }
      if (move_idx >= 0) {
        cur = std::move(moves[move_idx]);
        cur_total = move_total;
        consider_best(cur, cur_total);
        improved = true;
      }
    }
    if (!improved && evals < budget) {
      // random restart: jitter the paper parameters
      std::vector<PlanParams> cand = paper;
      for (auto& pp : cand) {
        pp.c = std::clamp(pp.c * (0.75 + 0.5 * rng.next_unit()), 1.0, 4.0);
        pp.p = std::max(2.0, pp.p * (0.5 + rng.next_unit()));
        pp.multiplier = round_mult(pp.multiplier * exp2l(2.0L * (long double)rng.next_unit() - 1.0L));
      }
      cur_total = eval(cand);
      if (std::isfinite(cur_total)) {
        cur = std::move(cand);
        consider_best(cur, cur_total);
      } else {
        cur = paper;
        cur_total = best.total;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// per-family bound
// ---------------------------------------------------------------------------

FamilyBound family_bound(const ProcessFamily& fam, const ConstantPlan& plan) {
  const auto& var = fam.variance_profile();
  const double v1 = var.back();
  if (!(v1 > 0.0)) fail(Errc::ZeroVariance, "variance profile vanishes at t = 1");

  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t j = 1; j < var.size(); ++j)
    if (var[j] > var[j - 1]) min_gap = std::min(min_gap, var[j] - var[j - 1]);

  FamilyBound fb;
  fb.sigma = std::sqrt(v1);

  // closure: V(1)/N_k below the smallest positive V gap forces
  // a(t) = a(pi_k(t)) at every merged time, so chaining stops at level k.
  auto closed_at = [&](long double l2n) {
    return log2l((long double)v1) - l2n < log2l((long double)min_gap);
  };

  long double raw;
  if (closed_at(0.0L)) {
    fb.closed = true;
    fb.closure_level = 0;
    raw = 0.0L;
  } else {
    long double partial = 0.0L;
    int kstar = -1;
    for (const auto& lvl : plan.levels) {
      partial += (long double)lvl.term;
      if (closed_at(lvl.log2_count)) {
        kstar = lvl.k;
        break;
      }
    }
    if (kstar >= 0) {
      fb.closed = true;
      fb.closure_level = kstar;
      raw = partial;
    } else {
      // not closed within the plan: one sub-gaussian finite-max step covers
      // the remaining increments, all of norm <= sqrt(V(1)/N_K)
      const long double l2nk = plan.levels.back().log2_count;
      const long double residual = exp2l(-l2nk / 2.0L) * sqrtl(2.0L * kLn2 * (1.0L + l2nk));
      fb.residual = double(residual);
      raw = partial + residual;
    }
  }
  raw = std::min(raw, (long double)plan.total);
  fb.bound = double((long double)fb.sigma * raw);
  return fb;
}

}  // namespace bernsup
