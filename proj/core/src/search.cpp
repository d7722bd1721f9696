#include "bernsup/search.hpp"

#include <algorithm>
#include <cmath>

#include "bernsup/detail/path_enum.hpp"

namespace bernsup {

namespace {

constexpr uint32_t kMaxSearchVars = 20;
constexpr uint64_t kRestartEvery = 200;

struct Counts {
  uint64_t cx = 0, cy = 0;
};

Counts eval_counts(const ProcessFamily& fam, double c) {
  const auto pt = detail::PathTable::build(fam);
  Counts out;
  detail::walk_paths(pt, 0, 1ull << fam.n(), [&](uint64_t, double sup, size_t, double y) {
    if (sup >= c) ++out.cx;
    if (y >= 1.0) ++out.cy;
  });
  return out;
}

// a strictly better ratio, compared on exact counts
bool better(const Counts& a, const Counts& b) {
  if (b.cy == 0) return a.cy > 0;
  if (a.cy == 0) return false;
  return (unsigned __int128)a.cx * b.cy > (unsigned __int128)b.cx * a.cy;
}

// project a candidate onto the admissible set: pointwise order statistics for
// the ordering condition, then a minimal rescale (with grid headroom) for the
// mass condition
std::optional<ProcessFamily> project_admissible(const ProcessFamily& fam) {
  ProcessFamily sorted = pointwise_sorted(fam);
  double total = 0.0;
  for (double w : sorted.terminal()) total += w;
  const double top = sorted.terminal().front();
  const double denom = total - 2.0 * top;
  if (denom <= 1.0 / 1024.0) return std::nullopt;
  if (total - 1.0 - 2.0 * top < 0.0) {
    const double lambda = (1.0 + 1.0 / 1024.0) / denom;
    std::vector<StepFunction> fns;
    fns.reserve(sorted.n());
    for (const auto& f : sorted.functions()) {
      std::vector<Breakpoint> pts(f.breakpoints().begin(), f.breakpoints().end());
      for (auto& b : pts) b.v = snap_dyadic_up(b.v * lambda);
      fns.push_back(StepFunction::make(std::move(pts)));
    }
    sorted = ProcessFamily::make(std::move(fns));
  }
  const auto rep = admissibility_check(sorted);
  if (!rep.all() || !(sorted.terminal_variance() > 0.0)) return std::nullopt;
  return sorted;
}

// jitter one breakpoint time or value of one function, or rescale everything
std::optional<ProcessFamily> perturb(const ProcessFamily& fam, Rng& rng) {
  const uint32_t fi = uint32_t(rng.next_below(fam.n()));
  std::vector<StepFunction> fns(fam.functions().begin(), fam.functions().end());
  std::vector<Breakpoint> pts(fns[fi].breakpoints().begin(), fns[fi].breakpoints().end());
  const uint64_t move = rng.next_below(5);

  try {
    switch (move) {
      case 0: {  // scale one value, clamped to keep the function monotone
        const size_t j = rng.next_below(pts.size());
        const double factor = 0.75 + 0.5 * rng.next_unit();
        double v = snap_dyadic(pts[j].v * factor);
        const double lo = j > 0 ? pts[j - 1].v : 0.0;
        const double hi = j + 1 < pts.size() ? pts[j + 1].v : std::numeric_limits<double>::infinity();
        pts[j].v = std::clamp(v, lo, hi);
        break;
      }
      case 1: {  // move one jump time within its gap
        if (pts.size() < 2) return std::nullopt;
        const size_t j = 1 + rng.next_below(pts.size() - 1);
        const double lo = pts[j - 1].t;
        const double hi = j + 1 < pts.size() ? pts[j + 1].t : 1.0;
        const double t = snap_dyadic(lo + (hi - lo) * rng.next_unit());
        if (t <= lo || t >= hi) return std::nullopt;
        pts[j].t = t;
        break;
      }
      case 2: {  // add a breakpoint
        const size_t j = rng.next_below(pts.size());
        const double lo = pts[j].t;
        const double hi = j + 1 < pts.size() ? pts[j + 1].t : 1.0;
        const double t = snap_dyadic(lo + (hi - lo) * rng.next_unit());
        if (t <= lo || t >= hi) return std::nullopt;
        const double vhi = j + 1 < pts.size() ? pts[j + 1].v : pts[j].v + rng.next_dyadic(10, true);
        const double v = snap_dyadic(pts[j].v + (vhi - pts[j].v) * rng.next_unit());
        pts.insert(pts.begin() + j + 1, {t, std::clamp(v, pts[j].v, vhi)});
        break;
      }
      case 3: {  // drop a breakpoint
        if (pts.size() < 2) return std::nullopt;
        pts.erase(pts.begin() + 1 + rng.next_below(pts.size() - 1));
        break;
      }
      case 4: {  // rescale the whole function
        const double factor = 0.75 + 0.5 * rng.next_unit();
        for (auto& b : pts) b.v = snap_dyadic(b.v * factor);
        break;
      }
    }
    fns[fi] = StepFunction::make(std::move(pts));
    return project_admissible(ProcessFamily::make(std::move(fns)));
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<ProcessFamily> random_admissible(uint32_t n, Rng& rng) {
  try {
    return gen_family(FamilyKind::Szatzschneider, n, rng.next_u64());
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

SearchState search_ratio(uint32_t n, double c, uint64_t budget, uint64_t seed,
                         const std::optional<ProcessFamily>& init) {
  if (n < 3) fail(Errc::InfeasibleDimension, "admissible families need n >= 3");
  if (n > kMaxSearchVars) fail(Errc::TooManyVariables, "search is capped at n <= 20");

  Rng rng(mix64(seed ^ 0x73656172ull));
  ProcessFamily incumbent = init ? *init : gen_family(FamilyKind::Szatzschneider, n, rng.next_u64());
  if (init) {
    if (incumbent.n() != n) fail(Errc::DimensionMismatch, "initial family has wrong n");
    const auto rep = admissibility_check(incumbent);
    if (!rep.all()) fail(Errc::InvalidParams, "initial family is not admissible");
  }
  Counts best = eval_counts(incumbent, c);

  SearchState st;
  st.c = c;
  st.budget = budget;
  st.seed = seed;

  uint64_t evals = 0;
  while (evals < budget) {
    std::optional<ProcessFamily> cand;
    if (evals > 0 && evals % kRestartEvery == 0)
      cand = random_admissible(n, rng);
    else
      cand = perturb(incumbent, rng);
    if (!cand) {
      cand = random_admissible(n, rng);
      if (!cand) break;
    }
    const Counts cc = eval_counts(*cand, c);
    ++evals;
    if (better(cc, best)) {
      best = cc;
      incumbent = std::move(*cand);
    }
  }

  st.evaluations = evals;
  st.count_x = best.cx;
  st.count_y = best.cy;
  st.ratio = best.cy > 0 ? double(best.cx) / double(best.cy) : 0.0;
  st.family_digest = incumbent.digest();
  st.counterexample_candidate = n >= 5 && best.cy > 0 && best.cx > 2 * best.cy;
  st.incumbent = std::move(incumbent);
  return st;
}

std::vector<SharpnessRow> sharpness_table(std::span<const uint32_t> ns, double c, uint64_t budget,
                                          uint64_t seed) {
  std::vector<SharpnessRow> rows;
  rows.reserve(ns.size());
  for (uint32_t n : ns) {
    const auto st = search_ratio(n, c, budget, mix64(seed ^ (0x9e37ull + n)));
    rows.push_back({n, st.ratio, st.family_digest, st.counterexample_candidate, st.evaluations});
  }
  return rows;
}

}  // namespace bernsup
