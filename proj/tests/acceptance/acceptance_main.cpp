// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "bernsup/chaining.hpp"
#include "bernsup/inequalities.hpp"
#include "bernsup/montecarlo.hpp"
#include "bernsup/oracle.hpp"
#include "bernsup/reports.hpp"
#include "bernsup/search.hpp"
#include "cli.hpp"

using namespace bernsup;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

// 1. Constant table reproduction, runtime < 1 s.
Criterion criterion1() {
  Criterion c;
  const auto t0 = Clock::now();
  const auto sza = derive_constants(ConstantPreset::Sza8_53, 4.45);
  c.require(sza.multiplier == 8.0, "sza8_53 multiplier != 8.0 exactly");
  c.require(sza.tail_constant >= 52.5 && sza.tail_constant <= 53.0,
            "sza8_53 tail constant outside [52.5, 53.0]");
  const auto bt = derive_constants(ConstantPreset::Bt16, 4.45);
  c.require(std::fabs(bt.multiplier - 14.6) <= 0.05, "bt_16 multiplier not within 0.05 of 14.6");
  const auto six = derive_constants(ConstantPreset::Six430, 4.45);
  c.require(six.tail_constant <= 435.0, "six_430 tail constant > 435");
  const double dt = seconds_since(t0);
  c.require(dt < 1.0, "runtime >= 1 s");
  char buf[160];
  std::snprintf(buf, sizeof buf,
                " [8.0/%.4g, %.4g/16, 6/%.4g, %.3fs]", sza.tail_constant, bt.multiplier,
                six.tail_constant, dt);
  c.detail += buf;
  return c;
}

// 2. Chaining pipeline, runtime < 30 s.
Criterion criterion2() {
  Criterion c;
  const auto t0 = Clock::now();
  const auto paper = paper_plan(12);
  c.require(paper.levels[0].count == 15, "N_1 != 15");
  c.require(paper.levels[1].count == 240, "N_2 != 240");
  c.require(paper.tail_bound < 1e-9, "tail bound at K=12 >= 1e-9");
  const auto opt = optimize_plan(12, 10000, 20250801);
  c.require(opt.total <= paper.total, "optimized total exceeds the paper-plan total");
  const double dt = seconds_since(t0);
  c.require(dt < 30.0, "runtime >= 30 s");
  char buf[200];
  std::snprintf(buf, sizeof buf, " [paper total %.6g (claim 4.45 met: %s), optimized %.6g, %.1fs]",
                paper.total, paper.paper_claim_met ? "yes" : "no", opt.total, dt);
  c.detail += buf;
  return c;
}

// 3. Theorem-backed zero-violation suites over 1000 random inputs, < 3 min.
Criterion criterion3() {
  Criterion c;
  const auto t0 = Clock::now();
  const auto rep = run_random_suite(1000, 2, 14, 424242, Mode::Exact);
  c.require(rep.summary.failed == 0, "theorem-backed failures in the random battery");
  const double dt = seconds_since(t0);
  c.require(dt < 180.0, "runtime >= 3 min");
  char buf[160];
  std::snprintf(buf, sizeof buf, " [%zu checks, %zu passed, %zu failed, %zu skipped, %.1fs]",
                rep.summary.total, rep.summary.passed, rep.summary.failed,
                rep.summary.skipped_hypothesis, dt);
  c.detail += buf;
  return c;
}

// 4. Theorem suite: 500 admissible families with n in [5,14], 10-point u grid.
Criterion criterion4() {
  Criterion c;
  Rng rng(515151);
  size_t checks = 0, failures = 0;
  for (int i = 0; i < 500; ++i) {
    const uint32_t n = 5 + uint32_t(rng.next_below(10));
    const auto fam = gen_family(FamilyKind::Szatzschneider, n, rng.next_u64());
    const auto ft = FamilyTails::build(fam, Mode::Exact);
    for (double u : default_threshold_grid(ft.y_max(), 10)) {
      const auto r = check_sza(ft, u);
      ++checks;
      if (r.hypothesis_violated || !r.holds) ++failures;
    }
  }
  c.require(failures == 0, "P(X >= 8u) <= 53 P(Y >= u) failed");
  char buf[96];
  std::snprintf(buf, sizeof buf, " [%zu checks, %zu failures]", checks, failures);
  c.detail += buf;
  return c;
}

// 5. Original-conjecture regression for n in {3,4}.
Criterion criterion5() {
  Criterion c;
  Rng rng(616161);
  size_t failures = 0;
  for (int i = 0; i < 500; ++i) {
    const uint32_t n = 3 + uint32_t(rng.next_below(2));
    const auto fam = gen_family(FamilyKind::Szatzschneider, n, rng.next_u64());
    const auto ft = FamilyTails::build(fam, Mode::Exact);
    const uint64_t cx = ft.count_sup_geq(1.0);
    const uint64_t cy = ft.count_term_geq(1.0);
    if (cy == 0 || cx > 2 * cy) ++failures;
  }
  c.require(failures == 0, "P(X >= 1) <= 2 P(Y >= 1) failed for n in {3,4}");
  char buf[64];
  std::snprintf(buf, sizeof buf, " [500 families, %zu failures]", failures);
  c.detail += buf;
  return c;
}

// 6. Chaining bound validity on 200 families with n <= 12.
Criterion criterion6() {
  Criterion c;
  const auto plan = paper_plan(8);
  Rng rng(717171);
  size_t below = 0, above = 0;
  for (int i = 0; i < 200; ++i) {
    const uint32_t n = 2 + uint32_t(rng.next_below(11));
    const auto fam = gen_family(FamilyKind::Random, n, rng.next_u64());
    const auto fb = family_bound(fam, plan);
    const auto rep = enumerate_exact(fam, {}, {});
    if (fb.bound < rep.ex) ++below;
    if (fb.bound > plan.total * fb.sigma + 1e-12) ++above;
  }
  c.require(below == 0, "family_bound fell below the exact EX");
  c.require(above == 0, "family_bound exceeded total * ||a(1)||");
  char buf[96];
  std::snprintf(buf, sizeof buf, " [200 families, %zu below EX, %zu above cap]", below, above);
  c.detail += buf;
  return c;
}

// 7. Oracle / Monte-Carlo agreement: >= 93 of 100 intervals contain the truth.
Criterion criterion7() {
  Criterion c;
  Rng rng(818181);
  int contained = 0, pairs = 0;
  while (pairs < 100) {
    const uint32_t n = 6 + uint32_t(rng.next_below(9));
    const uint64_t fam_seed = rng.next_u64();
    const auto fam = gen_family(FamilyKind::Random, n, fam_seed);
    const auto ft = FamilyTails::build(fam, Mode::Exact);
    // pick the first grid threshold whose exact tail lies in [0.05, 0.95]
    double u = 0.0;
    double exact = -1.0;
    for (double cand : default_threshold_grid(ft.y_max(), 16)) {
      const double p = ft.p_x(cand);
      if (p >= 0.05 && p <= 0.95) {
        u = cand;
        exact = p;
        break;
      }
    }
    if (exact < 0.0) continue;
    ++pairs;
    const double thresholds[] = {u};
    const auto mc = estimate_tails(fam, thresholds, 100000, rng.next_u64());
    if (mc.p_x[0].lo <= exact && exact <= mc.p_x[0].hi) ++contained;
  }
  c.require(contained >= 93, "fewer than 93 of 100 intervals contained the exact tail");
  char buf[64];
  std::snprintf(buf, sizeof buf, " [%d/100 contained]", contained);
  c.detail += buf;
  return c;
}

// 8. Determinism: byte-identical reports for identical seeds.
Criterion criterion8() {
  Criterion c;
  auto run_once = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    bernsup::cli::run(args, out, err);
    return out.str();
  };
  const std::vector<std::vector<std::string>> cmds = {
      {"reproduce", "--budget", "2000", "--seed", "31", "--levels", "8"},
      {"verify", "--count", "20", "--seed", "33"},
      {"search", "--n", "3,4,5", "--budget", "200", "--seed", "35"},
  };
  const char* names[] = {"reproduce", "verify", "search"};
  for (size_t i = 0; i < cmds.size(); ++i) {
    const auto a = run_once(cmds[i]);
    const auto b = run_once(cmds[i]);
    c.require(!a.empty() && a == b, std::string(names[i]) + " reports differ across runs");
  }
  c.detail += " [reproduce/verify/search byte-identical]";
  return c;
}

}  // namespace

int main() {
  int failed = 0;
  const struct {
    const char* name;
    Criterion (*fn)();
  } criteria[] = {
      {"1 constant table reproduction", criterion1},
      {"2 chaining pipeline", criterion2},
      {"3 theorem-backed zero-violation suites", criterion3},
      {"4 tail domination 8/53 suite", criterion4},
      {"5 original-conjecture regression n=3,4", criterion5},
      {"6 chaining bound validity", criterion6},
      {"7 oracle/Monte-Carlo agreement", criterion7},
      {"8 determinism", criterion8},
  };
  for (const auto& entry : criteria) {
    const auto c = entry.fn();
    std::printf("%s criterion %s:%s\n", c.pass ? "PASS" : "FAIL", entry.name, c.detail.c_str());
    std::fflush(stdout);
    if (!c.pass) ++failed;
  }
  return failed;
}
