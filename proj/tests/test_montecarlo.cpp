#include "bernsup/montecarlo.hpp"

#include "bernsup/oracle.hpp"
#include "bernsup/reports.hpp"
#include "doctest.h"

using namespace bernsup;

namespace {

ProcessFamily two_piece() {
  return ProcessFamily::make({StepFunction::make({{0.0, 1.0}}),
                              StepFunction::make({{0.0, 0.0}, {0.5, 1.0}})});
}

}  // namespace

TEST_CASE("interval contains the exact tail on the two-piece example") {
  auto fam = two_piece();
  const double u[] = {1.0};
  auto rep = estimate_tails(fam, u, 100000, 42);
  // exact P(X >= 1) = 1/2
  CHECK(rep.p_x[0].lo <= 0.5);
  CHECK(rep.p_x[0].hi >= 0.5);
  CHECK(rep.p_x[0].estimate == doctest::Approx(0.5).epsilon(0.02));
  // exact P(Y >= 1) = 1/4
  CHECK(rep.p_y[0].lo <= 0.25);
  CHECK(rep.p_y[0].hi >= 0.25);
  // EX = 1/2
  CHECK(rep.ex.lo <= 0.5);
  CHECK(rep.ex.hi >= 0.5);
}

TEST_CASE("same seed gives bit-identical estimates") {
  auto fam = gen_family(FamilyKind::Random, 12, 3);
  const double u[] = {0.5, 1.0};
  auto a = estimate_tails(fam, u, 20000, 7);
  auto b = estimate_tails(fam, u, 20000, 7);
  CHECK(to_json(a) == to_json(b));
  auto c = estimate_tails(fam, u, 20000, 8);
  CHECK(to_json(a) != to_json(c));
}

TEST_CASE("zero samples is an error") {
  auto fam = two_piece();
  const double u[] = {1.0};
  CHECK_THROWS_AS(estimate_tails(fam, u, 0, 1), Error);
}

TEST_CASE("worker split reproduces the single-stream result exactly") {
  auto fam = gen_family(FamilyKind::Random, 9, 11);
  const double u[] = {0.25, 0.75};
  auto a = estimate_tails(fam, u, 50000, 123, 1);
  auto b = estimate_tails(fam, u, 50000, 123, 4);
  CHECK(to_json(a) == to_json(b));
}

TEST_CASE("wilson interval sanity") {
  auto [lo0, hi0] = wilson95(0, 1000);
  CHECK(lo0 == 0.0);
  CHECK(hi0 > 0.0);
  auto [lon, hin] = wilson95(1000, 1000);
  CHECK(hin == 1.0);
  CHECK(lon < 1.0);
  auto [lo, hi] = wilson95(500, 1000);
  CHECK(lo <= 0.5);
  CHECK(hi >= 0.5);
  CHECK(hi - lo < 0.07);
}

TEST_CASE("coverage over seeded runs (small battery)") {
  auto fam = two_piece();
  const double u[] = {1.0};
  int contained = 0;
  for (uint64_t seed = 0; seed < 30; ++seed) {
    auto rep = estimate_tails(fam, u, 20000, seed);
    if (rep.p_x[0].lo <= 0.5 && 0.5 <= rep.p_x[0].hi) ++contained;
  }
  CHECK(contained >= 24);  // the full 95% battery runs in the acceptance suite
}
