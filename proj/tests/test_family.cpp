#include "bernsup/family.hpp"

#include <functional>

#include "doctest.h"

using namespace bernsup;

namespace {

ProcessFamily two_piece() {
  // a1 constant 1, a2 = 1_{[0.5,1]}
  return ProcessFamily::make({StepFunction::make({{0.0, 1.0}}),
                              StepFunction::make({{0.0, 0.0}, {0.5, 1.0}})});
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::BadFile;
}

}  // namespace

TEST_CASE("make_step accepts the two-piece indicator") {
  auto f = StepFunction::make({{0.0, 0.0}, {0.5, 1.0}});
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.49) == 0.0);
  CHECK(f(0.5) == 1.0);  // right-continuity
  CHECK(f(1.0) == 1.0);
}

TEST_CASE("make_step accepts a constant function") {
  auto f = StepFunction::make({{0.0, 1.0}});
  CHECK(f(0.0) == 1.0);
  CHECK(f(1.0) == 1.0);
}

TEST_CASE("make_step rejects bad inputs with specific codes") {
  CHECK(code_of([] { StepFunction::make({{0.0, 1.0}, {0.5, 0.5}}); }) == Errc::NonMonotoneValues);
  CHECK(code_of([] { StepFunction::make({{0.1, 1.0}}); }) == Errc::MissingTimeZero);
  CHECK(code_of([] { StepFunction::make({}); }) == Errc::MissingTimeZero);
  CHECK(code_of([] { StepFunction::make({{0.0, 1.0}, {0.5, 2.0}, {0.5, 3.0}}); }) ==
        Errc::UnsortedTimes);
  CHECK(code_of([] { StepFunction::make({{0.0, -1.0}}); }) == Errc::NegativeValue);
  CHECK(code_of([] { StepFunction::make({{0.0, 0.0}, {1.5, 1.0}}); }) == Errc::TimeOutOfRange);
}

TEST_CASE("eval_at rejects out-of-range times") {
  auto f = StepFunction::make({{0.0, 1.0}});
  CHECK(code_of([&] { f(1.5); }) == Errc::TimeOutOfRange);
  CHECK(code_of([&] { f(-0.1); }) == Errc::TimeOutOfRange);
}

TEST_CASE("merged_times unions breakpoints with the endpoints") {
  auto fam = ProcessFamily::make({StepFunction::make({{0.0, 0.0}, {0.5, 1.0}}),
                                  StepFunction::make({{0.0, 0.0}, {0.3, 2.0}})});
  CHECK(fam.merged_times() == std::vector<double>{0.0, 0.3, 0.5, 1.0});

  auto single = ProcessFamily::make({StepFunction::make({{0.0, 1.0}})});
  CHECK(single.merged_times() == std::vector<double>{0.0, 1.0});

  // duplicate times across functions are deduplicated
  auto dup = ProcessFamily::make({StepFunction::make({{0.0, 0.0}, {0.5, 1.0}}),
                                  StepFunction::make({{0.0, 0.0}, {0.5, 2.0}})});
  CHECK(dup.merged_times() == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("variance profile of the two-piece example") {
  auto fam = two_piece();
  CHECK(fam.terminal() == std::vector<double>{1.0, 1.0});
  CHECK(fam.variance_profile() == std::vector<double>{1.0, 2.0, 2.0});
  CHECK(fam.terminal_variance() == 2.0);
}

TEST_CASE("gen indicator with explicit weights and jumps") {
  GenParams p;
  p.weights = std::vector<double>{1.0, 1.0};
  p.jumps = std::vector<double>{0.0, 0.5};
  auto fam = gen_family(FamilyKind::Indicator, 2, 1, p);
  CHECK(fam.merged_times() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(fam.function(0)(0.0) == 1.0);
  CHECK(fam.function(1)(0.49) == 0.0);
  CHECK(fam.function(1)(0.5) == 1.0);
}

TEST_CASE("gen szatzschneider all-equal 0.5 is admissible with slack 0.5") {
  GenParams p;
  p.weights = std::vector<double>(5, 0.5);
  auto fam = gen_family(FamilyKind::Szatzschneider, 5, 1, p);
  auto rep = admissibility_check(fam);
  CHECK(rep.all());
  CHECK(rep.mass_slack == doctest::Approx(0.5));
}

TEST_CASE("szatzschneider needs n >= 3") {
  CHECK(code_of([] { gen_family(FamilyKind::Szatzschneider, 2, 1); }) == Errc::InvalidParams);
}

TEST_CASE("ordered_alpha factors are ordered at every merged time") {
  for (uint64_t seed : {3u, 17u, 99u}) {
    auto fam = gen_family(FamilyKind::OrderedAlpha, 3, seed);
    const auto& w = fam.terminal();
    for (double t : fam.merged_times()) {
      auto vals = fam.values_at(t);
      for (uint32_t i = 0; i + 1 < fam.n(); ++i) {
        // alpha_i >= alpha_{i+1}, cross-multiplied
        CHECK(vals[i] * w[i + 1] >= vals[i + 1] * w[i]);
        CHECK(vals[i] <= w[i]);  // alpha <= 1
      }
    }
  }
}

TEST_CASE("generated families have monotone variance profiles") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    auto fam = gen_family(FamilyKind::Random, 2 + uint32_t(seed % 7), seed);
    const auto& v = fam.variance_profile();
    for (size_t j = 1; j < v.size(); ++j) CHECK(v[j] >= v[j - 1]);
    CHECK(v.back() == fam.terminal_variance());
    for (double x : v) CHECK(x <= fam.terminal_variance());
    CHECK(fam.dyadic_values());
  }
}

TEST_CASE("paths are constant between consecutive merged times") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto fam = gen_family(FamilyKind::Random, 3, seed);
    const auto& times = fam.merged_times();
    for (size_t j = 0; j + 1 < times.size(); ++j) {
      const double mid = 0.5 * (times[j] + times[j + 1]);
      auto at_left = fam.values_at(times[j]);
      auto at_mid = fam.values_at(mid);
      CHECK(at_left == at_mid);
    }
  }
}

TEST_CASE("gen_family is a pure function of its arguments") {
  for (auto kind : {FamilyKind::Random, FamilyKind::OrderedAlpha, FamilyKind::Indicator,
                    FamilyKind::Szatzschneider}) {
    auto a = gen_family(kind, 4, 42);
    auto b = gen_family(kind, 4, 42);
    CHECK(a.digest() == b.digest());
    auto c = gen_family(kind, 4, 43);
    CHECK(a.digest() != c.digest());
  }
}

TEST_CASE("admissibility detects ordering violations and boundary mass") {
  // a2(0.3) > a1(0.3)
  auto fam = ProcessFamily::make({StepFunction::make({{0.0, 0.0}, {0.6, 1.0}}),
                                  StepFunction::make({{0.0, 0.0}, {0.3, 0.5}, {0.6, 1.0}})});
  auto rep = admissibility_check(fam);
  CHECK_FALSE(rep.ordering);
  CHECK(rep.ordering_slack < 0.0);

  // boundary: sum = 1 + 2 a_1(1) exactly
  GenParams p;
  p.weights = std::vector<double>{1.0, 1.0, 1.0};  // 3 = 1 + 2*1
  auto boundary = gen_family(FamilyKind::Szatzschneider, 3, 1, p);
  auto brep = admissibility_check(boundary);
  CHECK(brep.mass);
  CHECK(brep.mass_slack == 0.0);
}

TEST_CASE("pointwise_sorted restores the ordering") {
  auto fam = ProcessFamily::make({StepFunction::make({{0.0, 0.6}}),
                                  StepFunction::make({{0.0, 0.0}, {0.3, 0.7}})});
  auto sorted = pointwise_sorted(fam);
  CHECK(admissibility_check(sorted).ordering);
  // column sums preserved
  for (double t : fam.merged_times()) {
    double s0 = 0, s1 = 0;
    for (uint32_t i = 0; i < fam.n(); ++i) {
      s0 += fam.function(i)(t);
      s1 += sorted.function(i)(t);
    }
    CHECK(s0 == doctest::Approx(s1));
  }
}

TEST_CASE("sign vector round-trip") {
  for (uint32_t n : {1u, 7u, 30u, 64u}) {
    Rng rng(n);
    for (int i = 0; i < 50; ++i) {
      const uint64_t bits = n == 64 ? rng.next_u64() : rng.next_below(1ull << n);
      auto sv = SignVector::from_bits(n, bits);
      CHECK(sv.bits == bits);
      uint64_t re = 0;
      for (uint32_t j = 0; j < n; ++j)
        if (sv.sign(j) > 0) re |= 1ull << j;
      CHECK(re == bits);
    }
  }
  CHECK_THROWS_AS(SignVector::from_bits(3, 8), Error);
}

TEST_CASE("family JSON round-trip and exact-mode validation") {
  auto fam = two_piece();
  auto text = family_to_json(fam);
  auto back = family_from_json(text, Mode::Exact);
  CHECK(back.digest() == fam.digest());

  const std::string bad = R"({"n":1,"functions":[[{"t":0.0,"v":0.3}]]})";
  CHECK_THROWS_AS(family_from_json(bad, Mode::Exact), Error);
  CHECK_NOTHROW(family_from_json(bad, Mode::Float));
  CHECK_THROWS_AS(family_from_json("not json", Mode::Float), Error);
  CHECK_THROWS_AS(family_from_json(R"({"n":2,"functions":[[{"t":0,"v":1}]]})", Mode::Float), Error);
}
