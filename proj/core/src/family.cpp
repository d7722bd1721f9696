#include "bernsup/family.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bernsup {

SignVector SignVector::from_bits(uint32_t n, uint64_t bits) {
  if (n == 0 || n > 64) fail(Errc::InvalidParams, "sign vector width must be in [1,64]");
  if (n < 64 && (bits >> n) != 0) fail(Errc::InvalidParams, "sign bits beyond vector width");
  return SignVector{n, bits};
}

ProcessFamily ProcessFamily::make(std::vector<StepFunction> functions) {
  if (functions.empty()) fail(Errc::InvalidParams, "family needs at least one function");
  ProcessFamily fam;
  fam.fns_ = std::move(functions);

  std::set<double> times{0.0, 1.0};
  for (const auto& f : fam.fns_)
    for (const auto& b : f.breakpoints()) times.insert(b.t);
  fam.merged_.assign(times.begin(), times.end());

  fam.terminal_.reserve(fam.fns_.size());
  for (const auto& f : fam.fns_) fam.terminal_.push_back(f.terminal());

  fam.variance_.reserve(fam.merged_.size());
  for (double t : fam.merged_) {
    double v = 0.0;
    for (const auto& f : fam.fns_) {
      const double a = f(t);
      v += a * a;
    }
    fam.variance_.push_back(v);
  }
  return fam;
}

std::vector<double> ProcessFamily::values_at(double t) const {
  std::vector<double> out;
  out.reserve(fns_.size());
  for (const auto& f : fns_) out.push_back(f(t));
  return out;
}

double ProcessFamily::terminal_norm() const { return std::sqrt(variance_.back()); }

bool ProcessFamily::dyadic_values() const {
  return std::all_of(fns_.begin(), fns_.end(),
                     [](const StepFunction& f) { return f.dyadic_values(); });
}

std::string ProcessFamily::digest() const {
  Digest d;
  d.add_u64(n());
  for (const auto& f : fns_) {
    d.add_u64(f.size());
    for (const auto& b : f.breakpoints()) {
      d.add_double(b.t);
      d.add_double(b.v);
    }
  }
  return d.hex();
}

std::vector<double> merged_times(const ProcessFamily& fam) { return fam.merged_times(); }

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

FamilyKind parse_family_kind(std::string_view s) {
  if (s == "ordered_alpha") return FamilyKind::OrderedAlpha;
  if (s == "indicator") return FamilyKind::Indicator;
  if (s == "random") return FamilyKind::Random;
  if (s == "szatzschneider") return FamilyKind::Szatzschneider;
  fail(Errc::InvalidParams, "unknown family kind '" + std::string(s) + "'");
}

const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::OrderedAlpha: return "ordered_alpha";
    case FamilyKind::Indicator: return "indicator";
    case FamilyKind::Random: return "random";
    case FamilyKind::Szatzschneider: return "szatzschneider";
  }
  return "?";
}

namespace {

// Value increments use a coarser grid (2^-10) than times so that products of
// a weight and an alpha factor stay on the 2^-20 grid.
constexpr int kValueBits = 10;

std::vector<double> random_times(Rng& rng, int max_breakpoints) {
  const int k = 1 + int(rng.next_below(uint64_t(max_breakpoints)));
  std::set<double> times{0.0};
  for (int j = 1; j < k; ++j) times.insert(rng.next_dyadic(kDyadicBits, true));
  return {times.begin(), times.end()};
}

StepFunction random_step(Rng& rng, const GenParams& p) {
  auto times = random_times(rng, p.max_breakpoints);
  std::vector<Breakpoint> pts;
  pts.reserve(times.size());
  double v = rng.next_below(2) ? 0.0 : rng.next_dyadic(kValueBits, true);
  for (size_t j = 0; j < times.size(); ++j) {
    if (j > 0) v += rng.next_dyadic(kValueBits, true);
    pts.push_back({times[j], v});
  }
  return StepFunction::make(std::move(pts));
}

StepFunction constant_step(double v) { return StepFunction::make({{0.0, v}}); }

StepFunction indicator_step(double jump, double weight) {
  if (jump == 0.0) return constant_step(weight);
  return StepFunction::make({{0.0, 0.0}, {jump, weight}});
}

// Rebuild a step function from its values on a merged time grid.
StepFunction compress(const std::vector<double>& times, const std::vector<double>& values) {
  std::vector<Breakpoint> pts{{0.0, values[0]}};
  for (size_t j = 1; j < times.size(); ++j)
    if (values[j] != values[j - 1]) pts.push_back({times[j], values[j]});
  return StepFunction::make(std::move(pts));
}

ProcessFamily scale_values(const ProcessFamily& fam, double factor, bool round_up) {
  std::vector<StepFunction> out;
  out.reserve(fam.n());
  for (const auto& f : fam.functions()) {
    std::vector<Breakpoint> pts(f.breakpoints().begin(), f.breakpoints().end());
    for (auto& b : pts) b.v = round_up ? snap_dyadic_up(b.v * factor) : snap_dyadic(b.v * factor);
    out.push_back(StepFunction::make(std::move(pts)));
  }
  return ProcessFamily::make(std::move(out));
}

ProcessFamily gen_indicator(Rng& rng, uint32_t n, const GenParams& p) {
  std::vector<double> weights;
  if (p.weights) {
    weights = *p.weights;
    if (weights.size() != n) fail(Errc::InvalidParams, "weights size != n");
    for (double w : weights)
      if (!(w >= 0.0) || !std::isfinite(w)) fail(Errc::InvalidParams, "weights must be finite and >= 0");
  } else {
    for (uint32_t i = 0; i < n; ++i) weights.push_back(rng.next_dyadic(kValueBits, true));
  }
  std::vector<double> jumps;
  if (p.jumps) {
    jumps = *p.jumps;
    if (jumps.size() != n) fail(Errc::InvalidParams, "jumps size != n");
    for (double t : jumps)
      if (!(t >= 0.0 && t <= 1.0)) fail(Errc::InvalidParams, "jump times must lie in [0,1]");
  } else {
    const uint64_t den = 1ull << kDyadicBits;
    for (uint32_t i = 0; i < n; ++i)
      jumps.push_back(rng.next_below(2) ? double(rng.next_below(den)) / double(den) : 0.0);
  }
  std::sort(jumps.begin(), jumps.end());
  std::vector<StepFunction> fns;
  fns.reserve(n);
  for (uint32_t i = 0; i < n; ++i) fns.push_back(indicator_step(jumps[i], weights[i]));
  return ProcessFamily::make(std::move(fns));
}

ProcessFamily gen_ordered_alpha(Rng& rng, uint32_t n, const GenParams& p) {
  // weights a_i(1), then ordered factor functions alpha_(1) >= ... >= alpha_(n)
  // obtained as pointwise order statistics of independent nondecreasing factor
  // draws, each ending at 1.
  std::vector<double> weights;
  for (uint32_t i = 0; i < n; ++i) weights.push_back(rng.next_dyadic(kValueBits, true));

  std::vector<StepFunction> alphas;
  alphas.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    auto times = random_times(rng, p.max_breakpoints);
    std::vector<double> vals;
    for (size_t j = 0; j < times.size(); ++j)
      vals.push_back(double(rng.next_below((1ull << kValueBits) + 1)) / double(1ull << kValueBits));
    std::sort(vals.begin(), vals.end());
    vals.back() = 1.0;
    std::vector<Breakpoint> pts;
    for (size_t j = 0; j < times.size(); ++j) pts.push_back({times[j], vals[j]});
    alphas.push_back(StepFunction::make(std::move(pts)));
  }
  ProcessFamily alpha_fam = pointwise_sorted(ProcessFamily::make(std::move(alphas)));

  const auto& grid = alpha_fam.merged_times();
  std::vector<StepFunction> fns;
  fns.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (double t : grid) vals.push_back(weights[i] * alpha_fam.function(i)(t));
    fns.push_back(compress(grid, vals));
  }
  return ProcessFamily::make(std::move(fns));
}

ProcessFamily gen_random(Rng& rng, uint32_t n, const GenParams& p) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng sub = rng.fork(0x72616e64 + uint64_t(attempt));
    std::vector<StepFunction> fns;
    fns.reserve(n);
    for (uint32_t i = 0; i < n; ++i) fns.push_back(random_step(sub, p));
    ProcessFamily fam = ProcessFamily::make(std::move(fns));
    if (fam.terminal_variance() <= 0.0) continue;
    if (p.normalize) {
      double total = 0.0;
      for (double w : fam.terminal()) total += w;
      fam = scale_values(fam, 1.0 / total, false);
      if (fam.terminal_variance() <= 0.0) continue;
    }
    return fam;
  }
  fail(Errc::InvalidParams, "could not generate a nonzero random family");
}

ProcessFamily gen_szatzschneider(Rng& rng, uint32_t n, const GenParams& p) {
  if (n < 3) fail(Errc::InvalidParams, "szatzschneider kind requires n >= 3");
  if (p.weights) {
    std::vector<double> w = *p.weights;
    if (w.size() != n) fail(Errc::InvalidParams, "weights size != n");
    std::sort(w.begin(), w.end(), std::greater<>());
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0)) fail(Errc::InvalidParams, "weights must be >= 0");
      total += x;
    }
    if (total < 1.0 + 2.0 * w.front())
      fail(Errc::InvalidParams, "mass condition fails for the given weights");
    std::vector<StepFunction> fns;
    for (double x : w) fns.push_back(constant_step(x));
    return ProcessFamily::make(std::move(fns));
  }

  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng sub = rng.fork(0x737a61 + uint64_t(attempt));
    std::vector<StepFunction> fns;
    fns.reserve(n);
    for (uint32_t i = 0; i < n; ++i) fns.push_back(random_step(sub, p));
    ProcessFamily fam = pointwise_sorted(ProcessFamily::make(std::move(fns)));

    double total = 0.0;
    for (double w : fam.terminal()) total += w;
    const double top = fam.terminal().front();
    const double denom = total - 2.0 * top;
    if (denom <= 1.0 / 1024.0) continue;
    if (total - 1.0 - 2.0 * top < 0.0) {
      // minimal rescale restoring the mass condition, with headroom so the
      // grid snap cannot push it back below the boundary
      const double lambda = (1.0 + 1.0 / 1024.0) / denom;
      fam = scale_values(fam, lambda, true);
    }
    auto rep = admissibility_check(fam);
    if (rep.all() && fam.terminal_variance() > 0.0) return fam;
  }
  fail(Errc::InvalidParams, "could not generate an admissible family");
}

}  // namespace

ProcessFamily gen_family(FamilyKind kind, uint32_t n, uint64_t seed, const GenParams& params) {
  if (n < 1) fail(Errc::InvalidParams, "n must be >= 1");
  if (params.max_breakpoints < 1) fail(Errc::InvalidParams, "max_breakpoints must be >= 1");
  Rng rng(mix64(seed ^ (0x66616d00ull + uint64_t(kind))));
  switch (kind) {
    case FamilyKind::Indicator: return gen_indicator(rng, n, params);
    case FamilyKind::OrderedAlpha: return gen_ordered_alpha(rng, n, params);
    case FamilyKind::Random: return gen_random(rng, n, params);
    case FamilyKind::Szatzschneider: return gen_szatzschneider(rng, n, params);
  }
  fail(Errc::InvalidParams, "unknown kind");
}

// ---------------------------------------------------------------------------

AdmissibilityReport admissibility_check(const ProcessFamily& fam) {
  AdmissibilityReport rep;
  rep.monotone = true;
  for (const auto& f : fam.functions()) {
    const auto bp = f.breakpoints();
    for (size_t j = 1; j < bp.size(); ++j)
      if (bp[j].v < bp[j - 1].v) rep.monotone = false;
  }
  rep.right_continuous = true;  // enforced by the step representation

  rep.ordering = true;
  double slack = std::numeric_limits<double>::infinity();
  if (fam.n() == 1) slack = 0.0;
  for (double t : fam.merged_times()) {
    auto vals = fam.values_at(t);
    for (uint32_t i = 0; i + 1 < fam.n(); ++i) {
      const double d = vals[i] - vals[i + 1];
      slack = std::min(slack, d);
      if (d < 0.0) rep.ordering = false;
    }
  }
  rep.ordering_slack = slack;

  double total = 0.0;
  for (double w : fam.terminal()) total += w;
  rep.mass_slack = total - 1.0 - 2.0 * fam.terminal().front();
  rep.mass = rep.mass_slack >= 0.0;
  return rep;
}

ProcessFamily pointwise_sorted(const ProcessFamily& fam) {
  const auto& grid = fam.merged_times();
  const uint32_t n = fam.n();
  std::vector<std::vector<double>> cols(grid.size());
  for (size_t j = 0; j < grid.size(); ++j) {
    cols[j] = fam.values_at(grid[j]);
    std::sort(cols[j].begin(), cols[j].end(), std::greater<>());
  }
  std::vector<StepFunction> fns;
  fns.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<double> vals(grid.size());
    for (size_t j = 0; j < grid.size(); ++j) vals[j] = cols[j][i];
    fns.push_back(compress(grid, vals));
  }
  return ProcessFamily::make(std::move(fns));
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

ProcessFamily family_from_json(const std::string& text, Mode mode) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::BadFile, std::string("family JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("functions"))
    fail(Errc::BadFile, "family JSON needs fields 'n' and 'functions'");
  const auto& fns_j = j["functions"];
  if (!fns_j.is_array() || !j["n"].is_number_integer() ||
      j["n"].get<int64_t>() != int64_t(fns_j.size()))
    fail(Errc::BadFile, "'n' must match the number of functions");

  std::vector<StepFunction> fns;
  fns.reserve(fns_j.size());
  for (const auto& f_j : fns_j) {
    if (!f_j.is_array()) fail(Errc::BadFile, "each function must be an array of breakpoints");
    std::vector<Breakpoint> pts;
    pts.reserve(f_j.size());
    for (const auto& b_j : f_j) {
      if (!b_j.is_object() || !b_j.contains("t") || !b_j.contains("v"))
        fail(Errc::BadFile, "breakpoint needs fields 't' and 'v'");
      pts.push_back({b_j["t"].get<double>(), b_j["v"].get<double>()});
    }
    fns.push_back(StepFunction::make(std::move(pts)));
  }
  ProcessFamily fam = ProcessFamily::make(std::move(fns));
  if (mode == Mode::Exact && !fam.dyadic_values())
    fail(Errc::InvalidParams, "exact mode requires all values on the dyadic grid p/2^20");
  return fam;
}

ProcessFamily family_from_file(const std::string& path, Mode mode) {
  std::ifstream in(path);
  if (!in) fail(Errc::BadFile, "cannot open family file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return family_from_json(ss.str(), mode);
}

std::string family_to_json(const ProcessFamily& fam) {
  nlohmann::ordered_json j;
  j["n"] = fam.n();
  auto fns = nlohmann::ordered_json::array();
  for (const auto& f : fam.functions()) {
    auto pts = nlohmann::ordered_json::array();
    for (const auto& b : f.breakpoints()) pts.push_back({{"t", b.t}, {"v", b.v}});
    fns.push_back(std::move(pts));
  }
  j["functions"] = std::move(fns);
  return j.dump();
}

}  // namespace bernsup
