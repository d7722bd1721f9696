#include "bernsup/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include "bernsup/detail/path_enum.hpp"

namespace bernsup {

namespace {

constexpr uint32_t kMaxTailsVars = 22;  // snapshot keeps all 2^n path values

std::string digest_weights(std::string_view id, std::span<const double> w, double a = 0, double b = 0) {
  Digest d;
  d.add_str(id);
  d.add_u64(w.size());
  for (double x : w) d.add_double(x);
  d.add_double(a);
  d.add_double(b);
  return d.hex();
}

CheckResult make_result(std::string id, double lhs, double rhs, std::string digest) {
  CheckResult r;
  r.check_id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.holds = holds_leq(lhs, rhs);
  r.margin = rhs - lhs;
  r.inputs_digest = std::move(digest);
  return r;
}

CheckResult hypothesis_skip(std::string id, std::string digest, std::string why) {
  CheckResult r;
  r.check_id = std::move(id);
  r.inputs_digest = std::move(digest);
  r.hypothesis_violated = true;
  r.note = std::move(why);
  return r;
}

}  // namespace

bool holds_leq(double lhs, double rhs) {
  const double guard = 1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
  return lhs <= rhs + guard;
}

DominationPreset DominationPreset::make(double alpha, double theta, double c1) {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(Errc::ParamOutOfRange, "alpha must be in (0,1]");
  if (!(theta > 0.0 && theta < 1.0)) fail(Errc::ParamOutOfRange, "theta must be in (0,1)");
  if (!(c1 >= 0.0)) fail(Errc::ParamOutOfRange, "C_1 must be >= 0");
  return DominationPreset{alpha, theta, c1};
}

double DominationPreset::multiplier() const { return c1 / std::sqrt(theta) + 1.0 + alpha; }

double DominationPreset::tail_constant() const {
  const double a = 18.0 / ((1.0 - theta) * (1.0 - theta));
  const double b = 2.0 / (alpha * std::sqrt(theta));
  return std::max(a, b);
}

// ---------------------------------------------------------------------------
// FamilyTails
// ---------------------------------------------------------------------------

FamilyTails FamilyTails::build(const ProcessFamily& fam, Mode mode, int workers) {
  if (fam.n() > kMaxTailsVars)
    fail(Errc::TooManyVariables, "tail snapshot holds 2^n values; capped at n <= 22");
  if (mode == Mode::Exact && !fam.dyadic_values())
    fail(Errc::InvalidParams, "exact mode requires all values on the dyadic grid p/2^20");

  FamilyTails ft;
  ft.n_ = fam.n();
  ft.paths_ = 1ull << ft.n_;
  ft.mode_ = mode;
  ft.terminal_ = fam.terminal();
  ft.sigma_ = fam.terminal_norm();
  ft.digest_ = fam.digest();
  ft.y_max_ = 0.0;
  for (double w : ft.terminal_) ft.y_max_ += w;

  ft.sups_.resize(ft.paths_);
  ft.terms_.resize(ft.paths_);
  const auto pt = detail::PathTable::build(fam);
  detail::run_blocks(ft.paths_, workers, [&](uint64_t, uint64_t lo, uint64_t hi) {
    uint64_t pos = lo;
    detail::walk_paths(pt, lo, hi, [&](uint64_t, double sup, size_t, double y) {
      ft.sups_[pos] = sup;
      ft.terms_[pos] = y;
      ++pos;
    });
  });
  std::sort(ft.sups_.begin(), ft.sups_.end());
  std::sort(ft.terms_.begin(), ft.terms_.end());

  if (mode == Mode::Exact) {
    __int128 sx = 0, syp = 0, sya = 0;
    for (double s : ft.sups_) sx += llround(s * kDyadicScale);
    for (double y : ft.terms_) {
      const int64_t ys = llround(y * kDyadicScale);
      if (ys > 0) syp += ys;
      sya += ys > 0 ? ys : -ys;
    }
    const long double unit = exp2l(-(long double)(ft.n_ + kDyadicBits));
    ft.ex_ = double((long double)sx * unit);
    ft.ey_plus_ = double((long double)syp * unit);
    ft.e_abs_y_ = double((long double)sya * unit);
  } else {
    Kahan sx, syp, sya;
    for (double s : ft.sups_) sx.add(s);
    for (double y : ft.terms_) {
      if (y > 0) syp.add(y);
      sya.add(std::fabs(y));
    }
    const double paths = double(ft.paths_);
    ft.ex_ = sx.value() / paths;
    ft.ey_plus_ = syp.value() / paths;
    ft.e_abs_y_ = sya.value() / paths;
  }

  ft.term_suffix_.assign(ft.paths_ + 1, 0.0);
  for (size_t i = ft.paths_; i-- > 0;) ft.term_suffix_[i] = ft.term_suffix_[i + 1] + ft.terms_[i];
  return ft;
}

namespace {
uint64_t count_geq_sorted(const std::vector<double>& v, double u, Mode mode) {
  const double cut = mode == Mode::Exact ? u : u - kFloatTieTol;
  return v.end() - std::lower_bound(v.begin(), v.end(), cut);
}
}  // namespace

uint64_t FamilyTails::count_sup_geq(double u) const { return count_geq_sorted(sups_, u, mode_); }
uint64_t FamilyTails::count_term_geq(double u) const { return count_geq_sorted(terms_, u, mode_); }

uint64_t FamilyTails::count_abs_term_geq(double u) const {
  const double cut = mode_ == Mode::Exact ? u : u - kFloatTieTol;
  if (cut <= 0.0) return paths_;
  const uint64_t pos = count_geq_sorted(terms_, cut, mode_);
  const uint64_t neg =
      std::upper_bound(terms_.begin(), terms_.end(), -cut) - terms_.begin();
  return pos + neg;
}

double FamilyTails::hinge(double u) const {
  const size_t idx = std::upper_bound(terms_.begin(), terms_.end(), u) - terms_.begin();
  const uint64_t cnt = paths_ - idx;
  return (term_suffix_[idx] - u * double(cnt)) / double(paths_);
}

double FamilyTails::abs_moment(double p) const {
  Kahan acc;
  for (double y : terms_) acc.add(std::pow(std::fabs(y), p));
  return acc.value() / double(paths_);
}

// ---------------------------------------------------------------------------
// weight-vector checks
// ---------------------------------------------------------------------------

CheckResult check_hyp(std::span<const double> t, double p, double q, Mode mode) {
  if (!(1.0 < q && q < p)) fail(Errc::ParamOutOfRange, "hyp needs 1 < q < p");
  (void)mode;  // norms are moment integrals; no threshold events involved
  const double lp = weight_lp_norm(t, p);
  const double lq = weight_lp_norm(t, q);
  const double rhs = std::sqrt((p - 1.0) / (q - 1.0)) * lq;
  return make_result("hyp", lp, rhs, digest_weights("hyp", t, p, q));
}

CheckResult check_szarek(std::span<const double> t, Mode mode) {
  (void)mode;
  double v = 0.0;
  for (double x : t) v += x * x;
  const double lhs = std::sqrt(v) / std::sqrt(2.0);
  return make_result("szarek", lhs, weight_abs_mean(t), digest_weights("szarek", t));
}

std::vector<CheckResult> check_pz(std::span<const double> t, double theta, Mode mode) {
  if (!(theta > 0.0 && theta < 1.0)) fail(Errc::ParamOutOfRange, "pz needs theta in (0,1)");
  const std::string dig = digest_weights("pz", t, theta);
  double v = 0.0;
  for (double x : t) v += x * x;
  if (!(v > 0.0))
    return {hypothesis_skip("pz_tail", dig, "zero index point"),
            hypothesis_skip("pz_moment4", dig, "zero index point")};

  const double norm = std::sqrt(v);
  const double u = std::sqrt(theta) * norm;
  const uint32_t n = uint32_t(t.size());
  if (n > kMaxEnumVars) fail(Errc::TooManyVariables, "pz enumeration capped at n <= 30");
  uint64_t cnt = 0;
  detail::walk_sums(t, 0, 1ull << n, [&](uint64_t, double y) {
    if (geq(y, u, mode)) ++cnt;
  });
  const double tail = double(cnt) / double(1ull << n);
  auto r1 = make_result("pz_tail", (1.0 - theta) * (1.0 - theta) / 18.0, tail, dig);

  const double m2 = weight_abs_moment(t, 2.0);
  const double m4 = weight_abs_moment(t, 4.0);
  auto r2 = make_result("pz_moment4", 1.0 / 9.0, m2 * m2 / m4, dig);
  return {std::move(r1), std::move(r2)};
}

CheckResult check_kahane(std::span<const double> t, double u, Mode mode) {
  const std::string dig = digest_weights("kahane", t, u);
  if (!(u > 0.0)) return hypothesis_skip("kahane", dig, "needs u > 0");
  const auto s = kahane_integral(t, u, mode);
  return make_result("kahane", s.lhs, s.rhs, dig);
}

CheckResult check_conc_phi(const BoxSpec& box, const PhiSpec& phi, Mode mode) {
  const auto gap = phi_gap(box, phi, mode);
  Digest d;
  d.add_str("conc_phi");
  d.add_str(phi.name());
  for (double c : box.corner) d.add_double(c);
  if (box.points) d.add_u64(box.points->size());
  auto r = make_result("conc_phi[" + phi.name() + "]", gap.lhs, gap.rhs, d.hex());
  if (!gap.whole_box) {
    r.theorem_backed = false;
    r.note = "beyond-paper: sup restricted to a point set";
  } else if (!phi.increasing()) {
    r.note = "beyond-statement: non-increasing phi, valid on boxes by symmetry";
  }
  return r;
}

CheckResult check_subgauss(const BoxSpec& box, double u, Mode mode) {
  box.validate();
  if (box.points) fail(Errc::InvalidParams, "subgauss check applies to whole boxes");
  const std::string dig = digest_weights("subgauss", box.corner, u);
  if (!(u >= 0.0)) return hypothesis_skip("subgauss", dig, "needs u >= 0");
  double v = 0.0;
  for (double c : box.corner) v += c * c;
  const double lhs = box_abs_dev_tail(box.corner, u, mode).value();
  const double rhs = u == 0.0 ? 2.0 : 2.0 * std::exp(-u * u / (2.0 * v));
  return make_result("subgauss", lhs, rhs, dig);
}

// ---------------------------------------------------------------------------
// family checks
// ---------------------------------------------------------------------------

CheckResult check_domin_ey(const FamilyTails& ft, double alpha, double u) {
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(Errc::ParamOutOfRange, "alpha must be in (0,1]");
  if (!(u > 0.0)) fail(Errc::ParamOutOfRange, "u must be > 0");
  Digest d;
  d.add_str("domin_ey");
  d.add_str(ft.digest());
  d.add_double(alpha);
  d.add_double(u);
  const double lhs = ft.p_x(ft.ex() + (1.0 + alpha) * u);
  const double rhs = 4.0 / (alpha * u) * ft.p_y(u) * ft.ey_plus();
  return make_result("domin_ey", lhs, rhs, d.hex());
}

CheckResult check_domina(const FamilyTails& ft, double u, const DominationPreset& preset) {
  if (!(u > 0.0)) fail(Errc::ParamOutOfRange, "u must be > 0");
  Digest d;
  d.add_str("domina");
  d.add_str(ft.digest());
  d.add_double(u);
  d.add_double(preset.alpha);
  d.add_double(preset.theta);
  d.add_double(preset.c1);
  if (ft.ex() > preset.c1 * ft.sigma())
    return hypothesis_skip("domina", d.hex(), "EX exceeds C_1 ||a(1)||");
  const double lhs = ft.p_x(preset.multiplier() * u);
  const double rhs = preset.tail_constant() * ft.p_y(u);
  return make_result("domina", lhs, rhs, d.hex());
}

CheckResult check_bt16(const FamilyTails& ft, double u, double c1) {
  if (!(u > 0.0)) fail(Errc::ParamOutOfRange, "u must be > 0");
  Digest d;
  d.add_str("bt16");
  d.add_str(ft.digest());
  d.add_double(u);
  d.add_double(c1);
  if (ft.ex() > c1 * ft.sigma()) return hypothesis_skip("bt16", d.hex(), "EX exceeds C_1 ||a(1)||");
  const double lhs = ft.p_x((2.0 * std::sqrt(2.0) * c1 + 2.0) * u);
  const double rhs = 16.0 * ft.p_y(u);
  return make_result("bt16", lhs, rhs, d.hex());
}

CheckResult check_sza(const FamilyTails& ft, double u) {
  if (!(u > 0.0)) fail(Errc::ParamOutOfRange, "u must be > 0");
  Digest d;
  d.add_str("sza");
  d.add_str(ft.digest());
  d.add_double(u);
  if (ft.n() < 5) return hypothesis_skip("sza", d.hex(), "needs n >= 5");
  return make_result("sza", ft.p_x(8.0 * u), 53.0 * ft.p_y(u), d.hex());
}

CheckResult check_classic_lo(std::span<const double> weights, double u, Mode mode) {
  const auto s = classic_lo_stats(weights, u, mode);
  return make_result("classic_lo", s.p_max.value(), 2.0 * s.p_last.value(),
                     digest_weights("classic_lo", weights, u));
}

std::vector<CheckResult> check_proposition(const ProcessFamily& fam, const FamilyTails& ft) {
  Digest d;
  d.add_str("proposition");
  d.add_str(ft.digest());
  const std::string dig = d.hex();

  // hypothesis: a_i(t) = alpha_i(t) a_i(1) with alpha_1 >= ... >= alpha_n
  // pointwise; compared cross-multiplied so dyadic inputs stay exact. A
  // function with a_i(1) = 0 is identically zero and contributes to neither
  // X nor the partial sums, so the ordering chain runs over the functions
  // with nonzero terminal value.
  bool ordered = true;
  const auto& w = fam.terminal();
  std::vector<uint32_t> live;
  for (uint32_t i = 0; i < fam.n(); ++i)
    if (w[i] > 0.0) live.push_back(i);
  for (double t : fam.merged_times()) {
    const auto vals = fam.values_at(t);
    for (size_t j = 0; j + 1 < live.size() && ordered; ++j) {
      const uint32_t i = live[j], k = live[j + 1];
      if (vals[i] * w[k] < vals[k] * w[i]) ordered = false;
    }
    if (!ordered) break;
  }
  if (!ordered)
    return {hypothesis_skip("proposition", dig, "alpha factors not pointwise ordered"),
            hypothesis_skip("proposition_abel", dig, "alpha factors not pointwise ordered")};

  auto prob = make_result("proposition", ft.p_x(1.0), 2.0 * ft.p_y(1.0), dig);

  // pathwise Abel step: X(eps) <= max(0, max_k S_k(eps)); the zero prefix is
  // part of the bound since the alpha weights sum to alpha_1 <= 1.
  const auto pt = detail::PathTable::build(fam);
  double worst = -std::numeric_limits<double>::infinity();
  detail::walk_paths(pt, 0, 1ull << fam.n(), [&](uint64_t bits, double sup, size_t, double) {
    double s = 0.0, smax = 0.0;
    for (uint32_t i = 0; i < fam.n(); ++i) {
      s += ((bits >> i) & 1 ? 1.0 : -1.0) * w[i];
      smax = std::max(smax, s);
    }
    worst = std::max(worst, sup - smax);
  });
  auto abel = make_result("proposition_abel", worst, 0.0, dig);
  return {std::move(prob), std::move(abel)};
}

CheckResult check_remark_large_u(const FamilyTails& ft, double u, double eps) {
  if (!(u > 0.0)) fail(Errc::ParamOutOfRange, "u must be > 0");
  if (!(eps > 0.0)) fail(Errc::ParamOutOfRange, "eps must be > 0");
  Digest d;
  d.add_str("remark_large_u");
  d.add_str(ft.digest());
  d.add_double(u);
  d.add_double(eps);
  if (ft.ex() > eps * u) return hypothesis_skip("remark_large_u", d.hex(), "needs EX <= eps*u");
  const double lhs = ft.p_x((1.0 + 2.0 * eps) * u);
  const double rhs = 4.0 * ft.ey_plus() / (eps * u) * ft.p_y(u);
  return make_result("remark_large_u", lhs, rhs, d.hex());
}

// ---------------------------------------------------------------------------
// constant presets
// ---------------------------------------------------------------------------

const char* preset_name(ConstantPreset p) {
  switch (p) {
    case ConstantPreset::Sza8_53: return "sza8_53";
    case ConstantPreset::Six430: return "six_430";
    case ConstantPreset::Bt16: return "bt_16";
  }
  return "?";
}

ConstantRow derive_constants(ConstantPreset preset, double c1) {
  if (!(c1 > 0.0)) fail(Errc::ParamOutOfRange, "C_1 must be > 0");
  ConstantRow row;
  row.preset = preset;
  row.c1 = c1;
  switch (preset) {
    case ConstantPreset::Sza8_53: {
      const double alpha = 0.1;
      const double st = c1 / (7.0 - alpha);
      if (st >= 1.0) fail(Errc::InfeasiblePreset, "theta >= 1 for this C_1");
      const double theta = st * st;
      row.alpha = alpha;
      row.theta = theta;
      // c1/sqrt(theta) cancels to 7 - alpha exactly
      row.multiplier = (7.0 - alpha) + 1.0 + alpha;
      row.tail_constant =
          std::max(18.0 / ((1.0 - theta) * (1.0 - theta)), 2.0 / (alpha * st));
      return row;
    }
    case ConstantPreset::Six430: {
      // multiplier pinned at 6, so sqrt(theta) = c1/(5 - alpha); the tail
      // constant is minimized over an alpha grid in (0, 0.55)
      double best = std::numeric_limits<double>::infinity();
      bool found = false;
      for (int j = 1; j <= 1099; ++j) {
        const double alpha = 5e-4 * j;
        const double st = c1 / (5.0 - alpha);
        if (st >= 1.0) continue;
        const double theta = st * st;
        const double tc = std::max(18.0 / ((1.0 - theta) * (1.0 - theta)), 2.0 / (alpha * st));
        if (tc < best) {
          best = tc;
          row.alpha = alpha;
          row.theta = theta;
          found = true;
        }
      }
      if (!found) fail(Errc::InfeasiblePreset, "theta >= 1 across the whole alpha grid");
      row.multiplier = 6.0;
      row.tail_constant = best;
      return row;
    }
    case ConstantPreset::Bt16: {
      row.multiplier = 2.0 * std::sqrt(2.0) * c1 + 2.0;
      row.tail_constant = 16.0;
      return row;
    }
  }
  fail(Errc::InvalidParams, "unknown preset");
}

// ---------------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------------

void SuiteReport::add(CheckResult r) {
  ++summary.total;
  if (r.hypothesis_violated)
    ++summary.skipped_hypothesis;
  else if (r.holds)
    ++summary.passed;
  else if (r.theorem_backed)
    ++summary.failed;
  results.push_back(std::move(r));
}

void SuiteReport::add(std::vector<CheckResult> rs) {
  for (auto& r : rs) add(std::move(r));
}

std::vector<double> default_threshold_grid(double y_max, int points) {
  std::vector<double> grid;
  if (!(y_max > 0.0)) return grid;
  for (int j = 1; j <= points; ++j) grid.push_back(y_max * double(j) / double(points));
  return grid;
}

namespace {

// phi gap over the family's own curve {a(t)} inside the box of a(1): the sup
// over the curve IS the family sup, so the sides come straight from the tail
// snapshot. The box statement does not cover such subsets, so the result is
// reported as observational, never asserted.
CheckResult curve_phi_gap(const FamilyTails& ft, const PhiSpec& phi) {
  Kahan lhs, rhs;
  for (double s : ft.sup_values()) lhs.add(phi(s - ft.ex()));
  for (double y : ft.term_values()) rhs.add(phi(y));
  Digest d;
  d.add_str("curve_phi_gap");
  d.add_str(ft.digest());
  d.add_str(phi.name());
  auto r = make_result("curve_phi_gap[" + phi.name() + "]", lhs.value() / double(ft.paths()),
                       rhs.value() / double(ft.paths()), d.hex());
  r.theorem_backed = false;
  r.note = "beyond-paper: box statement applied to the family curve";
  return r;
}

}  // namespace

void run_family_suite(SuiteReport& rep, const ProcessFamily& fam, std::span<const double> thresholds,
                      Mode mode) {
  const auto ft = FamilyTails::build(fam, mode);
  const auto& w = fam.terminal();
  std::vector<double> grid(thresholds.begin(), thresholds.end());
  if (grid.empty()) grid = default_threshold_grid(ft.y_max());
  std::vector<double> mid;
  for (size_t j : {grid.size() / 4, grid.size() / 2, (3 * grid.size()) / 4})
    if (j < grid.size()) mid.push_back(grid[j]);
  std::sort(mid.begin(), mid.end());
  mid.erase(std::unique(mid.begin(), mid.end()), mid.end());

  // index-point checks on t = a(1)
  for (auto [q, p] : {std::pair{2.0, 4.0}, {2.0, 8.0}, {4.0, 8.0}})
    rep.add(check_hyp(w, p, q, mode));
  rep.add(check_szarek(w, mode));
  for (double theta : {0.25, 0.5, 0.75}) rep.add(check_pz(w, theta, mode));
  for (double u : mid) rep.add(check_kahane(w, u, mode));
  for (double u : mid) rep.add(check_classic_lo(w, u, mode));

  // box checks on [0, a(1)]
  BoxSpec box{std::vector<double>(w.begin(), w.end()), std::nullopt};
  std::vector<PhiSpec> phis;
  for (double lam : {0.5, -0.5, 1.0, -1.0, 2.0, -2.0}) phis.push_back(PhiSpec::exp(lam));
  for (double u : mid) phis.push_back(PhiSpec::hinge(u));
  phis.push_back(PhiSpec::square());
  for (const auto& phi : phis) rep.add(check_conc_phi(box, phi, mode));
  for (double u : mid) rep.add(check_subgauss(box, u, mode));
  rep.add(curve_phi_gap(ft, PhiSpec::exp(1.0)));
  rep.add(curve_phi_gap(ft, PhiSpec::square()));

  // tail-domination checks on the family
  rep.add(check_proposition(fam, ft));
  const double c1_exact = ft.sigma() > 0.0 ? ft.ex() / ft.sigma() : 0.0;
  for (double u : mid) {
    rep.add(check_domin_ey(ft, 0.5, u));
    rep.add(check_domin_ey(ft, 1.0, u));
    rep.add(check_domina(ft, u, DominationPreset::make(0.1, 0.5, c1_exact)));
    rep.add(check_domina(ft, u, DominationPreset::make(0.5, 0.25, c1_exact)));
    rep.add(check_bt16(ft, u, c1_exact));
    rep.add(check_remark_large_u(ft, u, 0.5));
  }
  for (double u : grid) rep.add(check_sza(ft, u));

  // conjecture ratio record for admissible families with n >= 5; research
  // output only, never a failure
  if (fam.n() >= 5 && admissibility_check(fam).all()) {
    const uint64_t cx = ft.count_sup_geq(1.0);
    const uint64_t cy = ft.count_term_geq(1.0);
    if (cy > 0 && cx > 2 * cy)
      rep.conjecture_candidates.push_back(
          {ft.digest(), fam.n(), double(cx) / double(cy)});
  }
}

SuiteReport run_random_suite(size_t count, uint32_t n_lo, uint32_t n_hi, uint64_t seed, Mode mode) {
  if (n_lo < 1 || n_hi < n_lo) fail(Errc::InvalidParams, "bad n range");
  SuiteReport rep;
  Rng rng(mix64(seed ^ 0x73756974ull));
  for (size_t i = 0; i < count; ++i) {
    const uint64_t fam_seed = rng.next_u64();
    const uint32_t n = n_lo + uint32_t(rng.next_below(n_hi - n_lo + 1));
    const ProcessFamily fam = gen_family(FamilyKind::Random, n, fam_seed);
    run_family_suite(rep, fam, {}, mode);
    // proposition gets a dedicated ordered_alpha family so its hypothesis
    // actually holds
    const ProcessFamily ofam = gen_family(FamilyKind::OrderedAlpha, n, mix64(fam_seed));
    const auto oft = FamilyTails::build(ofam, mode);
    rep.add(check_proposition(ofam, oft));
  }
  return rep;
}

}  // namespace bernsup
