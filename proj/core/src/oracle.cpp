#include "bernsup/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "bernsup/detail/path_enum.hpp"

namespace bernsup {

namespace {

void require_enumerable(uint32_t n) {
  if (n > kMaxEnumVars)
    fail(Errc::TooManyVariables, "enumeration is capped at n <= 30; use the Monte-Carlo module");
}

void require_exact_values(const ProcessFamily& fam, Mode mode) {
  if (mode == Mode::Exact && !fam.dyadic_values())
    fail(Errc::InvalidParams, "exact mode requires all values on the dyadic grid p/2^20");
}

void require_exact_weights(std::span<const double> w, Mode mode) {
  if (mode != Mode::Exact) return;
  for (double x : w)
    if (!is_dyadic(x))
      fail(Errc::InvalidParams, "exact mode requires all weights on the dyadic grid p/2^20");
}

int64_t scaled(double v) { return llround(v * kDyadicScale); }

double powi(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

double abs_pow(double y, double p) {
  const double a = std::fabs(y);
  const int ip = int(p);
  if (double(ip) == p && ip >= 1 && ip <= 16) return powi(a, ip);
  return std::pow(a, p);
}

}  // namespace

PathEval path_sup(const ProcessFamily& fam, SignVector sign) {
  if (sign.n != fam.n()) fail(Errc::DimensionMismatch, "sign vector length != family size");
  const auto& times = fam.merged_times();
  double sup = -std::numeric_limits<double>::infinity();
  double arg = 0.0;
  for (double t : times) {
    double s = 0.0;
    auto vals = fam.values_at(t);
    for (uint32_t i = 0; i < fam.n(); ++i) s += sign.sign(i) * vals[i];
    if (s > sup) {
      sup = s;
      arg = t;
    }
  }
  return PathEval{sign, sup, arg};
}

// ---------------------------------------------------------------------------
// enumerate_exact
// ---------------------------------------------------------------------------

namespace {

struct EnumBlock {
  std::vector<uint64_t> cx, cy;
  __int128 sup_sc = 0, yp_sc = 0, absy_sc = 0;  // exact mode, values scaled by 2^20
  double sup_f = 0.0, yp_f = 0.0, absy_f = 0.0;
  std::vector<double> mom;
};

}  // namespace

TailReport enumerate_exact(const ProcessFamily& fam, std::span<const double> thresholds,
                           std::span<const double> moment_orders, Mode mode, int workers) {
  require_enumerable(fam.n());
  require_exact_values(fam, mode);
  for (double p : moment_orders)
    if (!(p >= 1.0)) fail(Errc::InvalidParams, "moment orders must be >= 1");

  const auto pt = detail::PathTable::build(fam);
  const uint32_t n = fam.n();
  const uint64_t total = 1ull << n;
  const bool exact = mode == Mode::Exact;
  const size_t tc = thresholds.size();
  const size_t oc = moment_orders.size();

  const uint64_t nb = (total + (1ull << detail::kBlockBits) - 1) >> detail::kBlockBits;
  std::vector<EnumBlock> blocks(nb);

  detail::run_blocks(total, workers, [&](uint64_t bi, uint64_t lo, uint64_t hi) {
    EnumBlock acc;
    acc.cx.assign(tc, 0);
    acc.cy.assign(tc, 0);
    acc.mom.assign(oc, 0.0);
    detail::walk_paths(pt, lo, hi, [&](uint64_t, double sup, size_t, double y) {
      for (size_t t = 0; t < tc; ++t) {
        if (geq(sup, thresholds[t], mode)) ++acc.cx[t];
        if (geq(y, thresholds[t], mode)) ++acc.cy[t];
      }
      if (exact) {
        acc.sup_sc += scaled(sup);
        const int64_t ys = scaled(y);
        if (ys > 0) acc.yp_sc += ys;
        acc.absy_sc += ys > 0 ? ys : -ys;
      } else {
        acc.sup_f += sup;
        if (y > 0) acc.yp_f += y;
        acc.absy_f += std::fabs(y);
      }
      for (size_t o = 0; o < oc; ++o) acc.mom[o] += abs_pow(y, moment_orders[o]);
    });
    blocks[bi] = std::move(acc);
  });

  TailReport rep;
  rep.mode = mode;
  rep.n = n;
  rep.thresholds.assign(thresholds.begin(), thresholds.end());
  rep.moment_orders.assign(moment_orders.begin(), moment_orders.end());

  std::vector<uint64_t> cx(tc, 0), cy(tc, 0);
  __int128 sup_sc = 0, yp_sc = 0, absy_sc = 0;
  Kahan sup_f, yp_f, absy_f;
  std::vector<Kahan> mom(oc);
  for (const auto& b : blocks) {
    for (size_t t = 0; t < tc; ++t) {
      cx[t] += b.cx[t];
      cy[t] += b.cy[t];
    }
    sup_sc += b.sup_sc;
    yp_sc += b.yp_sc;
    absy_sc += b.absy_sc;
    sup_f.add(b.sup_f);
    yp_f.add(b.yp_f);
    absy_f.add(b.absy_f);
    for (size_t o = 0; o < oc; ++o) mom[o].add(b.mom[o]);
  }

  const long double paths_ld = exp2l((long double)n);
  const long double unit = exp2l(-(long double)(n + kDyadicBits));
  if (exact) {
    rep.ex = double((long double)sup_sc * unit);
    rep.ey_plus = double((long double)yp_sc * unit);
    rep.e_abs_y = double((long double)absy_sc * unit);
  } else {
    rep.ex = double((long double)sup_f.value() / paths_ld);
    rep.ey_plus = double((long double)yp_f.value() / paths_ld);
    rep.e_abs_y = double((long double)absy_f.value() / paths_ld);
  }
  for (size_t t = 0; t < tc; ++t) {
    rep.p_x.push_back({cx[t], int(n)});
    rep.p_y.push_back({cy[t], int(n)});
  }
  for (size_t o = 0; o < oc; ++o) rep.moments.push_back(double((long double)mom[o].value() / paths_ld));

  // second pass: P(|X - EX| >= u). In exact mode the comparison is done on
  // integers scaled by 2^(n+20) so atoms on the threshold are classified
  // without rounding.
  if (tc > 0) {
    std::vector<std::vector<uint64_t>> dev_blocks(nb);
    const __int128 ex_num = sup_sc;  // sum of scaled sups
    const double ex_d = rep.ex;
    std::vector<long double> cuts(tc);
    for (size_t t = 0; t < tc; ++t) cuts[t] = (long double)thresholds[t] * exp2l((long double)(n + kDyadicBits));
    detail::run_blocks(total, workers, [&](uint64_t bi, uint64_t lo, uint64_t hi) {
      std::vector<uint64_t> cd(tc, 0);
      detail::walk_paths(pt, lo, hi, [&](uint64_t, double sup, size_t, double) {
        if (exact) {
          __int128 dev = ((__int128)scaled(sup) << n) - ex_num;
          if (dev < 0) dev = -dev;
          const long double devl = (long double)dev;
          for (size_t t = 0; t < tc; ++t)
            if (devl >= cuts[t]) ++cd[t];
        } else {
          const double dev = std::fabs(sup - ex_d);
          for (size_t t = 0; t < tc; ++t)
            if (geq(dev, thresholds[t], mode)) ++cd[t];
        }
      });
      dev_blocks[bi] = std::move(cd);
    });
    std::vector<uint64_t> cd(tc, 0);
    for (const auto& b : dev_blocks)
      for (size_t t = 0; t < tc; ++t) cd[t] += b[t];
    for (size_t t = 0; t < tc; ++t) rep.p_abs_dev.push_back({cd[t], int(n)});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// phi
// ---------------------------------------------------------------------------

PhiSpec PhiSpec::power(double p) {
  if (!(p >= 1.0)) fail(Errc::InvalidParams, "power phi needs p >= 1");
  return {Kind::Power, p};
}

double PhiSpec::operator()(double x) const {
  switch (kind) {
    case Kind::Exp: return std::exp(param * x);
    case Kind::Hinge: return x > param ? x - param : 0.0;
    case Kind::Power: return abs_pow(x, param);
    case Kind::Square: return x * x;
  }
  return 0.0;
}

std::string PhiSpec::name() const {
  char buf[48];
  switch (kind) {
    case Kind::Exp: snprintf(buf, sizeof buf, "exp(%g*x)", param); break;
    case Kind::Hinge: snprintf(buf, sizeof buf, "hinge(u=%g)", param); break;
    case Kind::Power: snprintf(buf, sizeof buf, "|x|^%g", param); break;
    case Kind::Square: snprintf(buf, sizeof buf, "square"); break;
  }
  return buf;
}

void BoxSpec::validate() const {
  if (corner.empty()) fail(Errc::InvalidParams, "box corner must be nonempty");
  for (double c : corner)
    if (!(c >= 0.0) || !std::isfinite(c)) fail(Errc::InvalidParams, "box corner must be nonnegative");
  if (points) {
    if (points->empty()) fail(Errc::EmptyPointSet, "point set present but empty");
    for (const auto& p : *points) {
      if (p.t.size() != corner.size()) fail(Errc::DimensionMismatch, "point dimension != box dimension");
      for (size_t i = 0; i < p.t.size(); ++i)
        if (!(p.t[i] >= 0.0 && p.t[i] <= corner[i]))
          fail(Errc::InvalidParams, "point set must lie inside the box");
    }
  }
}

namespace {

// E phi(Y + shift) for Y = sum w_i eps_i, with optional scaling of Y.
double mean_phi_of_sum(std::span<const double> w, double scale, double shift, const PhiSpec& phi,
                       int workers) {
  const uint32_t n = uint32_t(w.size());
  const uint64_t total = 1ull << n;
  const uint64_t nb = (total + (1ull << detail::kBlockBits) - 1) >> detail::kBlockBits;
  std::vector<double> partial(nb, 0.0);
  detail::run_blocks(total, workers, [&](uint64_t bi, uint64_t lo, uint64_t hi) {
    Kahan acc;
    detail::walk_sums(w, lo, hi, [&](uint64_t, double y) { acc.add(phi(scale * y + shift)); });
    partial[bi] = acc.value();
  });
  Kahan out;
  for (double v : partial) out.add(v);
  return double((long double)out.value() / exp2l((long double)n));
}

}  // namespace

PhiGapResult phi_gap(const BoxSpec& spec, const PhiSpec& phi, Mode mode) {
  spec.validate();
  const uint32_t n = uint32_t(spec.corner.size());
  require_enumerable(n);
  PhiGapResult res;
  res.whole_box = !spec.points.has_value();

  if (res.whole_box) {
    // Whole-box sup picks t_i = t0_i exactly when eps_i = +1, so
    // X = (Y + sum t0)/2 and X - EX = Y/2 with EX = sum t0 / 2.
    double s = 0.0;
    for (double c : spec.corner) s += c;
    res.ex = 0.5 * s;
    res.lhs = mean_phi_of_sum(spec.corner, 0.5, 0.0, phi, 1);
    res.rhs = mean_phi_of_sum(spec.corner, 1.0, 0.0, phi, 1);
    return res;
  }

  const auto& pts = *spec.points;
  const size_t R = pts.size();
  const uint64_t total = 1ull << n;
  // running sums per listed point, updated by Gray flips
  std::vector<double> coeff(R * n);
  for (size_t r = 0; r < R; ++r)
    for (uint32_t i = 0; i < n; ++i) coeff[r * n + i] = pts[r].t[i];

  auto walk = [&](auto&& visit) {
    std::vector<double> sums(R);
    for (size_t r = 0; r < R; ++r) {
      double s = pts[r].b;
      for (uint32_t i = 0; i < n; ++i) s -= coeff[r * n + i];  // all signs -1 at mask 0
      sums[r] = s;
    }
    for (uint64_t idx = 0; idx < total; ++idx) {
      uint64_t bits = idx ^ (idx >> 1);
      if (idx != 0) {
        const uint32_t b = uint32_t(std::countr_zero(idx));
        const double s = (bits >> b) & 1 ? 2.0 : -2.0;
        for (size_t r = 0; r < R; ++r) sums[r] += s * coeff[r * n + b];
      }
      double sup = sums[0];
      for (size_t r = 1; r < R; ++r) sup = std::max(sup, sums[r]);
      visit(sup);
    }
  };

  Kahan exa;
  walk([&](double sup) { exa.add(sup); });
  res.ex = double((long double)exa.value() / exp2l((long double)n));
  Kahan lhs;
  walk([&](double sup) { lhs.add(phi(sup - res.ex)); });
  res.lhs = double((long double)lhs.value() / exp2l((long double)n));
  res.rhs = mean_phi_of_sum(spec.corner, 1.0, 0.0, phi, 1);
  (void)mode;
  return res;
}

Dyadic box_abs_dev_tail(std::span<const double> corner, double u, Mode mode) {
  const uint32_t n = uint32_t(corner.size());
  require_enumerable(n);
  require_exact_weights(corner, mode);
  uint64_t cnt = 0;
  detail::walk_sums(corner, 0, 1ull << n, [&](uint64_t, double y) {
    if (geq(std::fabs(0.5 * y), u, mode)) ++cnt;
  });
  return Dyadic{cnt, int(n)};
}

// ---------------------------------------------------------------------------
// weight-vector statistics
// ---------------------------------------------------------------------------

std::vector<ClassicLoStats> classic_lo_stats_multi(std::span<const double> weights,
                                                   std::span<const double> thresholds, Mode mode) {
  const uint32_t n = uint32_t(weights.size());
  if (n == 0) fail(Errc::InvalidParams, "weights must be nonempty");
  require_enumerable(n);
  require_exact_weights(weights, mode);
  const uint64_t total = 1ull << n;
  const size_t tc = thresholds.size();
  std::vector<uint64_t> cmax(tc, 0), clast(tc, 0);
  for (uint64_t bits = 0; bits < total; ++bits) {
    double s = 0.0, smax = -std::numeric_limits<double>::infinity();
    for (uint32_t i = 0; i < n; ++i) {
      s += ((bits >> i) & 1 ? 1.0 : -1.0) * weights[i];
      smax = std::max(smax, s);
    }
    for (size_t t = 0; t < tc; ++t) {
      if (geq(smax, thresholds[t], mode)) ++cmax[t];
      if (geq(s, thresholds[t], mode)) ++clast[t];
    }
  }
  std::vector<ClassicLoStats> out(tc);
  for (size_t t = 0; t < tc; ++t) out[t] = {{cmax[t], int(n)}, {clast[t], int(n)}};
  return out;
}

ClassicLoStats classic_lo_stats(std::span<const double> weights, double u, Mode mode) {
  return classic_lo_stats_multi(weights, std::span<const double>(&u, 1), mode)[0];
}

KahaneSides kahane_integral(std::span<const double> weights, double u, Mode mode) {
  const uint32_t n = uint32_t(weights.size());
  if (n == 0) fail(Errc::InvalidParams, "weights must be nonempty");
  require_enumerable(n);
  require_exact_weights(weights, mode);
  uint64_t cnt = 0;
  Kahan hinge, yplus;
  detail::walk_sums(weights, 0, 1ull << n, [&](uint64_t, double y) {
    if (geq(y, u, mode)) ++cnt;
    if (y > u) hinge.add(y - u);
    if (y > 0) yplus.add(y);
  });
  const long double paths = exp2l((long double)n);
  KahaneSides s;
  s.p_tail = {cnt, int(n)};
  s.ey_plus = double((long double)yplus.value() / paths);
  s.lhs = double((long double)hinge.value() / paths);
  s.rhs = 4.0 * s.p_tail.value() * s.ey_plus;
  return s;
}

double weight_abs_moment(std::span<const double> weights, double p) {
  const uint32_t n = uint32_t(weights.size());
  if (n == 0) fail(Errc::InvalidParams, "weights must be nonempty");
  require_enumerable(n);
  Kahan acc;
  detail::walk_sums(weights, 0, 1ull << n, [&](uint64_t, double y) { acc.add(abs_pow(y, p)); });
  return double((long double)acc.value() / exp2l((long double)n));
}

double weight_lp_norm(std::span<const double> weights, double p) {
  return std::pow(weight_abs_moment(weights, p), 1.0 / p);
}

double weight_abs_mean(std::span<const double> weights) { return weight_abs_moment(weights, 1.0); }

}  // namespace bernsup
