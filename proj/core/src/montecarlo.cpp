#include "bernsup/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "bernsup/detail/path_enum.hpp"

namespace bernsup {

namespace {

constexpr uint64_t kMCBlock = 4096;  // samples per block; fixed so per-block
                                     // partials are worker-count invariant

struct McBlock {
  std::vector<uint64_t> cx, cy;
  double sup_sum = 0.0, sup_sq = 0.0;
};

}  // namespace

std::pair<double, double> wilson95(uint64_t k, uint64_t n) {
  const double z = 1.959963984540054;
  const double z2 = z * z;
  const double nn = double(n);
  const double ph = double(k) / nn;
  const double denom = 1.0 + z2 / nn;
  const double center = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  // the interval always contains ph; snap the degenerate edges so rounding
  // cannot push lo above 0 or hi below 1
  const double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = k == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

MCReport estimate_tails(const ProcessFamily& fam, std::span<const double> thresholds,
                        uint64_t samples, uint64_t seed, int workers, Mode mode) {
  if (samples == 0) fail(Errc::ZeroSamples, "samples must be >= 1");
  const uint32_t n = fam.n();
  if (n > 256) fail(Errc::TooManyVariables, "Monte-Carlo sampler supports n <= 256");

  const auto pt = detail::PathTable::build(fam);
  const size_t m = pt.m;
  const size_t tc = thresholds.size();
  const uint32_t words = (n + 63) / 64;

  const uint64_t nb = (samples + kMCBlock - 1) / kMCBlock;
  std::vector<McBlock> blocks(nb);

  auto run_block = [&](uint64_t bi, uint64_t lo, uint64_t hi) {
    McBlock acc;
    acc.cx.assign(tc, 0);
    acc.cy.assign(tc, 0);
    std::vector<double> sums(m);
    for (uint64_t j = lo; j < hi; ++j) {
      std::fill(sums.begin(), sums.end(), 0.0);
      for (uint32_t w = 0; w < words; ++w) {
        const uint64_t bits = rng_at(seed, j * words + w);
        const uint32_t base = w * 64;
        const uint32_t top = std::min(n, base + 64);
        for (uint32_t i = base; i < top; ++i) {
          const double s = (bits >> (i - base)) & 1 ? 1.0 : -1.0;
          const double* row = pt.coeff.data() + size_t(i) * m;
          for (size_t c = 0; c < m; ++c) sums[c] += s * row[c];
        }
      }
      double sup = sums[0];
      for (size_t c = 1; c < m; ++c) sup = std::max(sup, sums[c]);
      const double y = sums[m - 1];
      for (size_t t = 0; t < tc; ++t) {
        if (geq(sup, thresholds[t], mode)) ++acc.cx[t];
        if (geq(y, thresholds[t], mode)) ++acc.cy[t];
      }
      acc.sup_sum += sup;
      acc.sup_sq += sup * sup;
    }
    blocks[bi] = std::move(acc);
  };

  if (workers <= 1 || nb <= 1) {
    for (uint64_t bi = 0; bi < nb; ++bi)
      run_block(bi, bi * kMCBlock, std::min(samples, (bi + 1) * kMCBlock));
  } else {
    std::atomic<uint64_t> next{0};
    auto loop = [&] {
      for (uint64_t bi; (bi = next.fetch_add(1)) < nb;)
        run_block(bi, bi * kMCBlock, std::min(samples, (bi + 1) * kMCBlock));
    };
    std::vector<std::thread> pool;
    const int wc = int(std::min<uint64_t>(uint64_t(workers), nb));
    for (int i = 0; i < wc; ++i) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }

  // fold per-block partials in block order: identical for any worker count
  std::vector<uint64_t> cx(tc, 0), cy(tc, 0);
  Kahan sup_sum, sup_sq;
  for (const auto& b : blocks) {
    for (size_t t = 0; t < tc; ++t) {
      cx[t] += b.cx[t];
      cy[t] += b.cy[t];
    }
    sup_sum.add(b.sup_sum);
    sup_sq.add(b.sup_sq);
  }

  MCReport rep;
  rep.mode = mode;
  rep.n = n;
  rep.samples = samples;
  rep.seed = seed;
  rep.thresholds.assign(thresholds.begin(), thresholds.end());
  for (size_t t = 0; t < tc; ++t) {
    auto [lox, hix] = wilson95(cx[t], samples);
    rep.p_x.push_back({double(cx[t]) / double(samples), lox, hix, samples, seed});
    auto [loy, hiy] = wilson95(cy[t], samples);
    rep.p_y.push_back({double(cy[t]) / double(samples), loy, hiy, samples, seed});
  }
  const double mean = sup_sum.value() / double(samples);
  double half = 0.0;
  if (samples > 1) {
    const double var =
        std::max(0.0, (sup_sq.value() - sup_sum.value() * mean) / double(samples - 1));
    half = 1.959963984540054 * std::sqrt(var / double(samples));
  }
  rep.ex = {mean, mean - half, mean + half};
  return rep;
}

}  // namespace bernsup
