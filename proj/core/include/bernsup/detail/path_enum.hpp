#pragma once

#include <atomic>
#include <bit>
#include <span>
#include <thread>
#include <vector>

#include "bernsup/family.hpp"

namespace bernsup::detail {

/// Coefficient matrix of a family on its merged time grid.
struct PathTable {
  uint32_t n = 0;
  size_t m = 0;
  std::vector<double> times;
  std::vector<double> coeff;  // coeff[i * m + j] = a_i(times[j])
  std::vector<double> terminal;

  static PathTable build(const ProcessFamily& fam) {
    PathTable pt;
    pt.n = fam.n();
    pt.times = fam.merged_times();
    pt.m = pt.times.size();
    pt.terminal = fam.terminal();
    pt.coeff.resize(size_t(pt.n) * pt.m);
    for (uint32_t i = 0; i < pt.n; ++i)
      for (size_t j = 0; j < pt.m; ++j) pt.coeff[size_t(i) * pt.m + j] = fam.function(i)(pt.times[j]);
    return pt;
  }
};

/// Visit the sign masks gray(begin), ..., gray(end-1). Path sums are rebuilt
/// from scratch at `begin` and then updated by single sign flips, so each step
/// costs O(m). visit(bits, sup, argmax_index, terminal_value).
template <class V>
void walk_paths(const PathTable& pt, uint64_t begin, uint64_t end, V&& visit) {
  const size_t m = pt.m;
  std::vector<double> sums(m, 0.0);
  uint64_t bits = begin ^ (begin >> 1);
  for (uint32_t i = 0; i < pt.n; ++i) {
    const double s = (bits >> i) & 1 ? 1.0 : -1.0;
    const double* row = pt.coeff.data() + size_t(i) * m;
    for (size_t j = 0; j < m; ++j) sums[j] += s * row[j];
  }
  for (uint64_t idx = begin; idx < end; ++idx) {
    if (idx != begin) {
      const uint32_t b = uint32_t(std::countr_zero(idx));
      bits ^= 1ull << b;
      const double s = (bits >> b) & 1 ? 2.0 : -2.0;
      const double* row = pt.coeff.data() + size_t(b) * m;
      for (size_t j = 0; j < m; ++j) sums[j] += s * row[j];
    }
    double sup = sums[0];
    size_t arg = 0;
    for (size_t j = 1; j < m; ++j)
      if (sums[j] > sup) {  // ties resolve toward the smallest time
        sup = sums[j];
        arg = j;
      }
    visit(bits, sup, arg, sums[m - 1]);
  }
}

/// Same Gray walk for a plain weight vector: visit(bits, sum).
template <class V>
void walk_sums(std::span<const double> w, uint64_t begin, uint64_t end, V&& visit) {
  const uint32_t n = uint32_t(w.size());
  uint64_t bits = begin ^ (begin >> 1);
  double y = 0.0;
  for (uint32_t i = 0; i < n; ++i) y += ((bits >> i) & 1 ? 1.0 : -1.0) * w[i];
  for (uint64_t idx = begin; idx < end; ++idx) {
    if (idx != begin) {
      const uint32_t b = uint32_t(std::countr_zero(idx));
      bits ^= 1ull << b;
      y += ((bits >> b) & 1 ? 2.0 : -2.0) * w[b];
    }
    visit(bits, y);
  }
}

inline constexpr uint64_t kBlockBits = 16;

/// Split [0, total) into fixed blocks of 2^kBlockBits indices and run fn on
/// each, possibly on worker threads. Blocks are fixed so per-block results are
/// identical for any worker count; callers fold them in block order.
template <class BlockFn>
void run_blocks(uint64_t total, int workers, BlockFn&& fn) {
  const uint64_t bs = 1ull << kBlockBits;
  const uint64_t nb = (total + bs - 1) / bs;
  auto body = [&](uint64_t bi) { fn(bi, bi * bs, std::min(total, (bi + 1) * bs)); };
  if (workers <= 1 || nb <= 1) {
    for (uint64_t bi = 0; bi < nb; ++bi) body(bi);
    return;
  }
  std::atomic<uint64_t> next{0};
  auto loop = [&] {
    for (uint64_t bi; (bi = next.fetch_add(1)) < nb;) body(bi);
  };
  std::vector<std::thread> pool;
  const int wc = int(std::min<uint64_t>(uint64_t(workers), nb));
  pool.reserve(wc);
  for (int i = 0; i < wc; ++i) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
}

}  // namespace bernsup::detail
