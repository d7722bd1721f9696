#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bernsup {

// Arithmetic mode for threshold events. Exact mode requires every coefficient
// value to lie on the dyadic grid p / 2^kDyadicBits; path sums are then exact
// doubles and every ">= u" classification is tie-free. Float mode accepts
// arbitrary values and classifies atoms within kFloatTieTol of a threshold as
// lying on it.
enum class Mode { Exact, Float };

inline constexpr int kDyadicBits = 20;
inline constexpr double kDyadicScale = 1048576.0;  // 2^kDyadicBits
inline constexpr double kFloatTieTol = 1e-12;

const char* mode_name(Mode m);
Mode parse_mode(std::string_view s);

enum class Errc {
  NonMonotoneValues,
  NegativeValue,
  UnsortedTimes,
  MissingTimeZero,
  TimeOutOfRange,
  InvalidParams,
  DimensionMismatch,
  TooManyVariables,
  EmptyPointSet,
  ZeroSamples,
  ZeroVariance,
  NonNestedCounts,
  ParamOutOfRange,
  InfeasiblePreset,
  InfeasibleDimension,
  BadFile,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

/// True when v is exactly k / 2^kDyadicBits for an integer k with |k| <= 2^53.
bool is_dyadic(double v);
/// Nearest grid point k / 2^kDyadicBits.
double snap_dyadic(double v);
/// Smallest grid point >= v.
double snap_dyadic_up(double v);

/// Mode-aware ">=".
inline bool geq(double a, double b, Mode mode) {
  return mode == Mode::Exact ? a >= b : a >= b - kFloatTieTol;
}

// ---------------------------------------------------------------------------
// Counter-based pseudo randomness.
//
// rng_at(seed, k) is the splitmix64 output at state seed + (k+1)*golden; it is
// a pure function of (seed, k), so independent sample ranges can be evaluated
// on independent workers and merged without any shared state.
// ---------------------------------------------------------------------------

uint64_t mix64(uint64_t z);

inline uint64_t rng_at(uint64_t seed, uint64_t counter) {
  return mix64(seed + (counter + 1) * 0x9e3779b97f4a7c15ull);
}

/// 53-bit mantissa double in [0, 1).
inline double unit_from_bits(uint64_t bits) {
  return double(bits >> 11) * 0x1.0p-53;
}

/// Sequential convenience stream over the counter-based generator.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed) {}

  uint64_t next_u64() { return rng_at(seed_, ctr_++); }
  double next_unit() { return unit_from_bits(next_u64()); }

  /// Unbiased draw from [0, n).
  uint64_t next_below(uint64_t n);

  /// Dyadic grid value: k / 2^bits with k in [lo_k, 2^bits].
  double next_dyadic(int bits, bool exclude_zero);

  /// Derive an independent stream.
  Rng fork(uint64_t salt) const { return Rng(mix64(seed_ ^ mix64(salt))); }

 private:
  uint64_t seed_;
  uint64_t ctr_ = 0;
};

// ---------------------------------------------------------------------------

/// FNV-1a digest over a canonical byte serialization; used to identify check
/// inputs and families in reports.
class Digest {
 public:
  void add_bytes(const void* p, size_t n);
  void add_double(double v);
  void add_u64(uint64_t v);
  void add_str(std::string_view s);
  std::string hex() const;

 private:
  uint64_t h_ = 1469598103934665603ull;
};

/// Compensated (Kahan) accumulator for float-mode expectations.
struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

/// Exact probability k / 2^den2exp from enumeration counts.
struct Dyadic {
  uint64_t num = 0;
  int den2exp = 0;
  double value() const { return std::ldexp(double(num), -den2exp); }
};

/// Format a double with 12 significant digits (used for reported constants).
double round_sig12(double v);

}  // namespace bernsup
