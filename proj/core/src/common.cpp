#include "bernsup/common.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <cstring>

namespace bernsup {

const char* mode_name(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

Mode parse_mode(std::string_view s) {
  if (s == "exact") return Mode::Exact;
  if (s == "float") return Mode::Float;
  fail(Errc::InvalidParams, "unknown mode '" + std::string(s) + "'");
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonMonotoneValues: return "NonMonotoneValues";
    case Errc::NegativeValue: return "NegativeValue";
    case Errc::UnsortedTimes: return "UnsortedTimes";
    case Errc::MissingTimeZero: return "MissingTimeZero";
    case Errc::TimeOutOfRange: return "TimeOutOfRange";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TooManyVariables: return "TooManyVariables";
    case Errc::EmptyPointSet: return "EmptyPointSet";
    case Errc::ZeroSamples: return "ZeroSamples";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::NonNestedCounts: return "NonNestedCounts";
    case Errc::ParamOutOfRange: return "ParamOutOfRange";
    case Errc::InfeasiblePreset: return "InfeasiblePreset";
    case Errc::InfeasibleDimension: return "InfeasibleDimension";
    case Errc::BadFile: return "BadFile";
  }
  return "Error";
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

bool is_dyadic(double v) {
  if (!std::isfinite(v)) return false;
  const double s = v * kDyadicScale;  // exact: scaling by a power of two
  return s == std::floor(s) && std::fabs(s) <= 9007199254740992.0;
}

double snap_dyadic(double v) { return std::nearbyint(v * kDyadicScale) / kDyadicScale; }

double snap_dyadic_up(double v) { return std::ceil(v * kDyadicScale) / kDyadicScale; }

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t Rng::next_below(uint64_t n) {
  if (n == 0) fail(Errc::InvalidParams, "next_below(0)");
  // rejection sampling keeps the draw unbiased and platform independent
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::next_dyadic(int bits, bool exclude_zero) {
  const uint64_t den = 1ull << bits;
  const uint64_t k = exclude_zero ? 1 + next_below(den) : next_below(den + 1);
  return double(k) / double(den);
}

void Digest::add_bytes(const void* p, size_t n) {
  const unsigned char* b = static_cast<const unsigned char*>(p);
  for (size_t i = 0; i < n; ++i) {
    h_ ^= b[i];
    h_ *= 1099511628211ull;
  }
}

void Digest::add_double(double v) {
  uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  add_u64(bits);
}

void Digest::add_u64(uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (unsigned char)(v >> (8 * i));
  add_bytes(b, 8);
}

void Digest::add_str(std::string_view s) { add_bytes(s.data(), s.size()); }

std::string Digest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h_);
  return std::string(buf);
}

double round_sig12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace bernsup
