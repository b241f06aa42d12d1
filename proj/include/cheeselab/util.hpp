#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace cheeselab::util {

using Complex = std::complex<double>;

// SplitMix64: tiny, portable, bit-stable across platforms. Used for all
// deterministic pseudo-randomness (ring phases, test-case selection).
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  uint64_t next_below(uint64_t n) { return next() % n; }

  int next_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(next_below(static_cast<uint64_t>(hi - lo + 1)));
  }

 private:
  uint64_t state_;
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
  SplitMix64 rng(a ^ (0x9e3779b97f4a7c15ULL + b));
  rng.next();
  return rng.next();
}

// Additive low-discrepancy sequences (Kronecker / R2). Deterministic for a
// fixed seed offset; preferred over raw pseudo-random draws wherever a sup or
// a measure is estimated by sampling.
inline double kronecker_1d(uint64_t i, uint64_t seed) {
  constexpr double kGolden = 0.6180339887498948482;
  double offset = static_cast<double>(mix_seed(seed, 0x1d) >> 11) * 0x1.0p-53;
  double v = offset + static_cast<double>(i + 1) * kGolden;
  return v - static_cast<uint64_t>(v);
}

inline std::pair<double, double> kronecker_2d(uint64_t i, uint64_t seed) {
  // plastic-constant sequence (R2)
  constexpr double kA1 = 0.7548776662466927;
  constexpr double kA2 = 0.5698402909980532;
  double o1 = static_cast<double>(mix_seed(seed, 0x2d) >> 11) * 0x1.0p-53;
  double o2 = static_cast<double>(mix_seed(seed, 0x3d) >> 11) * 0x1.0p-53;
  double u = o1 + static_cast<double>(i + 1) * kA1;
  double v = o2 + static_cast<double>(i + 1) * kA2;
  return {u - static_cast<uint64_t>(u), v - static_cast<uint64_t>(v)};
}

// Kahan compensated accumulator for complex values.
class KahanSum {
 public:
  void add(Complex x) {
    add_part(x.real(), sum_re_, c_re_);
    add_part(x.imag(), sum_im_, c_im_);
  }
  Complex value() const { return {sum_re_, sum_im_}; }

 private:
  static void add_part(double x, double& sum, double& comp) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double sum_re_ = 0, sum_im_ = 0, c_re_ = 0, c_im_ = 0;
};

// Fixed 17-significant-digit decimal formatting: round-trips IEEE doubles
// exactly, keeps emitted artifacts byte-stable.
inline std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Thread cap from CHEESE_LAB_THREADS; defaults to 1 (serial).
int thread_cap();

// Runs body(i) for i in [0, n); body must write only to per-index slots so
// results do not depend on the thread count.
void parallel_for(long n, const std::function<void(long)>& body);

}  // namespace cheeselab::util
