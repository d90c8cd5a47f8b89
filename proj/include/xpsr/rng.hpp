#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "xpsr/common.hpp"

namespace xpsr {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic splitmix64 stream. Streams are derived by forking on a
// label or index, so any draw is a pure function of (seed, fork path,
// draw position) — replay and resumption never depend on hidden state.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(mix64(seed ^ 0x6a09e667f3bcc908ull)) {}

  Rng fork(const std::string& label) const {
    return Rng(FromState{}, mix64(state_ ^ fnv1a(label)));
  }
  Rng fork(std::uint64_t idx) const {
    return Rng(FromState{}, mix64(state_ ^ (idx * 0xff51afd7ed558ccdull + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = std::uint64_t(hi - lo) + 1;
    return lo + std::int64_t(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  template <typename S>
  void fill_normal(Mat<S>& m, double scale = 1.0) {
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i) m(i, j) = S(normal() * scale);
  }

  template <typename S>
  Mat<S> normal_mat(Index rows, Index cols, double scale = 1.0) {
    Mat<S> m(rows, cols);
    fill_normal(m, scale);
    return m;
  }

private:
  struct FromState {};
  Rng(FromState, std::uint64_t s) : state_(s) {}

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace xpsr
