#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace hjcone {

inline constexpr const char* kVersion = "0.1.0";

// SplitMix64 step; used to derive independent seed streams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream derivation: every (master, tag...) pair names one
// reproducible stream, independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t s = master ^ (0x6a09e667f3bcc909ULL + tag * 0x9e3779b97f4a7c15ULL);
  splitmix64(s);
  return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag1, std::uint64_t tag2) {
  return derive_seed(derive_seed(master, tag1), tag2);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t tag) {
  return std::mt19937_64(derive_seed(master, tag));
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t tag1, std::uint64_t tag2) {
  return std::mt19937_64(derive_seed(master, tag1, tag2));
}

// Pairwise summation: order-independent reduction used when replica results
// are collected from parallel workers.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

inline MeanStderr mean_stderr(std::span<const double> v) {
  MeanStderr out;
  out.n = v.size();
  if (v.empty()) return out;
  out.mean = pairwise_sum(v) / static_cast<double>(v.size());
  if (v.size() < 2) return out;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
  out.stderr_ = std::sqrt(var / static_cast<double>(v.size()));
  return out;
}

// Additive quasi-random (Kronecker) sequence on [0,1)^dim; deterministic
// low-discrepancy sweep used for Lipschitz-constant estimation.
inline std::vector<double> kronecker_point(std::size_t index, std::size_t dim) {
  static constexpr double primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                      47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101};
  std::vector<double> x(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double alpha = std::sqrt(primes[j % (sizeof(primes) / sizeof(primes[0]))]);
    double v = (static_cast<double>(index + 1)) * alpha;
    x[j] = v - std::floor(v);
  }
  return x;
}

}  // namespace hjcone
