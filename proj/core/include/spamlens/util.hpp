#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace spamlens {

/// Raised for bad input data (malformed files, inconsistent records,
/// infeasible configurations). The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic RNG. The engine is std::mt19937_64 (bit-exact per the
/// standard); all distributions are implemented here rather than taken
/// from <random> so that streams do not depend on the stdlib version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Standard normal via Box-Muller (two draws per call).
  double normal();
  double normal(double mu, double sigma) { return mu + sigma * normal(); }
  double lognormal(double mu, double sigma) {
    return std::exp(normal(mu, sigma));
  }

  /// Poisson count by inversion; intended for small lambda.
  int poisson(double lambda);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Derives an independent child seed from a master seed and task index,
  /// so parallel and serial schedules see identical streams.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x9e3779b97f4a7c15ull));
  }

 private:
  std::mt19937_64 engine_;
};

/// Runs fn(0..n-1) on up to `threads` workers. Tasks must be independent;
/// callers keep determinism by writing results into index-addressed slots.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

/// Inverse standard normal CDF (Acklam's rational approximation,
/// |relative error| < 1.2e-9). Used by pessimistic-error pruning.
double inverse_normal_cdf(double p);

bool starts_with_ci(std::string_view s, std::string_view prefix);
std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);

}  // namespace spamlens
