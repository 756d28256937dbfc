#pragma once

// Deterministic parallel Monte Carlo: samples are cut into fixed-size chunks,
// chunk c draws from stream.substream(c), and per-chunk partial results are
// merged in chunk order. Output is therefore independent of the thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

#include "condana/rand_geom.hpp"

namespace condana {

/// Streaming mean, variance and third central moment (mergeable).
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;

  void add(double x);
  void merge(const Moments& other);

  double variance() const;  // sample variance (n - 1)
  double stddev() const;
  double standard_error() const;
  double skewness() const;
};

/// A Monte Carlo mean with its confidence half-width.
struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;
  double standard_error = 0.0;
  double skewness = 0.0;
  std::size_t samples = 0;
};

/// Two-sided normal quantile: z with P(|Z| <= z) = confidence.
double z_for_confidence(double confidence);

Estimate make_estimate(const Moments& moments, double confidence);

inline constexpr std::size_t kChunkSize = 4096;

/// 0 means std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned requested);

/// Runs fn(chunk_stream, chunk_samples) -> Partial for every chunk of
/// `samples` and returns the partials in chunk order.
template <typename Partial, typename Fn>
std::vector<Partial> run_chunks(std::size_t samples, const SampleStream& stream, unsigned threads,
                                Fn fn) {
  const std::size_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<Partial> partials(chunks);
  auto work = [&](std::size_t c) {
    SampleStream chunk_stream = stream.substream(c);
    const std::size_t count = std::min(kChunkSize, samples - c * kChunkSize);
    partials[c] = fn(chunk_stream, count);
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) work(c);
    return partials;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) work(c);
    });
  }
  pool.clear();
  return partials;
}

}  // namespace condana
