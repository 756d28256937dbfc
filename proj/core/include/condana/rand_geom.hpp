#pragma once

// Deterministic sampling of the perturbation regions: the ball
// P(x, delta) = B(x, delta*|x|) and the box CP(x, delta) with half widths
// delta*|x_i|.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace condana {

/// Seedable, splittable source of pseudorandom numbers.
///
/// The value sequence is a pure function of (seed, stream_index). Streams are
/// cheap to copy and may be moved between threads, but one instance must not
/// be advanced from two threads at once; use substream()/split() instead.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed = 42, std::uint64_t stream_index = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform01();

  /// Uniform on [-1, 1).
  double uniform_symmetric();

  /// Standard normal by inverse-CDF transform of uniform01().
  double normal();

  /// Child stream number `index`; independent of the parent's position.
  SampleStream substream(std::uint64_t index) const;

  /// Streams substream(0) ... substream(k - 1).
  std::vector<SampleStream> split(std::size_t k) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t derived_seed_;
  std::mt19937_64 engine_;
};

inline std::vector<SampleStream> split(const SampleStream& stream, std::size_t k) {
  return stream.split(k);
}

/// splitmix64 finaliser; the fixed mixing function behind sub-stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Quantile function of N(0,1) for p in (0, 1), accurate to ~1e-15 relative.
double inverse_normal_cdf(double p);

/// Ball {v : |v - center| <= radius}.
struct BallRegion {
  std::vector<double> center;
  double radius = 1.0;

  /// P(x, delta): the ball of radius delta*|x| around x.
  static BallRegion perturbation(std::span<const double> x, double delta);
  void validate() const;
};

/// Box with entry i in [center_i - half_widths_i, center_i + half_widths_i].
struct CubeRegion {
  std::vector<double> center;
  std::vector<double> half_widths;

  /// CP(x, delta): half widths delta*|x_i|.
  static CubeRegion perturbation(std::span<const double> x, double delta);
  void validate() const;
};

/// Fills `out` with a point uniform in the unit ball B(0,1) of dimension
/// out.size(): isotropic normal direction scaled by U^(1/m).
void sample_unit_ball(SampleStream& stream, std::span<double> out);

/// Fills `out` with a point uniform on the unit sphere.
void sample_unit_sphere(SampleStream& stream, std::span<double> out);

/// Fills `out` with independent uniforms on [-1, 1].
void sample_unit_cube(SampleStream& stream, std::span<double> out);

std::vector<double> sample_ball(const BallRegion& region, SampleStream& stream);
std::vector<double> sample_cube(const CubeRegion& region, SampleStream& stream);

}  // namespace condana
