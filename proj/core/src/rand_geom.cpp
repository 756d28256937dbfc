#include "condana/rand_geom.hpp"

#include <cmath>
#include <numbers>

#include "condana/errors.hpp"

namespace condana {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_index) {
  return mix64(mix64(seed) ^ mix64(stream_index ^ 0x6a09e667f3bcc909ULL));
}

}  // namespace

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed),
      stream_index_(stream_index),
      derived_seed_(derive_seed(seed, stream_index)),
      engine_(derived_seed_) {}

double SampleStream::uniform01() {
  // 53 high bits, centred in their cell: never exactly 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double SampleStream::uniform_symmetric() { return 2.0 * uniform01() - 1.0; }

double SampleStream::normal() { return inverse_normal_cdf(uniform01()); }

SampleStream SampleStream::substream(std::uint64_t index) const {
  return SampleStream(derived_seed_, index);
}

std::vector<SampleStream> SampleStream::split(std::size_t k) const {
  std::vector<SampleStream> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(substream(i));
  return out;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -INFINITY;
    if (p == 1.0) return INFINITY;
    throw DomainError("inverse_normal_cdf: p outside [0, 1]");
  }
  // Acklam's rational approximation (relative error < 1.15e-9) ...
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // ... polished by one Halley step against the erfc-based CDF.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

BallRegion BallRegion::perturbation(std::span<const double> x, double delta) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return BallRegion{std::vector<double>(x.begin(), x.end()), delta * std::sqrt(sq)};
}

void BallRegion::validate() const {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw DomainError("BallRegion: radius must be finite and non-negative");
  }
}

CubeRegion CubeRegion::perturbation(std::span<const double> x, double delta) {
  CubeRegion region{std::vector<double>(x.begin(), x.end()), std::vector<double>(x.size())};
  for (std::size_t i = 0; i < x.size(); ++i) region.half_widths[i] = delta * std::abs(x[i]);
  return region;
}

void CubeRegion::validate() const {
  if (half_widths.size() != center.size()) {
    throw DimensionError("CubeRegion: half_widths and center differ in length");
  }
  for (double h : half_widths) {
    if (!(h >= 0.0) || !std::isfinite(h)) {
      throw DomainError("CubeRegion: half widths must be finite and non-negative");
    }
  }
}

void sample_unit_sphere(SampleStream& stream, std::span<double> out) {
  if (out.empty()) return;
  for (;;) {
    double sq = 0.0;
    for (double& v : out) {
      v = stream.normal();
      sq += v * v;
    }
    if (sq > 0.0) {
      const double inv = 1.0 / std::sqrt(sq);
      for (double& v : out) v *= inv;
      return;
    }
  }
}

void sample_unit_ball(SampleStream& stream, std::span<double> out) {
  if (out.empty()) return;
  sample_unit_sphere(stream, out);
  const double r = std::pow(stream.uniform01(), 1.0 / static_cast<double>(out.size()));
  for (double& v : out) v *= r;
}

void sample_unit_cube(SampleStream& stream, std::span<double> out) {
  for (double& v : out) v = stream.uniform_symmetric();
}

std::vector<double> sample_ball(const BallRegion& region, SampleStream& stream) {
  region.validate();
  std::vector<double> v(region.center.size());
  if (region.radius == 0.0) return region.center;
  sample_unit_ball(stream, v);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = region.center[i] + region.radius * v[i];
  return v;
}

std::vector<double> sample_cube(const CubeRegion& region, SampleStream& stream) {
  region.validate();
  std::vector<double> v(region.center.size());
  sample_unit_cube(stream, v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = region.center[i] + region.half_widths[i] * v[i];
  }
  return v;
}

}  // namespace condana
