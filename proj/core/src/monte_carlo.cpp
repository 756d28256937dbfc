#include "condana/monte_carlo.hpp"

#include <cmath>

#include "condana/errors.hpp"

namespace condana {

void Moments::add(double x) {
  const double n1 = static_cast<double>(count);
  ++count;
  const double n = static_cast<double>(count);
  const double delta = x - mean;
  const double delta_n = delta / n;
  const double term = delta * delta_n * n1;
  mean += delta_n;
  m3 += term * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
  m2 += term;
}

void Moments::merge(const Moments& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(other.count);
  const double n = na + nb;
  const double delta = other.mean - mean;
  const double m2_new = m2 + other.m2 + delta * delta * na * nb / n;
  const double m3_new = m3 + other.m3 + delta * delta * delta * na * nb * (na - nb) / (n * n) +
                        3.0 * delta * (na * other.m2 - nb * m2) / n;
  mean += delta * nb / n;
  m2 = m2_new;
  m3 = m3_new;
  count += other.count;
}

double Moments::variance() const {
  return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
}

double Moments::stddev() const { return std::sqrt(variance()); }

double Moments::standard_error() const {
  return count > 0 ? stddev() / std::sqrt(static_cast<double>(count)) : 0.0;
}

double Moments::skewness() const {
  if (count < 3 || m2 <= 0.0) return 0.0;
  const double n = static_cast<double>(count);
  return std::sqrt(n) * m3 / std::pow(m2, 1.5);
}

double z_for_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("confidence must lie in (0, 1)");
  }
  return inverse_normal_cdf(0.5 + confidence / 2.0);
}

Estimate make_estimate(const Moments& moments, double confidence) {
  const double se = moments.standard_error();
  return {moments.mean, z_for_confidence(confidence) * se, se, moments.skewness(), moments.count};
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace condana
