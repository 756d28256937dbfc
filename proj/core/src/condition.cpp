#include "condana/condition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "condana/closed_forms.hpp"
#include "condana/errors.hpp"

namespace condana {

namespace {

constexpr int kMaxRedraws = 64;
constexpr std::size_t kMaxPowerIterations = 10000;
constexpr double kPowerTolerance = 1e-12;
constexpr std::uint64_t kPowerStartSeed = 0x5157a7e5eedULL;

struct PartialMoments {
  Moments value;
  Moments log2;
  std::size_t underflow = 0;
};

RatioEstimates finish(const std::vector<PartialMoments>& partials, double confidence,
                      std::size_t* underflow = nullptr) {
  PartialMoments total;
  for (const auto& p : partials) {
    total.value.merge(p.value);
    total.log2.merge(p.log2);
    total.underflow += p.underflow;
  }
  if (underflow != nullptr) *underflow = total.underflow;
  RatioEstimates out{make_estimate(total.value, confidence), make_estimate(total.log2, confidence),
                     true};
  if (total.log2.count == 0) out.log_defined = false;
  return out;
}

RatioEstimates zero_quantity(std::size_t samples) {
  RatioEstimates out;
  out.value.samples = samples;
  out.log_defined = false;
  return out;
}

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double largest_eigenvalue_2x2(double a, double b, double d) {
  // [[a, b], [b, d]] symmetric positive semidefinite.
  const double half_trace = 0.5 * (a + d);
  const double half_gap = 0.5 * (a - d);
  return half_trace + std::hypot(half_gap, b);
}

DeltaPoint normwise_at_delta(const Problem& p, std::span<const double> x, const Vector& fx,
                             double delta, const EstimatorConfig& cfg) {
  const double radius = delta * norm2(x);
  const double denom = delta * norm2(fx);
  const std::size_t m = p.m;
  auto partials = run_chunks<PartialMoments>(
      cfg.samples, cfg.stream, cfg.threads, [&](SampleStream& stream, std::size_t count) {
        PartialMoments part;
        Vector u(m);
        Vector xp(m);
        for (std::size_t s = 0; s < count; ++s) {
          sample_unit_ball(stream, u);
          bool moved = false;
          for (std::size_t i = 0; i < m; ++i) {
            xp[i] = x[i] + radius * u[i];
            moved = moved || xp[i] != x[i];
          }
          Vector fp = evaluate(p, xp);
          for (std::size_t i = 0; i < fp.size(); ++i) fp[i] -= fx[i];
          const double q = norm2(fp) / denom;
          part.value.add(q);
          if (!moved || q == 0.0) {
            ++part.underflow;
          } else {
            part.log2.add(std::log2(q));
          }
        }
        return part;
      });
  DeltaPoint point;
  point.delta = delta;
  std::size_t underflow = 0;
  point.estimate = finish(partials, cfg.confidence, &underflow);
  point.underflow = underflow > 0;
  return point;
}

DeltaPoint componentwise_at_delta(const Problem& p, std::span<const double> x, const Vector& fx,
                                  std::size_t j, double delta, const EstimatorConfig& cfg) {
  const double denom = delta * std::abs(fx[j]);
  const std::size_t m = p.m;
  auto partials = run_chunks<PartialMoments>(
      cfg.samples, cfg.stream, cfg.threads, [&](SampleStream& stream, std::size_t count) {
        PartialMoments part;
        Vector u(m);
        Vector xp(m);
        for (std::size_t s = 0; s < count; ++s) {
          sample_unit_cube(stream, u);
          bool moved = false;
          // x_i (1 + delta u_i) is uniform on CP(x, delta) and pairs sample by
          // sample with the linearized integrand u^T g.
          for (std::size_t i = 0; i < m; ++i) {
            xp[i] = x[i] + delta * x[i] * u[i];
            moved = moved || xp[i] != x[i];
          }
          const double q = std::abs(evaluate(p, xp)[j] - fx[j]) / denom;
          part.value.add(q);
          if (!moved || q == 0.0) {
            ++part.underflow;
          } else {
            part.log2.add(std::log2(q));
          }
        }
        return part;
      });
  DeltaPoint point;
  point.delta = delta;
  std::size_t underflow = 0;
  point.estimate = finish(partials, cfg.confidence, &underflow);
  point.underflow = underflow > 0;
  return point;
}

}  // namespace

void EstimatorConfig::validate() const {
  if (samples < 100) throw DomainError("EstimatorConfig: samples must be >= 100");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("EstimatorConfig: confidence must lie in (0, 1)");
  }
  if (mode == EstimatorMode::finite_delta) {
    if (deltas.empty()) throw DomainError("EstimatorConfig: finite_delta mode needs deltas");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (!(deltas[i] > 0.0)) throw DomainError("EstimatorConfig: deltas must be positive");
      if (i > 0 && !(deltas[i] < deltas[i - 1])) {
        throw DomainError("EstimatorConfig: deltas must be strictly decreasing");
      }
    }
  }
}

double spectral_norm(const Matrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw NonFiniteError("spectral_norm: non-finite entry");
  }
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  if (rows == 0 || cols == 0 || all_zero(a.data())) return 0.0;
  if (rows == 1 || cols == 1) return norm2(a.data());

  // Gram operator on the smaller side: v -> A^T A v (cols) or A A^T v (rows).
  const bool use_cols = cols <= rows;
  const std::size_t dim = use_cols ? cols : rows;
  auto gram = [&](const Vector& v) {
    return use_cols ? multiply_transposed(a, multiply(a, v)) : multiply(a, multiply_transposed(a, v));
  };

  if (dim == 2) {
    const Vector g0 = gram({1.0, 0.0});
    const Vector g1 = gram({0.0, 1.0});
    return std::sqrt(largest_eigenvalue_2x2(g0[0], 0.5 * (g0[1] + g1[0]), g1[1]));
  }

  SampleStream start(kPowerStartSeed);
  Vector v(dim);
  sample_unit_sphere(start, v);
  double lambda = 0.0;
  double residual = 0.0;
  for (std::size_t it = 0; it < kMaxPowerIterations; ++it) {
    Vector w = gram(v);
    const double next = dot(v, w);
    residual = 0.0;
    for (std::size_t i = 0; i < dim; ++i) residual += (w[i] - next * v[i]) * (w[i] - next * v[i]);
    residual = std::sqrt(residual);
    const double wn = norm2(w);
    if (wn == 0.0) {
      // Start landed in the null space; restart from a fresh direction.
      sample_unit_sphere(start, v);
      continue;
    }
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / wn;
    if (it > 0 && std::abs(next - lambda) <= kPowerTolerance * next) {
      return std::sqrt(std::max(next, dot(v, gram(v))));
    }
    lambda = next;
  }
  throw ConvergenceError("spectral_norm: power iteration did not converge", v, residual);
}

ConditionNumber wnc(const Problem& p, std::span<const double> x) {
  const Vector fx = evaluate(p, x);
  const double fn = norm2(fx);
  if (fn == 0.0) return ConditionNumber::infinity();
  return {norm2(x) * spectral_norm(jacobian(p, x)) / fn, false};
}

Vector componentwise_weights(const Jacobian& jac, std::size_t j) {
  const auto row = jac.entries.row(j);
  Vector g(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) g[i] = jac.point[i] * row[i];
  return g;
}

ConditionNumber wcc(const Problem& p, std::span<const double> x, std::size_t j) {
  if (j >= p.n) throw DimensionError("wcc: output index out of range");
  const Vector fx = evaluate(p, x);
  if (fx[j] == 0.0) return ConditionNumber::infinity();
  return {norm1(componentwise_weights(jacobian(p, x), j)) / std::abs(fx[j]), false};
}

RatioEstimates estimate_normwise(const Matrix& jt, double scale, const EstimatorConfig& cfg) {
  cfg.validate();
  if (scale == 0.0 || all_zero(jt.data())) return zero_quantity(cfg.samples);
  const std::size_t m = jt.cols();
  const std::size_t n = jt.rows();
  auto partials = run_chunks<PartialMoments>(
      cfg.samples, cfg.stream, cfg.threads, [&](SampleStream& stream, std::size_t count) {
        PartialMoments part;
        Vector u(m);
        Vector y(n);
        for (std::size_t s = 0; s < count; ++s) {
          double q = 0.0;
          // q = 0 has probability zero unless G^T is rank deficient along u;
          // redraw so log2 stays finite.
          for (int attempt = 0; attempt < kMaxRedraws && q == 0.0; ++attempt) {
            sample_unit_ball(stream, u);
            multiply(jt, u, y);
            q = scale * norm2(y);
          }
          if (q == 0.0) throw NonFiniteError("estimate_normwise: repeated zero samples");
          part.value.add(q);
          part.log2.add(std::log2(q));
        }
        return part;
      });
  return finish(partials, cfg.confidence);
}

RatioEstimates estimate_componentwise(std::span<const double> g, double scale,
                                      const EstimatorConfig& cfg) {
  cfg.validate();
  if (scale == 0.0 || all_zero(g)) return zero_quantity(cfg.samples);
  const std::size_t m = g.size();
  auto partials = run_chunks<PartialMoments>(
      cfg.samples, cfg.stream, cfg.threads, [&](SampleStream& stream, std::size_t count) {
        PartialMoments part;
        Vector u(m);
        for (std::size_t s = 0; s < count; ++s) {
          double q = 0.0;
          for (int attempt = 0; attempt < kMaxRedraws && q == 0.0; ++attempt) {
            sample_unit_cube(stream, u);
            q = scale * std::abs(dot(u, g));
          }
          if (q == 0.0) throw NonFiniteError("estimate_componentwise: repeated zero samples");
          part.value.add(q);
          part.log2.add(std::log2(q));
        }
        return part;
      });
  return finish(partials, cfg.confidence);
}

std::optional<double> exact_mean_abs_projection(std::span<const double> g) {
  std::vector<long double> a;
  for (double v : g) {
    if (v != 0.0) a.push_back(std::fabs(static_cast<long double>(v)));
  }
  if (a.empty()) return 0.0;
  if (a.size() > 3) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  if (*lo < 1e-4L * *hi) return std::nullopt;

  // E|sum a_i u_i| = (prod 2a_i)^{-1} sum over sign vectors e of
  // (prod e_i) Phi_k(sum e_i a_i), Phi_k the k-fold antiderivative of |s|:
  // Phi_k(s) = sign(s)^k |s|^{k+1} / (k+1)!.
  const std::size_t k = a.size();
  long double factorial = 1.0L;
  for (std::size_t i = 2; i <= k + 1; ++i) factorial *= static_cast<long double>(i);
  long double total = 0.0L;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    long double s = 0.0L;
    int sign = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        s -= a[i];
        sign = -sign;
      } else {
        s += a[i];
      }
    }
    long double phi = std::pow(std::fabs(s), static_cast<long double>(k + 1)) / factorial;
    if (k % 2 == 1 && s < 0) phi = -phi;
    total += sign * phi;
  }
  long double denom = 1.0L;
  for (long double v : a) denom *= 2.0L * v;
  return static_cast<double>(total / denom);
}

SncResult snc(const Problem& p, std::span<const double> x, const EstimatorConfig& cfg) {
  cfg.validate();
  const Vector fx = evaluate(p, x);
  const double fn = norm2(fx);
  if (fn == 0.0) throw DegenerateOutputError(p.name + ": f(x) = 0, SNC undefined");
  const Jacobian jac = jacobian(p, x);
  const double xn = norm2(x);

  SncResult out;
  if (cfg.mode == EstimatorMode::linearized) {
    out.estimate = estimate_normwise(jac.entries, xn / fn, cfg);
  } else {
    for (double delta : cfg.deltas) out.trend.push_back(normwise_at_delta(p, x, fx, delta, cfg));
    out.estimate = out.trend.back().estimate;
  }
  if (p.n == 1) {
    const double worst = xn * norm2(jac.entries.data()) / fn;
    const auto exact = snc_wnc_exact(static_cast<unsigned>(p.m));
    out.exact = worst * exact.ratio;
    if (worst > 0.0) out.exact_snlp = std::log2(worst) + exact.gap_bits;
  }
  return out;
}

SccResult scc(const Problem& p, std::span<const double> x, std::size_t j,
              const EstimatorConfig& cfg) {
  cfg.validate();
  if (j >= p.n) throw DimensionError("scc: output index out of range");
  const Vector fx = evaluate(p, x);
  if (fx[j] == 0.0) throw DegenerateOutputError(p.name + ": f_j(x) = 0, SCC undefined");
  const Jacobian jac = jacobian(p, x);
  const Vector g = componentwise_weights(jac, j);
  const double scale = 1.0 / std::abs(fx[j]);

  SccResult out;
  if (cfg.mode == EstimatorMode::linearized) {
    out.estimate = estimate_componentwise(g, scale, cfg);
  } else {
    for (double delta : cfg.deltas) {
      out.trend.push_back(componentwise_at_delta(p, x, fx, j, delta, cfg));
    }
    out.estimate = out.trend.back().estimate;
  }
  if (const auto e = exact_mean_abs_projection(g)) out.exact = *e * scale;
  return out;
}

bool ConditionReport::any_infinite() const {
  return wnc.infinite || std::any_of(outputs.begin(), outputs.end(),
                                     [](const OutputCondition& o) { return o.wcc.infinite; });
}

ConditionReport report(const Problem& p, std::span<const double> x, const EstimatorConfig& cfg) {
  cfg.validate();
  const Vector fx = evaluate(p, x);
  const Jacobian jac = jacobian(p, x);

  ConditionReport r;
  r.m = p.m;
  r.n = p.n;
  r.k = std::min(p.m, p.n);
  r.samples = cfg.samples;

  const double fn = norm2(fx);
  if (fn == 0.0) {
    r.wnc = ConditionNumber::infinity();
    r.snc = zero_quantity(cfg.samples);
  } else {
    r.wnc = {norm2(x) * spectral_norm(jac) / fn, false};
    auto s = snc(p, x, cfg);
    r.snc = s.estimate;
    r.snc_exact = s.exact;
    r.snlp_exact = s.exact_snlp;
  }

  for (std::size_t j = 0; j < p.n; ++j) {
    OutputCondition o;
    o.j = j;
    o.f_j = fx[j];
    if (fx[j] == 0.0) {
      o.wcc = ConditionNumber::infinity();
      o.scc = zero_quantity(cfg.samples);
    } else {
      o.wcc = {norm1(componentwise_weights(jac, j)) / std::abs(fx[j]), false};
      auto s = scc(p, x, j, cfg);
      o.scc = s.estimate;
      o.scc_exact = s.exact;
    }
    r.outputs.push_back(std::move(o));
  }
  return r;
}

std::optional<double> convergence_slope(const std::vector<DeltaPoint>& trend, double reference) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& t : trend) {
    const double err = std::abs(t.estimate.value.mean - reference);
    if (!t.underflow && err > 0.0) pts.emplace_back(std::log(t.delta), std::log(err));
  }
  if (pts.size() < 2) return std::nullopt;
  double sx = 0.0, sy = 0.0;
  for (const auto& [lx, ly] : pts) {
    sx += lx;
    sy += ly;
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [lx, ly] : pts) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

}  // namespace condana
