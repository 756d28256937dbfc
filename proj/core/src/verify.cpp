#include "condana/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "condana/closed_forms.hpp"
#include "condana/condition.hpp"
#include "condana/errors.hpp"
#include "condana/linalg.hpp"
#include "condana/monte_carlo.hpp"
#include "condana/problems.hpp"
#include "condana/quadrature.hpp"

namespace condana {

namespace {

constexpr double kLog2e = std::numbers::log2e;

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string dim(const char* key, std::size_t v) { return std::string(key) + "=" + std::to_string(v); }

double relative_tol(double scale, double rel) { return rel * std::max(std::fabs(scale), 1.0); }

EstimatorConfig estimator(const MonteCarloSettings& mc, const SampleStream& stream) {
  EstimatorConfig cfg;
  cfg.samples = mc.samples;
  cfg.stream = stream;
  cfg.confidence = mc.confidence;
  cfg.threads = mc.threads;
  return cfg;
}

// Lower and upper relations of an interval, honouring strictness.
Relation lower_relation(const Interval& iv) { return iv.lo_strict ? Relation::gt : Relation::ge; }
Relation upper_relation(const Interval& iv) { return iv.hi_strict ? Relation::lt : Relation::le; }

void add_interval(Checks& out, const std::string& name, const std::string& instance, double v,
                  const Interval& iv, double tol) {
  out.push_back(make_check(name + ".lower", instance, v, lower_relation(iv), iv.lo, tol));
  out.push_back(make_check(name + ".upper", instance, v, upper_relation(iv), iv.hi, tol));
}

Vector uniform_vector(SampleStream& s, std::size_t m) {
  Vector v(m);
  for (auto& e : v) e = s.uniform_symmetric();
  return v;
}

std::vector<unsigned> filtered(std::vector<unsigned> values, unsigned lo, unsigned hi) {
  std::erase_if(values, [&](unsigned v) { return v < lo || v > hi; });
  return values;
}

std::vector<unsigned> range(unsigned a, unsigned b) {
  std::vector<unsigned> v;
  for (unsigned i = a; i <= b; ++i) v.push_back(i);
  return v;
}

}  // namespace

const char* to_string(Relation r) {
  switch (r) {
    case Relation::le: return "<=";
    case Relation::lt: return "<";
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    case Relation::within: return "~";
  }
  return "?";
}

BoundCheck make_check(std::string name, std::string instance, double computed, Relation relation,
                      double bound, double tolerance) {
  BoundCheck c;
  c.name = std::move(name);
  c.instance = std::move(instance);
  c.computed = computed;
  c.bound = bound;
  c.relation = relation;
  c.tolerance = tolerance;
  switch (relation) {
    case Relation::le:
    case Relation::lt: c.slack = bound - computed; break;
    case Relation::ge:
    case Relation::gt: c.slack = computed - bound; break;
    case Relation::within: c.slack = tolerance - std::fabs(computed - bound); break;
  }
  const bool finite = std::isfinite(computed) && std::isfinite(bound) && std::isfinite(c.slack);
  switch (relation) {
    case Relation::le:
    case Relation::ge: c.passed = finite && c.slack + tolerance >= 0.0; break;
    case Relation::lt:
    case Relation::gt:
      c.passed = finite && c.slack + tolerance > 0.0;
      c.warning = c.passed && c.slack <= 0.0;
      break;
    case Relation::within: c.passed = finite && c.slack >= 0.0; break;
  }
  return c;
}

Checks check_closed_forms(unsigned m_max) {
  Checks out;
  const double pi = std::numbers::pi;
  out.push_back(make_check("wallis.seed", "m=0", wallis_integral(0), Relation::within, pi / 2, 1e-15));
  out.push_back(make_check("wallis.seed", "m=1", wallis_integral(1), Relation::within, 1.0, 0.0));
  out.push_back(make_check("log_cos.seed", "m=0", log_cos_ratio(0), Relation::within,
                           -std::numbers::ln2, 1e-15));
  out.push_back(make_check("log_cos.seed", "m=1", log_cos_ratio(1), Relation::within, -1.0, 1e-15));

  for (unsigned m = 2; m <= m_max; ++m) {
    const double rec = (m - 1.0) / m * wallis_integral(m - 2);
    out.push_back(make_check("wallis.recurrence", dim("m", m), wallis_integral(m), Relation::within,
                             rec, 1e-14 * rec));
    const double lrec = log_cos_ratio(m - 2) - 1.0 / m;
    out.push_back(make_check("log_cos.recurrence", dim("m", m), log_cos_ratio(m), Relation::within,
                             lrec, relative_tol(lrec, 1e-14)));
  }

  for (unsigned m : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 10u, 11u, 12u, 25u, 50u, 100u}) {
    if (m > std::max(m_max, 12u)) continue;
    const double md = m;
    const double i_m = integrate([md](double t) { return std::pow(std::sin(t), md); }, 0.0, pi / 2);
    out.push_back(make_check("wallis.quadrature", dim("m", m), wallis_integral(m), Relation::within,
                             i_m, 1e-10));
    if (m <= 10) {
      const double j_m = integrate(
          [md](double t) { return std::pow(std::sin(t), md) * std::log(std::cos(t)); }, 0.0, pi / 2);
      out.push_back(make_check("log_cos.quadrature", dim("m", m), log_cos_ratio(m),
                               Relation::within, j_m / i_m, 1e-9));
    }
  }

  for (unsigned m = 1; m <= std::min(m_max, 10u); ++m) {
    const double md = m;
    const auto b = ball_moments(m);
    auto radial = [md](auto g) {
      return integrate([md, g](double r) { return md * std::pow(r, md - 1) * g(r); }, 0.0, 1.0);
    };
    const std::string inst = dim("m", m);
    out.push_back(make_check("ball_moments.quadrature", inst + " quantity=e_norm", b.e_norm,
                             Relation::within, radial([](double r) { return r; }), 1e-10));
    out.push_back(make_check("ball_moments.quadrature", inst + " quantity=e_norm_sq", b.e_norm_sq,
                             Relation::within, radial([](double r) { return r * r; }), 1e-10));
    out.push_back(make_check("ball_moments.quadrature", inst + " quantity=e_log_norm",
                             b.e_log_norm, Relation::within,
                             radial([](double r) { return std::log(r); }), 1e-9));
  }

  for (unsigned m = 3; m <= m_max; ++m) {
    const auto c = cos_moments(m);
    const double i2 = wallis_integral(m - 2);
    const std::string inst = dim("m", m);
    const double abs_ref = 1.0 / ((m - 1.0) * i2);
    out.push_back(make_check("cos_moments.identity", inst + " quantity=e_abs_cos", c.e_abs_cos,
                             Relation::within, abs_ref, 1e-13 * abs_ref));
    const double sq_ref = (i2 - wallis_integral(m)) / i2;
    out.push_back(make_check("cos_moments.identity", inst + " quantity=e_cos_sq", c.e_cos_sq,
                             Relation::within, sq_ref, 1e-12 * sq_ref));
    const double log_ref = log_cos_ratio(m - 2);
    out.push_back(make_check("cos_moments.identity", inst + " quantity=e_log_abs_cos",
                             c.e_log_abs_cos, Relation::within, log_ref,
                             relative_tol(log_ref, 1e-13)));
  }

  // The angle between a fixed and a uniform direction has density
  // proportional to sin^{m-2} on [0, pi].
  for (unsigned m : {3u, 4u, 5u, 8u}) {
    if (m > m_max) continue;
    const double p = m - 2.0;
    const double norm = 2.0 * wallis_integral(m - 2);
    const auto c = cos_moments(m);
    auto angle = [&](auto g) {
      return 2.0 *
             integrate([p, g](double t) { return std::pow(std::sin(t), p) * g(std::cos(t)); }, 0.0,
                       pi / 2) /
             norm;
    };
    const std::string inst = dim("m", m);
    out.push_back(make_check("cos_moments.angle_quadrature", inst + " quantity=e_abs_cos",
                             c.e_abs_cos, Relation::within,
                             angle([](double v) { return std::fabs(v); }), 1e-10));
    out.push_back(make_check("cos_moments.angle_quadrature", inst + " quantity=e_cos_sq",
                             c.e_cos_sq, Relation::within, angle([](double v) { return v * v; }),
                             1e-10));
    out.push_back(make_check("cos_moments.angle_quadrature", inst + " quantity=e_log_abs_cos",
                             c.e_log_abs_cos, Relation::within,
                             angle([](double v) { return std::log(std::fabs(v)); }), 1e-9));
  }
  return out;
}

Checks check_moment_sampling(const std::vector<unsigned>& m_list, std::size_t samples,
                             const SampleStream& stream, double sigmas, unsigned threads) {
  Checks out;
  for (unsigned m : m_list) {
    struct Partial {
      Moments norm, norm_sq, log_norm, abs_cos, cos_sq, log_abs_cos;
    };
    const auto parts = run_chunks<Partial>(
        samples, stream.substream(m), threads, [m](SampleStream& s, std::size_t count) {
          Partial p;
          Vector u(m);
          for (std::size_t i = 0; i < count; ++i) {
            sample_unit_ball(s, u);
            const double r = norm2(u);
            p.norm.add(r);
            p.norm_sq.add(r * r);
            p.log_norm.add(std::log(r));
            // Direction fixed at e_1; the angle law is rotation invariant.
            const double c = u[0] / r;
            p.abs_cos.add(std::fabs(c));
            p.cos_sq.add(c * c);
            if (c != 0.0) p.log_abs_cos.add(std::log(std::fabs(c)));
          }
          return p;
        });
    Partial total;
    for (const auto& p : parts) {
      total.norm.merge(p.norm);
      total.norm_sq.merge(p.norm_sq);
      total.log_norm.merge(p.log_norm);
      total.abs_cos.merge(p.abs_cos);
      total.cos_sq.merge(p.cos_sq);
      total.log_abs_cos.merge(p.log_abs_cos);
    }
    const std::string inst = dim("m", m);
    auto add = [&](const char* q, const Moments& mo, double exact) {
      out.push_back(make_check("moment_sampling", inst + " quantity=" + q, mo.mean,
                               Relation::within, exact, sigmas * mo.standard_error()));
    };
    const auto b = ball_moments(m);
    add("e_norm", total.norm, b.e_norm);
    add("e_norm_sq", total.norm_sq, b.e_norm_sq);
    add("e_log_norm", total.log_norm, b.e_log_norm);
    if (m >= 3) {
      const auto c = cos_moments(m);
      add("e_abs_cos", total.abs_cos, c.e_abs_cos);
      add("e_cos_sq", total.cos_sq, c.e_cos_sq);
      add("e_log_abs_cos", total.log_abs_cos, c.e_log_abs_cos);
    }
  }
  return out;
}

Checks check_single_output_ratio(const std::vector<unsigned>& m_list, const MonteCarloSettings& mc,
                                 const SampleStream& stream) {
  Checks out;
  for (unsigned m : m_list) {
    const std::string inst = dim("m", m);
    SampleStream s = stream.substream(m);
    Matrix a(1, m);
    Vector x;
    for (int attempt = 0;; ++attempt) {
      for (std::size_t i = 0; i < m; ++i) a(0, i) = s.uniform_symmetric();
      x = uniform_vector(s, m);
      if (std::fabs(dot(a.row(0), x)) > 1e-12) break;
      if (attempt == 64) throw DegenerateOutputError("could not draw a nonvanishing output");
    }
    const Problem p = linear_problem("random_row", a);
    const auto cfg = estimator(mc, s.substream(1));
    const auto w = wnc(p, x);
    const auto r = snc(p, x, cfg);
    const auto exact = snc_wnc_exact(m);

    out.push_back(make_check("single_output_ratio.sampled", inst + " quantity=ratio",
                             r.estimate.value.mean / w.value, Relation::within, exact.ratio,
                             mc.widen * r.estimate.value.half_width / w.value));
    out.push_back(make_check("single_output_ratio.sampled", inst + " quantity=gap_bits",
                             r.estimate.log2.mean - std::log2(w.value), Relation::within,
                             exact.gap_bits, mc.widen * r.estimate.log2.half_width));
    if (r.exact) {
      out.push_back(make_check("single_output_ratio.estimator_exact", inst, *r.exact / w.value,
                               Relation::within, exact.ratio, 1e-12));
    }

    // E|u| E|cos| and E ln|u| + E ln|cos|, assembled from the moment tables.
    const auto b = ball_moments(m);
    double abs_cos = 1.0;
    double log_cos = 0.0;
    if (m == 2) {
      abs_cos = 2.0 / std::numbers::pi;
      log_cos = -std::numbers::ln2;
    } else if (m >= 3) {
      const auto c = cos_moments(m);
      abs_cos = c.e_abs_cos;
      log_cos = c.e_log_abs_cos;
    }
    out.push_back(make_check("single_output_ratio.assembled", inst + " quantity=ratio",
                             exact.ratio, Relation::within, b.e_norm * abs_cos, 1e-12));
    out.push_back(make_check("single_output_ratio.assembled", inst + " quantity=gap_bits",
                             exact.gap_bits, Relation::within,
                             (b.e_log_norm + log_cos) * kLog2e, 1e-12));

    const auto bounds = normwise_bounds(m, 1);
    add_interval(out, "single_output_ratio.within_bounds", inst + " quantity=ratio", exact.ratio,
                 bounds.ratio, 0.0);
    add_interval(out, "single_output_ratio.within_bounds", inst + " quantity=gap_bits",
                 exact.gap_bits, bounds.gap_bits, 0.0);
  }
  return out;
}

Checks check_normwise_bounds(const std::vector<unsigned>& m_list,
                             const std::vector<unsigned>& n_list, unsigned trials,
                             const MonteCarloSettings& mc, const SampleStream& stream) {
  Checks out;
  std::uint64_t index = 0;
  for (unsigned m : m_list) {
    for (unsigned n : n_list) {
      const auto bounds = normwise_bounds(m, n);
      for (unsigned t = 0; t < trials; ++t) {
        SampleStream s = stream.substream(index++);
        Matrix a(n, m);
        Vector x;
        for (int attempt = 0;; ++attempt) {
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m; ++k) a(i, k) = s.normal();
          x = uniform_vector(s, m);
          if (norm2(multiply(a, x)) > 1e-12) break;
          if (attempt == 64) throw DegenerateOutputError("could not draw a nonvanishing output");
        }
        const Problem p = linear_problem("random_matrix", a);
        const auto w = wnc(p, x);
        const auto r = snc(p, x, estimator(mc, s.substream(1)));
        const std::string inst = dim("m", m) + " " + dim("n", n) + " " + dim("trial", t);
        const double ratio = r.estimate.value.mean / w.value;
        add_interval(out, "normwise_bounds.ratio", inst, ratio, bounds.ratio,
                     mc.widen * r.estimate.value.half_width / w.value);
        add_interval(out, "normwise_bounds.gap_bits", inst,
                     r.estimate.log2.mean - std::log2(w.value), bounds.gap_bits,
                     mc.widen * r.estimate.log2.half_width);
      }
    }
  }
  return out;
}

namespace {

// Random weight vectors for the componentwise checks, by pattern.
Vector weight_pattern(unsigned pattern, std::size_t m, SampleStream& s) {
  Vector g(m, 0.0);
  switch (pattern % 5) {
    case 0:
      for (auto& v : g) v = s.normal();
      break;
    case 1:
      for (auto& v : g) v = s.uniform01();
      break;
    case 2:
      for (auto& v : g)
        if (s.uniform01() < 0.25) v = s.normal();
      if (norm1(g) == 0.0) g[s.next_u64() % m] = 1.0;
      break;
    case 3:
      for (std::size_t i = 0; i < m; ++i)
        g[i] = std::ldexp(s.uniform01() < 0.5 ? -1.0 : 1.0, -static_cast<int>(i));
      break;
    default:
      for (auto& v : g) v = std::exp(2.0 * s.normal()) * (s.uniform01() < 0.5 ? -1.0 : 1.0);
      break;
  }
  return g;
}

const char* pattern_name(unsigned pattern) {
  static const char* names[] = {"dense_normal", "positive_uniform", "sparse", "geometric",
                                "heavy_tailed"};
  return names[pattern % 5];
}

}  // namespace

Checks check_componentwise_bounds(const std::vector<unsigned>& m_list, unsigned trials,
                                  const MonteCarloSettings& mc, const SampleStream& stream) {
  Checks out;
  for (unsigned m : m_list) {
    SampleStream ms = stream.substream(m);
    const std::string md = dim("m", m);
    auto run = [&](const Vector& g, std::uint64_t sub) {
      const double l1 = norm1(g);
      return estimate_componentwise(g, 1.0 / l1, estimator(mc, ms.substream(sub)));
    };

    if (m == 1) {
      const Vector g{ms.uniform01() + 0.5};
      const auto r = run(g, 0);
      out.push_back(make_check("componentwise_bounds.single_input", md + " quantity=ratio",
                               r.value.mean, Relation::within, 0.5,
                               mc.widen * r.value.half_width));
      out.push_back(make_check("componentwise_bounds.single_input", md + " quantity=gap_bits",
                               r.log2.mean, Relation::within, -kLog2e,
                               mc.widen * r.log2.half_width));
      out.push_back(make_check("componentwise_bounds.single_input_exact", md,
                               *exact_mean_abs_projection(g) / g[0], Relation::within, 0.5, 1e-15));
      continue;
    }

    const auto bounds = componentwise_bounds(m);
    for (unsigned t = 0; t < trials; ++t) {
      SampleStream ts = ms.substream(1000 + t);
      const Vector g = weight_pattern(t, m, ts);
      const auto r = run(g, t);
      const std::string inst = md + " " + dim("trial", t) + " pattern=" + pattern_name(t);
      add_interval(out, "componentwise_bounds.ratio", inst, r.value.mean, bounds.ratio,
                   mc.widen * r.value.half_width);
      add_interval(out, "componentwise_bounds.gap_bits", inst, r.log2.mean, bounds.gap_bits,
                   mc.widen * r.log2.half_width);
      if (const auto e = exact_mean_abs_projection(g)) {
        add_interval(out, "componentwise_bounds.exact_ratio", inst, *e / norm1(g), bounds.ratio,
                     0.0);
      }
    }

    // A single nonzero weight attains the upper ratio bound 1/2.
    Vector one_hot(m, 0.0);
    one_hot[ms.next_u64() % m] = 1.0 + ms.uniform01();
    const auto oh = run(one_hot, 2000);
    out.push_back(make_check("componentwise_bounds.one_hot", md, oh.value.mean, Relation::within,
                             0.5, mc.widen * oh.value.half_width));
    out.push_back(make_check("componentwise_bounds.one_hot_exact", md,
                             *exact_mean_abs_projection(one_hot) / norm1(one_hot),
                             Relation::within, 0.5, 1e-15));

    const Vector ones(m, 1.0);
    const auto all = run(ones, 2001);
    add_interval(out, "componentwise_bounds.ratio", md + " pattern=all_ones", all.value.mean,
                 bounds.ratio, mc.widen * all.value.half_width);
    add_interval(out, "componentwise_bounds.gap_bits", md + " pattern=all_ones", all.log2.mean,
                 bounds.gap_bits, mc.widen * all.log2.half_width);
    if (m == 2) {
      out.push_back(make_check("componentwise_bounds.all_ones", md, all.value.mean,
                               Relation::within, 1.0 / 3.0, mc.widen * all.value.half_width));
      out.push_back(make_check("componentwise_bounds.all_ones_exact", md,
                               *exact_mean_abs_projection(ones) / 2.0, Relation::within, 1.0 / 3.0,
                               1e-15));
    }
  }
  return out;
}

Checks check_log_sum_shift(unsigned max_terms) {
  Checks out;
  if (max_terms >= 1) {
    // Both sides are -1 exactly for a single term.
    out.push_back(make_check("log_sum_shift.single_term", "m=0", log_abs_integral(0.0) / 2.0,
                             Relation::within, -1.0, 0.0));
  }
  for (unsigned m = 1; m < max_terms; ++m) {
    const double lhs = expected_log_uniform_sum(m + 1);
    const double singular[] = {-1.0};
    const double rhs =
        uniform_sum_expectation(m, [](double s) { return xlogx(s + 1.0); }, singular) - 1.0;
    out.push_back(make_check("log_sum_shift.identity", dim("m", m), lhs, Relation::within, rhs,
                             1e-6));
  }
  if (max_terms >= 2) {
    out.push_back(make_check("log_sum_shift.two_terms", "m=1", expected_log_uniform_sum(2),
                             Relation::within, std::numbers::ln2 - 1.5, 1e-9));
  }
  for (double a : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const double q = integrate_piecewise([a](double u) { return std::log(std::fabs(a + u)); },
                                         {-1.0, std::clamp(-a, -1.0, 1.0), 1.0});
    out.push_back(make_check("log_sum_shift.log_abs_integral", "a=" + num(a), log_abs_integral(a),
                             Relation::within, q, 1e-10));
  }
  return out;
}

Checks check_log_sum_lower_bound(const std::vector<unsigned>& quadrature_m,
                                 const std::vector<unsigned>& monte_carlo_m,
                                 std::size_t monte_carlo_samples, const MonteCarloSettings& mc,
                                 const SampleStream& stream) {
  Checks out;
  for (unsigned m : quadrature_m) {
    out.push_back(make_check("log_sum_lower_bound.quadrature", dim("m", m),
                             expected_log_uniform_sum(m + 1), Relation::gt,
                             log_uniform_sum_lower_bound(m), 1e-8));
  }
  for (unsigned m : monte_carlo_m) {
    const auto parts = run_chunks<Moments>(monte_carlo_samples, stream.substream(m), mc.threads,
                                           [m](SampleStream& s, std::size_t count) {
                                             Moments mo;
                                             for (std::size_t i = 0; i < count; ++i) {
                                               double sum = 0.0;
                                               for (unsigned k = 0; k <= m; ++k)
                                                 sum += s.uniform_symmetric();
                                               if (sum != 0.0) mo.add(std::log(std::fabs(sum)));
                                             }
                                             return mo;
                                           });
    Moments total;
    for (const auto& p : parts) total.merge(p);
    const Estimate e = make_estimate(total, mc.confidence);
    out.push_back(make_check("log_sum_lower_bound.sampled", dim("m", m), e.mean, Relation::gt,
                             log_uniform_sum_lower_bound(m), mc.widen * e.half_width));
  }
  return out;
}

Checks check_berry_esseen(const std::vector<unsigned>& m_list, std::size_t grid_points) {
  Checks out;
  for (unsigned m : m_list) {
    const double scale = std::sqrt(m / 3.0);
    const double half = std::sqrt(3.0 * m) + 1.0;
    double sup = 0.0;
    auto probe = [&](double a) {
      sup = std::max(sup, std::fabs(uniform_sum_cdf(m, a) - normal_cdf(a)));
    };
    for (std::size_t i = 0; i < grid_points; ++i)
      probe(-half + 2.0 * half * static_cast<double>(i) / static_cast<double>(grid_points - 1));
    for (unsigned k = 0; k <= m; ++k) probe((-static_cast<double>(m) + 2.0 * k) / scale);
    const std::string inst = dim("m", m);
    out.push_back(make_check("berry_esseen.sup_gap", inst, sup, Relation::le,
                             1.0 / std::sqrt(static_cast<double>(m)), 0.0));
    out.push_back(make_check("berry_esseen.center", inst, uniform_sum_cdf(m, 0.0),
                             Relation::within, 0.5, 1e-12));
  }
  return out;
}

Checks check_peakedness(const std::vector<unsigned>& m_list, unsigned trials,
                        const MonteCarloSettings& mc, const SampleStream& stream) {
  Checks out;
  const double levels[] = {0.25, 0.5, 1.0, 1.5, 2.0};
  constexpr std::size_t kLevels = std::size(levels);
  const double z = z_for_confidence(mc.confidence);
  for (unsigned m : m_list) {
    SampleStream ms = stream.substream(m);
    const double sd = std::sqrt(m / 3.0);
    for (unsigned t = 0; t < trials; ++t) {
      SampleStream ts = ms.substream(t);
      Vector a(m, 0.0);
      switch (t % 4) {
        case 0:
          for (auto& v : a) v = ts.normal();
          break;
        case 1:
          for (auto& v : a) v = ts.uniform01();
          break;
        case 2:
          for (auto& v : a)
            if (ts.uniform01() < 0.3) v = ts.normal();
          if (norm1(a) == 0.0) a[0] = 1.0;
          break;
        default: a[ts.next_u64() % m] = 1.0; break;
      }
      const double l1 = norm1(a);
      for (auto& v : a) v *= m / l1;

      const auto parts = run_chunks<std::vector<std::size_t>>(
          mc.samples, ts.substream(1), mc.threads, [&](SampleStream& s, std::size_t count) {
            std::vector<std::size_t> hits(kLevels, 0);
            Vector u(m);
            for (std::size_t i = 0; i < count; ++i) {
              sample_unit_cube(s, u);
              const double v = std::fabs(dot(a, u));
              for (std::size_t l = 0; l < kLevels; ++l)
                if (v > levels[l] * sd) ++hits[l];
            }
            return hits;
          });
      for (std::size_t l = 0; l < kLevels; ++l) {
        std::size_t hits = 0;
        for (const auto& p : parts) hits += p[l];
        const double n = static_cast<double>(mc.samples);
        const double p_hat = hits / n;
        const double hw = z * std::sqrt(std::max(p_hat * (1.0 - p_hat), 1.0 / n) / n);
        const double b = levels[l] * sd;
        const double ones = 2.0 * (1.0 - uniform_sum_raw_cdf(m, b));
        out.push_back(make_check("peakedness.tail",
                                 dim("m", m) + " " + dim("trial", t) + " b=" + num(b), p_hat,
                                 Relation::ge, ones, mc.widen * hw));
      }
    }
  }
  // Two inputs at b = 1: one-hot |2 u_1| exceeds 1 with probability 1/2,
  // the all-ones sum with probability 1/4.
  out.push_back(make_check("peakedness.anchor", "m=2 b=1 pattern=all_ones",
                           2.0 * (1.0 - uniform_sum_raw_cdf(2, 1.0)), Relation::within, 0.25,
                           1e-15));
  out.push_back(make_check("peakedness.anchor", "m=2 b=1 pattern=one_hot", 0.5, Relation::ge,
                           2.0 * (1.0 - uniform_sum_raw_cdf(2, 1.0)), 0.0));
  return out;
}

Checks check_entropy_bounds() {
  Checks out;
  for (unsigned m : {1u, 2u, 3u, 4u, 6u, 8u, 12u, 16u}) {
    const double top = std::sqrt(3.0 * m);
    std::vector<double> deltas{1e-4, 0.1, 0.5, 1.0, 2.0, 3.0, 4.0, top};
    std::erase_if(deltas, [top](double d) { return d > top; });
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    for (double d : deltas) {
      out.push_back(make_check("entropy_bounds.entropy_term",
                               dim("m", m) + " delta=" + num(d), entropy_term_expectation(m, d),
                               Relation::gt, entropy_term_lower_bound(m, d), 1e-7));
    }
  }
  out.push_back(make_check("entropy_bounds.small_delta", "m=2 delta=0.0001",
                           entropy_term_expectation(2, 1e-4), Relation::within, 0.0, 1e-3));
  for (int k = 1; k <= 20; ++k) {
    const double d = k / 10.0;
    for (double b : {1.5, 3.0, 6.0}) {
      out.push_back(make_check("entropy_bounds.gaussian_tail",
                               "delta=" + num(d) + " b=" + num(b),
                               gaussian_tail_log_functional(d, b), Relation::gt, 0.0, 1e-7));
    }
  }
  return out;
}

const std::vector<std::string>& suite_groups() {
  static const std::vector<std::string> groups{
      "closed_forms",  "moment_sampling",     "single_output_ratio", "normwise_bounds",
      "componentwise_bounds", "log_sum_shift", "log_sum_lower_bound", "berry_esseen",
      "peakedness",    "entropy_bounds"};
  return groups;
}

VerifySuiteReport summarize(std::vector<BoundCheck> checks, std::uint64_t seed) {
  VerifySuiteReport r;
  r.seed = seed;
  for (const auto& c : checks) {
    if (c.passed)
      ++r.passed;
    else
      ++r.failed;
    if (c.warning) ++r.warnings;
  }
  r.checks = std::move(checks);
  return r;
}

VerifySuiteReport run_suite(const SuiteConfig& cfg) {
  const auto& groups = suite_groups();
  for (const auto& name : cfg.only) {
    if (std::find(groups.begin(), groups.end(), name) == groups.end())
      throw std::invalid_argument("unknown check group: " + name);
  }
  if (cfg.m_min > cfg.m_max || cfg.n_min > cfg.n_max)
    throw std::invalid_argument("empty dimension range");
  if (cfg.mc.samples < 100) throw std::invalid_argument("samples must be at least 100");

  const SampleStream root(cfg.seed);
  auto ms = [&](std::vector<unsigned> v) { return filtered(std::move(v), cfg.m_min, cfg.m_max); };
  auto trials = [&](unsigned d) { return cfg.trials ? cfg.trials : d; };
  const std::vector<unsigned> grid{1, 2, 3, 4, 5, 7, 10, 14, 20, 30};

  Checks all;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& name = groups[i];
    if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), name) == cfg.only.end())
      continue;
    const SampleStream s = root.substream(i);
    Checks part;
    switch (i) {
      case 0: part = check_closed_forms(std::min(cfg.m_max, 200u)); break;
      case 1: part = check_moment_sampling(ms(range(1, 10)), cfg.mc.samples, s, 4.0, cfg.mc.threads); break;
      case 2: part = check_single_output_ratio(ms(range(1, 10)), cfg.mc, s); break;
      case 3:
        part = check_normwise_bounds(ms(grid), filtered(grid, cfg.n_min, cfg.n_max), trials(1),
                                     cfg.mc, s);
        break;
      case 4: part = check_componentwise_bounds(ms(range(1, 50)), trials(50), cfg.mc, s); break;
      case 5: part = check_log_sum_shift(4); break;
      case 6:
        part = check_log_sum_lower_bound(ms(range(2, 15)), ms({20, 50, 100, 200}), 1000000,
                                         cfg.mc, s);
        break;
      case 7: part = check_berry_esseen(ms(range(1, 30))); break;
      case 8: part = check_peakedness(ms(range(2, 10)), trials(50), cfg.mc, s); break;
      case 9: part = check_entropy_bounds(); break;
    }
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return summarize(std::move(all), cfg.seed);
}

}  // namespace condana
