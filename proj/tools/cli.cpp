#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "condana/closed_forms.hpp"
#include "condana/condition.hpp"
#include "condana/errors.hpp"
#include "condana/problems.hpp"
#include "condana/verify.hpp"

namespace condana::cli {

namespace {

const std::vector<std::string> kCommands{"analyze", "verify", "sweep", "moments"};

// Master-seed sub-streams: estimators draw from the root stream, random
// input points from this one.
constexpr std::uint64_t kPointStream = 0x706f696e74;

Cell opt(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

Cell count(std::size_t v) { return static_cast<std::int64_t>(v); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
  };
  return std::visit(Visitor{}, c);
}

struct ResolvedProblem {
  Problem problem;
  std::optional<Vector> test_point;
};

ResolvedProblem resolve_problem(const RunConfig& cfg) {
  if (cfg.problem.empty()) throw UsageError("--problem is required for " + cfg.command);
  for (const auto& d : list_problems()) {
    if (d.name != cfg.problem) continue;
    std::optional<std::size_t> m;
    if (d.flexible_dimension) {
      if (!cfg.point.empty() && cfg.point != "random") {
        m = parse_reals(cfg.point).size();
      } else if (cfg.m_range) {
        m = cfg.m_range->first;
      }
    }
    ResolvedProblem r{make_problem(d.name, m), std::nullopt};
    if (!m || *m == d.default_m) r.test_point = d.test_point;
    return r;
  }
  if (std::filesystem::is_regular_file(cfg.problem)) {
    return {load_matrix_problem(cfg.problem), std::nullopt};
  }
  throw UsageError("unknown problem '" + cfg.problem + "' (not a corpus name or a matrix file)");
}

Vector resolve_point(const RunConfig& cfg, const ResolvedProblem& rp) {
  const Problem& p = rp.problem;
  if (cfg.point.empty()) {
    if (rp.test_point) return *rp.test_point;
    throw UsageError("--point is required for problem '" + p.name + "'");
  }
  if (cfg.point != "random") {
    Vector x = parse_reals(cfg.point);
    if (x.size() != p.m) {
      throw UsageError("point has " + std::to_string(x.size()) + " coordinates, problem '" +
                       p.name + "' takes " + std::to_string(p.m));
    }
    return x;
  }
  SampleStream s = SampleStream(cfg.seed).substream(kPointStream);
  Vector x(p.m);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (auto& v : x) v = 2.0 * s.uniform_symmetric();
    const Vector f = evaluate(p, x);
    if (std::all_of(f.begin(), f.end(), [](double v) { return std::fabs(v) >= 1e-9; })) return x;
  }
  throw DegenerateOutputError("no random point with all |f_j| >= 1e-9 after 1000 draws");
}

EstimatorConfig estimator_config(const RunConfig& cfg) {
  EstimatorConfig e;
  e.samples = cfg.samples;
  e.stream = SampleStream(cfg.seed);
  e.threads = cfg.threads;
  return e;
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw UsageError("--command must be one of analyze, verify, sweep, moments");
  if (samples < 100) throw UsageError("--samples must be at least 100");
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
  if ((command == "analyze" || command == "sweep") && problem.empty())
    throw UsageError("--problem is required for " + command);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0) || !std::isfinite(deltas[i]))
      throw UsageError("--deltas must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw UsageError("--deltas must be strictly decreasing");
  }
  for (const auto& r : {m_range, n_range}) {
    if (r && (r->first == 0 || r->first > r->second))
      throw UsageError("ranges must be a:b with 1 <= a <= b");
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << csv_escape(t.columns[i]);
  out << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\r\n";
  }
}

void write_json(const Table& t, std::ostream& out) {
  auto records = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
              rec[t.columns[i]] = nullptr;
            else
              rec[t.columns[i]] = v;
          },
          row[i]);
    }
    records.push_back(std::move(rec));
  }
  out << records.dump(2) << '\n';
}

std::pair<unsigned, unsigned> parse_range(const std::string& text) {
  auto parse = [&](std::string_view s) {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
      throw UsageError("malformed range '" + text + "'");
    return v;
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const unsigned v = parse(text);
    return {v, v};
  }
  std::string_view sv(text);
  return {parse(sv.substr(0, colon)), parse(sv.substr(colon + 1))};
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || p != item.data() + item.size() || !std::isfinite(v))
      throw UsageError("malformed number list '" + text + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

CommandResult run_analyze(const RunConfig& cfg) {
  const auto rp = resolve_problem(cfg);
  const Vector x = resolve_point(cfg, rp);
  const ConditionReport r = report(rp.problem, x, estimator_config(cfg));

  CommandResult res;
  res.table.columns = {"j",       "m",         "n",           "k",       "f_j",     "wnc",
                       "wcc",     "snc_est",   "snc_exact",   "scc",     "scc_exact", "snlp",
                       "snlp_exact", "sclp",   "snc_hw",      "scc_hw",  "snlp_hw", "sclp_hw",
                       "wnc_infinite", "wcc_infinite"};
  const bool normwise = !r.wnc.infinite;
  for (const auto& o : r.outputs) {
    const bool comp = !o.wcc.infinite;
    auto when = [](bool ok, Cell c) { return ok ? c : Cell{}; };
    res.table.rows.push_back({
        count(o.j),
        count(r.m),
        count(r.n),
        count(r.k),
        o.f_j,
        when(normwise, r.wnc.value),
        when(comp, o.wcc.value),
        when(normwise, r.snc.value.mean),
        opt(r.snc_exact),
        when(comp, o.scc.value.mean),
        opt(o.scc_exact),
        when(normwise && r.snc.log_defined, r.snc.log2.mean),
        opt(r.snlp_exact),
        when(comp && o.scc.log_defined, o.scc.log2.mean),
        when(normwise, r.snc.value.half_width),
        when(comp, o.scc.value.half_width),
        when(normwise && r.snc.log_defined, r.snc.log2.half_width),
        when(comp && o.scc.log_defined, o.scc.log2.half_width),
        r.wnc.infinite,
        o.wcc.infinite,
    });
  }
  if (r.any_infinite()) res.exit_code = kFlagged;
  return res;
}

CommandResult run_verify(const RunConfig& cfg) {
  SuiteConfig sc;
  sc.seed = cfg.seed;
  sc.mc.samples = cfg.samples;
  sc.mc.threads = cfg.threads;
  sc.only = cfg.checks;
  sc.trials = cfg.trials;
  if (cfg.m_range) std::tie(sc.m_min, sc.m_max) = *cfg.m_range;
  if (cfg.n_range) std::tie(sc.n_min, sc.n_max) = *cfg.n_range;
  VerifySuiteReport r;
  try {
    r = run_suite(sc);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  CommandResult res;
  res.table.columns = {"check", "instance",  "relation", "computed", "bound",
                       "slack", "tolerance", "passed",   "warning"};
  for (const auto& c : r.checks) {
    res.table.rows.push_back({c.name, c.instance, std::string(to_string(c.relation)), c.computed,
                              c.bound, c.slack, c.tolerance, c.passed, c.warning});
  }
  if (!r.all_passed()) res.exit_code = kFlagged;
  return res;
}

CommandResult run_sweep(const RunConfig& cfg) {
  const auto rp = resolve_problem(cfg);
  const Problem& p = rp.problem;
  const Vector x = resolve_point(cfg, rp);

  EstimatorConfig lin = estimator_config(cfg);
  EstimatorConfig fd = lin;
  fd.mode = EstimatorMode::finite_delta;
  fd.deltas = cfg.deltas.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}
                                 : cfg.deltas;

  const Vector fx = evaluate(p, x);
  const bool normwise = norm2(fx) != 0.0;
  SncResult snc_lin, snc_fd;
  std::optional<double> snc_slope;
  if (normwise) {
    snc_lin = snc(p, x, lin);
    snc_fd = snc(p, x, fd);
    snc_slope = convergence_slope(snc_fd.trend, snc_lin.estimate.value.mean);
  }

  CommandResult res;
  res.table.columns = {"delta",  "j",       "snc_fd",    "snc_lin",   "snc_err",  "scc_fd",
                       "scc_lin", "scc_err", "snc_slope", "scc_slope", "underflow",
                       "wnc_infinite", "wcc_infinite"};
  bool flagged = !normwise;
  for (std::size_t j = 0; j < p.n; ++j) {
    const bool comp = fx[j] != 0.0;
    flagged = flagged || !comp;
    SccResult scc_lin, scc_fd;
    std::optional<double> scc_slope;
    if (comp) {
      scc_lin = scc(p, x, j, lin);
      scc_fd = scc(p, x, j, fd);
      scc_slope = convergence_slope(scc_fd.trend, scc_lin.estimate.value.mean);
    }
    for (std::size_t d = 0; d < fd.deltas.size(); ++d) {
      Cell snc_f, snc_l, snc_e, scc_f, scc_l, scc_e;
      bool underflow = false;
      if (normwise) {
        const auto& pt = snc_fd.trend[d];
        underflow = underflow || pt.underflow;
        if (!pt.underflow) {
          snc_f = pt.estimate.value.mean;
          snc_e = std::fabs(pt.estimate.value.mean - snc_lin.estimate.value.mean);
        }
        snc_l = snc_lin.estimate.value.mean;
      }
      if (comp) {
        const auto& pt = scc_fd.trend[d];
        underflow = underflow || pt.underflow;
        if (!pt.underflow) {
          scc_f = pt.estimate.value.mean;
          scc_e = std::fabs(pt.estimate.value.mean - scc_lin.estimate.value.mean);
        }
        scc_l = scc_lin.estimate.value.mean;
      }
      flagged = flagged || underflow;
      res.table.rows.push_back({fd.deltas[d], count(j), snc_f, snc_l, snc_e, scc_f, scc_l, scc_e,
                                opt(snc_slope), opt(scc_slope), underflow, !normwise, !comp});
    }
  }
  if (flagged) res.exit_code = kFlagged;
  return res;
}

CommandResult run_moments(const RunConfig& cfg) {
  const auto [m_lo, m_hi] = cfg.m_range.value_or(std::pair{1u, 10u});
  const unsigned n = cfg.n_range ? cfg.n_range->first : 1u;

  CommandResult res;
  res.table.columns = {"m",          "n",           "wallis",          "e_norm",
                       "e_norm_sq",  "e_log_norm",  "e_abs_cos",       "e_cos_sq",
                       "e_log_abs_cos", "snc_wnc_ratio", "snlp_gap_bits", "ratio_lo",
                       "ratio_hi",   "gap_lo",      "gap_hi",          "epsilon_m",
                       "cw_ratio_lo", "cw_ratio_hi", "cw_gap_lo",      "cw_gap_hi"};
  for (unsigned m = m_lo; m <= m_hi; ++m) {
    const MomentTable t = moment_table(m);
    const NormwiseRatio ex = snc_wnc_exact(m);
    const NormwiseBounds nb = normwise_bounds(m, n);
    std::vector<Cell> row{count(m),       count(n),    wallis_integral(m), t.e_norm,
                          t.e_norm_sq,    t.e_log_norm, opt(t.e_abs_cos),  opt(t.e_cos_sq),
                          opt(t.e_log_abs_cos), ex.ratio, ex.gap_bits,     nb.ratio.lo,
                          nb.ratio.hi,    nb.gap_bits.lo, nb.gap_bits.hi};
    if (m > 1) {
      const ComponentwiseBounds cb = componentwise_bounds(m);
      row.insert(row.end(), {cb.epsilon_m, cb.ratio.lo, cb.ratio.hi, cb.gap_bits.lo,
                             cb.gap_bits.hi});
    } else {
      row.resize(res.table.columns.size());
    }
    res.table.rows.push_back(std::move(row));
  }
  return res;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    CommandResult res;
    if (cfg.command == "analyze")
      res = run_analyze(cfg);
    else if (cfg.command == "verify")
      res = run_verify(cfg);
    else if (cfg.command == "sweep")
      res = run_sweep(cfg);
    else
      res = run_moments(cfg);

    std::ostringstream buf;
    if (cfg.format == "json")
      write_json(res.table, buf);
    else
      write_csv(res.table, buf);
    if (cfg.output_path.empty()) {
      out << buf.str();
    } else {
      std::ofstream f(cfg.output_path, std::ios::binary);
      if (!f) throw UsageError("cannot open output file '" + cfg.output_path + "'");
      f << buf.str();
      if (!f) throw UsageError("failed writing '" + cfg.output_path + "'");
    }
    return res.exit_code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const NonFiniteError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DegenerateOutputError& e) {
    err << "degenerate: " << e.what() << '\n';
    return kFlagged;
  } catch (const std::invalid_argument& e) {
    // DimensionError, malformed matrix files.
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kNumerical;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Worst-case and stochastic condition numbers"};
  RunConfig cfg;
  std::string deltas, m_range, n_range, checks;
  app.add_option("--command", cfg.command, "analyze | verify | sweep | moments")->required();
  app.add_option("--problem", cfg.problem, "corpus name or matrix file");
  app.add_option("--point", cfg.point, "comma-separated coordinates or 'random'");
  app.add_option("--samples", cfg.samples, "Monte Carlo samples (>= 100)");
  app.add_option("--seed", cfg.seed, "master seed (CONDANA_SEED overrides)");
  app.add_option("--deltas", deltas, "decreasing comma-separated perturbation sizes");
  app.add_option("--format", cfg.format, "csv | json");
  app.add_option("--out", cfg.output_path, "output file (default stdout)");
  app.add_option("--m-range", m_range, "input dimensions a:b");
  app.add_option("--n-range", n_range, "output dimensions a:b");
  app.add_option("--trials", cfg.trials, "random instances per dimension (verify)");
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  app.add_option("--checks", checks, "comma-separated verify groups");
  app.add_flag_callback("--list-problems", [&] {
    for (const auto& d : list_problems()) out << d.name << "\t" << d.summary << '\n';
    throw CLI::Success();
  }, "print the problem corpus and exit");

  try {
    app.parse(argc, argv);
    if (!deltas.empty()) cfg.deltas = parse_reals(deltas);
    if (!m_range.empty()) cfg.m_range = parse_range(m_range);
    if (!n_range.empty()) cfg.n_range = parse_range(n_range);
    for (std::string_view rest(checks); !rest.empty();) {
      const auto comma = rest.find(',');
      if (auto item = rest.substr(0, comma); !item.empty()) cfg.checks.emplace_back(item);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (const char* env = std::getenv("CONDANA_SEED"); env != nullptr && *env != '\0') {
      const std::string_view s(env);
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), cfg.seed);
      if (ec != std::errc{} || p != s.data() + s.size())
        throw UsageError("CONDANA_SEED is not an unsigned 64-bit integer");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return run(cfg, out, err);
}

}  // namespace condana::cli
