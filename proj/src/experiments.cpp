#include "chaoslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "chaoslab/combinatorics.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/families.hpp"
#include "chaoslab/gamma_law.hpp"
#include "chaoslab/kernel_io.hpp"
#include "chaoslab/mc_engine.hpp"
#include "chaoslab/parallel.hpp"
#include "chaoslab/reports.hpp"
#include "chaoslab/ustat.hpp"

namespace chaoslab {

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::identities, "identities"},
    {ExperimentKind::diagnostics_sequence, "diagnostics-sequence"},
    {ExperimentKind::mc_gamma, "mc-gamma"},
    {ExperimentKind::oracle_check, "oracle-check"},
    {ExperimentKind::ustat_gap, "ustat-gap"},
    {ExperimentKind::ustat_gamma, "ustat-gamma"},
};

using nlohmann::json;

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(std::string("config field '") + key + "' must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::vector<std::size_t> get_count_list(const json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string("config field '") + key + "' must be a list");
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(get_count(x, key));
  return out;
}

double rel_gap(double a, double b, double scale) {
  return std::abs(a - b) / std::max({std::abs(b), scale, 1e-300});
}

IndexFunction family_index_function(const ExperimentConfig& c, std::size_t n) {
  if (c.family == "canonical") {
    if (c.q != 2) throw ConfigError("family 'canonical' has q = 2");
    return canonical_family_q2(n);
  }
  if (c.family == "pair-square") {
    if (c.q != 4) throw ConfigError("family 'pair-square' has q = 4");
    return pair_square_family_q4(canonical_family_q2(n));
  }
  throw ConfigError("family '" + c.family + "' is not available for this experiment");
}

std::vector<double> intensities(const ExperimentConfig& c, std::size_t n) {
  if (!c.lambdas.empty()) {
    if (c.lambdas.size() < n) throw ConfigError("config 'lambdas' lists fewer intensities than N");
    return {c.lambdas.begin(), c.lambdas.begin() + static_cast<std::ptrdiff_t>(n)};
  }
  return std::vector<double>(n, c.lambda);
}

SequenceSpec sequence_for(const ExperimentConfig& c, std::size_t n) {
  if (c.sequence == "poisson") return SequenceSpec::poisson(intensities(c, n));
  if (c.sequence == "gaussian") return SequenceSpec::gaussian();
  if (c.sequence == "rademacher") return SequenceSpec::rademacher();
  throw ConfigError("unknown sequence '" + c.sequence + "'");
}

GammaLaw law_for(const ExperimentConfig& c) {
  return c.law == TargetLaw::gamma ? GammaLaw::centred(c.nu) : GammaLaw::reflected(c.nu);
}

std::string tag_name(const ExperimentConfig& c, const std::string& suffix) {
  return to_string(c.kind) + ":" + suffix;
}

// ---------------------------------------------------------------------------

std::vector<Row> run_identities(const ExperimentConfig& c, std::ostream& log) {
  const std::uint32_t tag = stream_tag(tag_name(c, "kernels"));
  log << "stream " << describe_stream(*c.seed, tag, 0, c.sizes.size() * c.trials) << '\n';
  std::vector<Row> rows;
  std::uint64_t index = 0;
  for (std::size_t n : c.sizes) {
    for (std::size_t t = 0; t < c.trials; ++t, ++index) {
      Philox4x32 engine(*c.seed, tag, index);
      const Partition part = random_partition(n, 0.5, 2.0, engine);
      const PiecewiseKernel mixed = random_symmetric_kernel(c.q, part, engine, RandomSign::mixed);
      const PiecewiseKernel positive = random_symmetric_kernel(c.q, part, engine, RandomSign::nonnegative);
      Row row;
      row.add("q", static_cast<long long>(c.q));
      row.add("N", static_cast<long long>(n));
      row.add("trial", static_cast<long long>(t));
      if (c.q <= 3) {
        const IdentityCheck id = symmetrization_identity_check(mixed);
        row.add("identity_lhs", id.lhs);
        row.add("identity_rhs", id.rhs);
        row.add("identity_rel_gap", rel_gap(id.lhs, id.rhs, 0.0));
      }
      double upper_ratio = 0.0, reverse_ratio = INFINITY;
      bool upper_ok = true, reverse_ok = true;
      for (const auto& chk : contraction_inequality_checks(mixed)) {
        if (chk.name == "reverse") continue;
        upper_ok = upper_ok && chk.satisfied;
        if (chk.rhs > 0) upper_ratio = std::max(upper_ratio, chk.lhs / chk.rhs);
      }
      for (const auto& chk : contraction_inequality_checks(positive)) {
        if (chk.name == "reverse") {
          reverse_ok = reverse_ok && chk.satisfied;
          if (chk.rhs > 0) reverse_ratio = std::min(reverse_ratio, chk.lhs / chk.rhs);
        } else {
          upper_ok = upper_ok && chk.satisfied;
          if (chk.rhs > 0) upper_ratio = std::max(upper_ratio, chk.lhs / chk.rhs);
        }
      }
      row.add("upper_max_ratio", upper_ratio);
      row.add("upper_ok", static_cast<long long>(upper_ok));
      row.add("reverse_min_ratio", reverse_ratio);
      row.add("reverse_ok", static_cast<long long>(reverse_ok));
      if (c.q % 2 == 0) {
        const TDecomposition td = t_decomposition(mixed);
        row.add("t_residual_rel", std::abs(td.residual) / std::max(std::abs(td.lhs), td.base));
        const double ap = a_prime(positive);
        row.add("a_prime_nonneg", ap);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<Row> run_diagnostics(const ExperimentConfig& c, std::ostream& log) {
  std::vector<Row> rows;
  auto emit = [&](const PiecewiseKernel& f) {
    log << "diagnostics q=" << f.order() << " N=" << f.cells() << '\n';
    rows.push_back(report_row(f.cells(), moment_report(f), condition_iii_diagnostics(f, c.law)));
  };
  if (c.family == "file") {
    const PiecewiseKernel f = load_kernel(c.kernel_file);
    emit(f);
    return rows;
  }
  for (std::size_t n : c.sizes) {
    const IndexFunction h = family_index_function(c, n);
    emit(from_index_function(h, Partition(intensities(c, n))));
  }
  return rows;
}

std::vector<Row> run_mc_gamma(const ExperimentConfig& c, std::ostream& log) {
  const GammaLaw law = law_for(c);
  std::vector<Row> rows;
  for (std::size_t n : c.sizes) {
    const IndexFunction h = family_index_function(c, n);
    const SequenceSpec spec = sequence_for(c, n);
    const std::uint32_t tag = stream_tag(tag_name(c, "N=" + std::to_string(n)));
    const McResult r = mc_moments(h, spec, c.draws, *c.seed, true, tag);
    log << "N=" << n << " stream " << r.stream << '\n';
    if (!c.samples_out.empty()) {
      const std::string dump = c.samples_out + ".N" + std::to_string(n) + ".txt";
      std::ofstream out(dump);
      if (!out) throw ConfigError("cannot write " + dump);
      for (double x : r.samples) out << format_double(x) << '\n';
      log << "samples written to " << dump << '\n';
    }
    Row row;
    row.add("q", static_cast<long long>(c.q));
    row.add("N", static_cast<long long>(n));
    row.add_text("sequence", spec.name());
    append_mc_columns(row, r);
    row.add("mc_statistic", r.moment[3] - 12.0 * r.moment[2]);
    row.add("nu_hat", r.moment[1] / 2.0);
    row.add("exact_second", static_cast<double>(factorial(c.q)) * h.norm() * h.norm());
    row.add("ks", ks_distance(r.samples, law));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> run_oracle(const ExperimentConfig& c, std::ostream& log) {
  if (c.q * 4 > 16) throw ConfigError("oracle-check supports q <= 4");
  std::vector<Row> rows;
  const std::uint32_t tag = stream_tag(tag_name(c, "kernels"));
  const bool random = c.family == "random";
  if (random) log << "stream " << describe_stream(*c.seed, tag, 0, c.sizes.size() * c.trials) << '\n';
  std::uint64_t index = 0;
  for (std::size_t n : c.sizes) {
    const std::size_t trials = random ? c.trials : 1;
    for (std::size_t t = 0; t < trials; ++t, ++index) {
      std::vector<double> lambdas;
      std::optional<IndexFunction> h;
      if (random) {
        Philox4x32 engine(*c.seed, tag, index);
        lambdas.resize(n);
        for (double& l : lambdas) l = c.lambda_lo + (c.lambda_hi - c.lambda_lo) * engine.uniform();
        h.emplace(random_index_function(c.q, n, engine, RandomSign::mixed));
      } else {
        lambdas = intensities(c, n);
        h.emplace(family_index_function(c, n));
      }
      const PiecewiseKernel f = from_index_function(*h, Partition(lambdas));
      const SequenceSpec pois = SequenceSpec::poisson(lambdas);
      const SequenceSpec gauss = SequenceSpec::gaussian();
      const double var = second_moment(f);
      const double s3 = std::pow(var, 1.5), s4 = var * var;
      Row row;
      row.add("q", static_cast<long long>(c.q));
      row.add("N", static_cast<long long>(n));
      row.add("trial", static_cast<long long>(t));
      const double p2 = exact_moments_small(*h, pois, 2);
      const double p3 = exact_moments_small(*h, pois, 3);
      const double p4 = exact_moments_small(*h, pois, 4);
      const double g3 = exact_moments_small(*h, gauss, 3);
      const double g4 = exact_moments_small(*h, gauss, 4);
      const double f3 = third_moment_poisson(f), f4 = fourth_moment_poisson(f);
      const double fg3 = third_moment_gaussian(f), fg4 = fourth_moment_gaussian(f);
      row.add("oracle_second", p2);
      row.add("formula_second", var);
      row.add("oracle_third", p3);
      row.add("formula_third", f3);
      row.add("oracle_fourth", p4);
      row.add("formula_fourth", f4);
      row.add("oracle_gaussian_third", g3);
      row.add("formula_gaussian_third", fg3);
      row.add("oracle_gaussian_fourth", g4);
      row.add("formula_gaussian_fourth", fg4);
      const double worst = std::max({rel_gap(p2, var, 0.0), rel_gap(p3, f3, s3), rel_gap(p4, f4, s4),
                                     rel_gap(g3, fg3, s3), rel_gap(g4, fg4, s4)});
      row.add("max_rel_gap", worst);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

GridKernel base_degenerate_kernel(const ExperimentConfig& c, std::ostream& log) {
  const std::uint32_t tag = stream_tag(tag_name(c, "base-kernel"));
  log << "base kernel stream " << describe_stream(*c.seed, tag, 0, 1) << '\n';
  Philox4x32 engine(*c.seed, tag, 0);
  const std::size_t cells = tensor_size(c.grid, c.dim);
  const PiecewiseKernel raw = random_symmetric_kernel(c.q, Partition::unit(cells), engine);
  return project_degenerate(GridKernel(c.q, c.dim, c.grid, {raw.values().begin(), raw.values().end()}));
}

std::vector<Row> run_ustat_gap(const ExperimentConfig& c, std::ostream& log) {
  const GridKernel base = base_degenerate_kernel(c, log);
  std::vector<Row> rows;
  double first = 0.0;
  std::size_t first_n = 0;
  for (std::size_t n : c.sizes) {
    // h_n = h / n^(q/2) keeps Var(U_n) of order one.
    const GridKernel k = base.scaled(std::pow(static_cast<double>(n), -0.5 * c.q));
    const std::uint32_t tag = stream_tag(tag_name(c, "n=" + std::to_string(n)));
    const GapEstimate g = coupled_gap(k, n, c.draws, *c.seed, tag);
    log << "n=" << n << " stream " << g.stream << '\n';
    if (rows.empty()) {
      first = g.gap;
      first_n = n;
    }
    Row row;
    row.add("q", static_cast<long long>(c.q));
    row.add("n", static_cast<long long>(n));
    row.add("gap", g.gap);
    row.add("gap_se", g.standard_error);
    row.add("gap_ratio", first > 0 ? g.gap / first : 0.0);
    row.add("envelope", 3.0 * std::pow(static_cast<double>(n) / static_cast<double>(first_n), -0.25));
    row.add("degeneracy_defect", degeneracy_defect(k));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> run_ustat_gamma(const ExperimentConfig& c, std::ostream& log) {
  if (c.q != 2) throw ConfigError("ustat-gamma lifts the canonical q = 2 family");
  std::vector<Row> rows;
  for (std::size_t i = 0; i < c.sizes.size(); ++i) {
    const std::size_t n = c.sizes[i];
    const std::size_t big = c.grids.empty() ? c.grid : c.grids[i];
    const GridKernel k = signed_lift(canonical_family_q2(big), static_cast<double>(n));
    const std::uint32_t tag = stream_tag(tag_name(c, "n=" + std::to_string(n)));
    const GammaConditionEstimate g = gamma_condition_estimate(k, n, c.draws, *c.seed, tag);
    log << "n=" << n << " K=" << big << " stream " << g.stream << '\n';
    const MomentReport exact = moment_report(to_piecewise_kernel(k, static_cast<double>(n)));
    Row row;
    row.add("q", static_cast<long long>(c.q));
    row.add("n", static_cast<long long>(n));
    row.add("K", static_cast<long long>(big));
    row.add("m1", g.m1);
    row.add("m2", g.m2);
    row.add("m3", g.m3);
    row.add("m4", g.m4);
    row.add("se2", g.se2);
    row.add("se3", g.se3);
    row.add("se4", g.se4);
    row.add("statistic", g.statistic);
    row.add("statistic_se", g.statistic_se);
    row.add("exact_second", exact.second);
    row.add("exact_third", exact.third);
    row.add("exact_fourth", exact.fourth);
    row.add("exact_statistic", exact.gamma_statistic);
    row.add("nu_hat", exact.nu_hat);
    row.add("moment_ratio", moment_ratio(k, static_cast<double>(n)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& text) {
  for (const auto& k : kKinds) {
    if (text == k.name) return k.kind;
  }
  throw ConfigError("unknown experiment '" + text + "'");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    const char* k = key.c_str();
    if (key == "experiment") c.kind = parse_kind(get_as<std::string>(v, k));
    else if (key == "q") c.q = static_cast<unsigned>(get_count(v, k));
    else if (key == "sizes") c.sizes = get_count_list(v, k);
    else if (key == "grids") c.grids = get_count_list(v, k);
    else if (key == "family") c.family = get_as<std::string>(v, k);
    else if (key == "kernel_file") c.kernel_file = get_as<std::string>(v, k);
    else if (key == "sequence") c.sequence = get_as<std::string>(v, k);
    else if (key == "lambda") c.lambda = get_as<double>(v, k);
    else if (key == "lambdas") c.lambdas = get_as<std::vector<double>>(v, k);
    else if (key == "lambda_lo") c.lambda_lo = get_as<double>(v, k);
    else if (key == "lambda_hi") c.lambda_hi = get_as<double>(v, k);
    else if (key == "trials") c.trials = get_count(v, k);
    else if (key == "draws") c.draws = get_count(v, k);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(get_count(v, k));
    else if (key == "law") {
      const auto s = get_as<std::string>(v, k);
      if (s == "gamma") c.law = TargetLaw::gamma;
      else if (s == "reflected") c.law = TargetLaw::reflected;
      else throw ConfigError("config 'law' must be 'gamma' or 'reflected'");
    } else if (key == "nu") c.nu = get_as<double>(v, k);
    else if (key == "grid") c.grid = get_count(v, k);
    else if (key == "dim") c.dim = static_cast<unsigned>(get_count(v, k));
    else if (key == "out") c.out = get_as<std::string>(v, k);
    else if (key == "samples_out") c.samples_out = get_as<std::string>(v, k);
    else if (key == "format") {
      const auto s = get_as<std::string>(v, k);
      if (s == "csv") c.format = OutputFormat::csv;
      else if (s == "json") c.format = OutputFormat::json;
      else throw ConfigError("config 'format' must be 'csv' or 'json'");
    } else if (key == "lanes") c.lanes = static_cast<int>(get_count(v, k));
    else throw ConfigError("unknown config field '" + key + "'");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& c) {
  if (!c.seed) throw ConfigError("config requires a seed");
  if (c.q == 0) throw ConfigError("q must be positive");
  if (!(c.lambda > 0.0) || !(c.nu > 0.0)) throw ConfigError("lambda and nu must be positive");
  for (double l : c.lambdas) {
    if (!(l > 0.0)) throw ConfigError("every entry of 'lambdas' must be positive");
  }
  if (!(c.lambda_lo > 0.0) || !(c.lambda_hi >= c.lambda_lo)) throw ConfigError("need 0 < lambda_lo <= lambda_hi");
  if (c.grid == 0 || c.dim == 0) throw ConfigError("grid and dim must be positive");
  const bool from_file = c.kind == ExperimentKind::diagnostics_sequence && c.family == "file";
  if (from_file && c.kernel_file.empty()) throw ConfigError("family 'file' requires kernel_file");
  if (!from_file && c.sizes.empty()) throw ConfigError("config requires a nonempty 'sizes' list");
  for (std::size_t s : c.sizes) {
    if (s == 0) throw ConfigError("every entry of 'sizes' must be positive");
  }
  switch (c.kind) {
    case ExperimentKind::mc_gamma:
    case ExperimentKind::ustat_gap:
    case ExperimentKind::ustat_gamma:
      if (c.draws == 0) throw ConfigError("this experiment requires 'draws' > 0");
      break;
    case ExperimentKind::identities:
    case ExperimentKind::oracle_check:
      if (c.trials == 0) throw ConfigError("this experiment requires 'trials' > 0");
      break;
    default: break;
  }
  if (c.kind == ExperimentKind::ustat_gamma && !c.grids.empty() && c.grids.size() != c.sizes.size()) {
    throw ConfigError("'grids' must list one super-cell count per entry of 'sizes'");
  }
  for (std::size_t g : c.grids) {
    if (g < 2) throw ConfigError("every entry of 'grids' must be at least 2");
  }
}

std::string output_path(const ExperimentConfig& c) {
  const char* env = std::getenv("CHAOSLAB_OUTPUT_DIR");
  const std::filesystem::path dir = (env && *env) ? std::filesystem::path(env) : std::filesystem::path();
  std::filesystem::path p;
  if (!c.out.empty()) {
    p = c.out;
    if (p.is_relative() && !dir.empty()) p = dir / p;
  } else {
    p = (dir.empty() ? std::filesystem::path(".") : dir) /
        (to_string(c.kind) + (c.format == OutputFormat::csv ? ".csv" : ".json"));
  }
  return p.string();
}

std::string run(const ExperimentConfig& config, std::ostream& log) {
  validate(config);
  if (config.lanes > 0) set_worker_lanes(config.lanes);
  log << "experiment " << to_string(config.kind) << " seed=" << *config.seed << '\n';
  std::vector<Row> rows;
  switch (config.kind) {
    case ExperimentKind::identities: rows = run_identities(config, log); break;
    case ExperimentKind::diagnostics_sequence: rows = run_diagnostics(config, log); break;
    case ExperimentKind::mc_gamma: rows = run_mc_gamma(config, log); break;
    case ExperimentKind::oracle_check: rows = run_oracle(config, log); break;
    case ExperimentKind::ustat_gap: rows = run_ustat_gap(config, log); break;
    case ExperimentKind::ustat_gamma: rows = run_ustat_gamma(config, log); break;
  }
  const std::string path = output_path(config);
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  if (config.format == OutputFormat::csv) write_csv(out, rows);
  else write_json(out, rows);
  log << "wrote " << rows.size() << " rows to " << path << '\n';
  return path;
}

}  // namespace chaoslab
