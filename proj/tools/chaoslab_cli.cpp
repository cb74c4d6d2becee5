// Command line runner: one subcommand per experiment kind plus a Gamma
// sample dump. Exit codes: 0 ok, 2 config error, 3 guard violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chaoslab/errors.hpp"
#include "chaoslab/experiments.hpp"
#include "chaoslab/gamma_law.hpp"
#include "chaoslab/reports.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::optional<int> lanes;
  std::optional<unsigned> q;
  std::vector<std::size_t> sizes;
  std::optional<std::size_t> draws;
  std::optional<std::size_t> trials;
  std::string family;
  std::string samples_out;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config, "JSON experiment config");
  sub->add_option("--seed", o.seed, "RNG seed (overrides config)");
  sub->add_option("--out", o.out, "output file (overrides config)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--lanes", o.lanes, "OpenMP worker lanes");
  sub->add_option("-q,--order", o.q, "chaos order q");
  sub->add_option("--sizes", o.sizes, "N list (n list for ustat-*)")->delimiter(',');
  sub->add_option("--draws", o.draws, "Monte Carlo draws M");
  sub->add_option("--trials", o.trials, "random kernels per size");
  sub->add_option("--family", o.family, "canonical | pair-square | random | file");
}

chaoslab::ExperimentConfig resolve(chaoslab::ExperimentKind kind, const Overrides& o) {
  chaoslab::ExperimentConfig c;
  if (!o.config.empty()) c = chaoslab::load_config(o.config);
  c.kind = kind;
  if (o.seed) c.seed = *o.seed;
  if (!o.out.empty()) c.out = o.out;
  if (!o.format.empty()) c.format = o.format == "json" ? chaoslab::OutputFormat::json : chaoslab::OutputFormat::csv;
  if (o.lanes) c.lanes = *o.lanes;
  if (o.q) c.q = *o.q;
  if (!o.sizes.empty()) c.sizes = o.sizes;
  if (o.draws) c.draws = *o.draws;
  if (o.trials) c.trials = *o.trials;
  if (!o.family.empty()) c.family = o.family;
  if (!o.samples_out.empty()) c.samples_out = o.samples_out;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaoslab: moment calculus and simulation on a fixed Poisson chaos"};
  app.require_subcommand(1);
  Overrides o;

  const std::vector<chaoslab::ExperimentKind> kinds = {
      chaoslab::ExperimentKind::identities,   chaoslab::ExperimentKind::diagnostics_sequence,
      chaoslab::ExperimentKind::mc_gamma,     chaoslab::ExperimentKind::oracle_check,
      chaoslab::ExperimentKind::ustat_gap,    chaoslab::ExperimentKind::ustat_gamma};
  std::vector<std::pair<CLI::App*, chaoslab::ExperimentKind>> subs;
  for (auto kind : kinds) {
    CLI::App* sub = app.add_subcommand(chaoslab::to_string(kind), "run the " + chaoslab::to_string(kind) + " experiment");
    add_common(sub, o);
    if (kind == chaoslab::ExperimentKind::mc_gamma) {
      sub->add_option("--samples-out", o.samples_out, "prefix for per-N sample dumps");
    }
    subs.emplace_back(sub, kind);
  }

  double nu = 1.0;
  std::size_t count = 1000;
  std::uint64_t sample_seed = 0;
  bool reflected = false;
  std::string sample_out;
  CLI::App* gs = app.add_subcommand("gamma-sample", "dump centred Gamma draws, one per line");
  gs->add_option("--nu", nu, "shape parameter nu > 0");
  gs->add_option("--count", count, "number of draws");
  gs->add_option("--seed", sample_seed, "RNG seed")->required();
  gs->add_flag("--reflected", reflected, "sample the reflected law");
  gs->add_option("--out", sample_out, "output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? chaoslab::kExitOk : chaoslab::kExitConfig;
  }

  try {
    if (gs->parsed()) {
      const auto law = reflected ? chaoslab::GammaLaw::reflected(nu) : chaoslab::GammaLaw::centred(nu);
      const auto draws = law.sample(sample_seed, chaoslab::stream_tag("gamma-sample"), count);
      std::ofstream file;
      if (!sample_out.empty()) {
        file.open(sample_out);
        if (!file) throw chaoslab::ConfigError("cannot write " + sample_out);
      }
      std::ostream& out = sample_out.empty() ? std::cout : file;
      for (double x : draws) out << chaoslab::format_double(x) << '\n';
      return chaoslab::kExitOk;
    }
    for (const auto& [sub, kind] : subs) {
      if (!sub->parsed()) continue;
      const auto config = resolve(kind, o);
      const std::string path = chaoslab::run(config, std::cerr);
      std::cout << path << '\n';
    }
  } catch (const chaoslab::GuardError& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return chaoslab::kExitGuard;
  } catch (const chaoslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return chaoslab::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return chaoslab::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return chaoslab::kExitOk;
}
