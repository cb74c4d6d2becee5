#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chaoslab/moments.hpp"

namespace chaoslab {

enum class ExperimentKind { identities, diagnostics_sequence, mc_gamma, oracle_check, ustat_gap, ustat_gamma };

std::string to_string(ExperimentKind kind);
/// Accepts the CLI spelling ("diagnostics-sequence", ...). Throws ConfigError.
ExperimentKind parse_kind(const std::string& text);

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::identities;
  unsigned q = 2;
  std::vector<std::size_t> sizes;       // N list (chaos experiments) or n list (ustat)
  std::vector<std::size_t> grids;       // super-cell count K per n (ustat-gamma)
  std::string family = "canonical";     // canonical | pair-square | file
  std::string kernel_file;              // family == file
  std::string sequence = "poisson";     // poisson | gaussian | rademacher
  double lambda = 1.0;
  std::vector<double> lambdas;          // optional per-cell intensities
  double lambda_lo = 0.5, lambda_hi = 3.0;  // oracle-check random intensities
  std::size_t trials = 25;              // identities / oracle-check kernels
  std::size_t draws = 0;                // M
  std::optional<std::uint64_t> seed;
  TargetLaw law = TargetLaw::gamma;
  double nu = 1.0;
  std::size_t grid = 4;                 // ustat-gap base grid
  unsigned dim = 1;
  std::string out;
  std::string samples_out;              // mc-gamma: per-N sample dumps <prefix>.N<n>.txt
  OutputFormat format = OutputFormat::csv;
  int lanes = 0;                        // 0 = OpenMP default
};

/// Parses a JSON config. Throws ConfigError on malformed input.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError when a required field is missing or not positive.
void validate(const ExperimentConfig& config);

/// Resolves the artifact path: explicit `out`, else
/// $CHAOSLAB_OUTPUT_DIR/<kind>.<format>, else ./<kind>.<format>. A relative
/// `out` is placed under $CHAOSLAB_OUTPUT_DIR when that is set.
std::string output_path(const ExperimentConfig& config);

/// Runs one experiment, writes the artifact and logs progress (including
/// derived stream identifiers) to `log`. Returns the artifact path.
std::string run(const ExperimentConfig& config, std::ostream& log);

/// Exit codes of the command line runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGuard = 3;

}  // namespace chaoslab
