#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sdrct/config.hpp"
#include "sdrct/metrics.hpp"
#include "sdrct/recon_volume.hpp"

namespace sdrct {

/// One declarative experiment: phantom -> project -> degrade -> reconstruct
/// (each requested method) -> metrics. Parsed strictly: unknown keys are
/// fatal.
struct ScenarioConfig {
  std::string name = "scenario";
  int size = 64;
  int angle_count = 60;
  double sigma = 0.0;
  int max_shift = 0;
  std::uint64_t seed = 0;
  double sim_step = 0.5;
  std::string phantom_contrast = "modified";  // or "standard"
  std::vector<std::string> methods = {"fbp", "ossirt", "tvart", "sdr"};
  std::string output_dir = ".";
  ReconConfig recon;
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

struct ExperimentResult {
  std::vector<MetricReport> reports;                    // one per method
  std::map<std::string, std::vector<double>> traces;    // method -> trace
  std::string table_csv;
};

/// Runs the full pipeline, staging every intermediate product through the
/// binary file format in output_dir so a chained per-command run reproduces
/// the experiment bit for bit. Reported wall times are zeroed to keep the
/// emitted CSVs byte-identical across runs.
ExperimentResult run_experiment(const ScenarioConfig& config, int threads = 0,
                                std::ostream* log = nullptr);

}  // namespace sdrct
