#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rnlw/experiments.hpp"

namespace rnlw::cli {

struct RunConfig {
  Scenario scenario;                 // grid, solver, data amplitudes
  RandomizationParams randomization;
  NormParams norms;
  McConfig mc;
  std::vector<NormSpec> mc_norms;    // evaluated from one set of samples
  bool mc_acceptance = false;        // run the slope criteria instead
  bool delta_sweep = false;
  DeltaSweepConfig delta;
  std::vector<DeltaClaim> delta_claims;
  std::vector<int> verify_criteria;
  bool refined = false;
  std::string input;                 // container for decompose / functionals
  std::string output_dir;
  std::uint64_t seed = 1;

  // resolved configuration, echoed into every output; output_dir is left out
  // so identical runs written to different places stay byte-identical
  nlohmann::ordered_json to_json() const;
  std::string hash() const;  // FNV-1a 64 of to_json().dump(), hex
};

// Parse a YAML file, then apply "dotted.key=value" overrides.
// Errors are ConfigError naming the key and, for file content, the line.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides = {});

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace rnlw::cli
