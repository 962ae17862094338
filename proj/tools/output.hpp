#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "rnlw/trajectory_io.hpp"

namespace rnlw::cli {

// One run directory.  Every file carries the config hash and code version;
// nothing time-dependent goes anywhere except the timestamps sidecar.
class OutputDir {
 public:
  OutputDir(const RunConfig& cfg, std::string command);

  const std::string& path() const { return dir_; }
  nlohmann::ordered_json provenance() const;

  void write(const std::string& name, const std::string& bytes);
  void json(const std::string& name, nlohmann::ordered_json body);
  void csv(const std::string& name, const std::vector<std::string>& columns,
           const std::vector<std::vector<double>>& rows);
  // header JSON of the container gains the provenance block
  void container(const std::string& name, io::Container c);

  // manifest.json (name, bytes, fnv1a) and the timestamps sidecar
  void finish();

 private:
  const RunConfig& cfg_;
  std::string dir_, command_, started_;
  std::vector<std::pair<std::string, std::string>> files_;  // name, bytes
};

}  // namespace rnlw::cli
