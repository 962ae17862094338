#include "output.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>

#include "rnlw/errors.hpp"

namespace rnlw::cli {

namespace {

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

OutputDir::OutputDir(const RunConfig& cfg, std::string command)
    : cfg_(cfg), dir_(cfg.output_dir), command_(std::move(command)), started_(now_utc()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error("cannot create output directory '" + dir_ + "': " + ec.message());
}

nlohmann::ordered_json OutputDir::provenance() const {
  return {{"version", RNLW_VERSION}, {"command", command_}, {"config_hash", cfg_.hash()}, {"config", cfg_.to_json()}};
}

void OutputDir::write(const std::string& name, const std::string& bytes) {
  io::atomic_write(dir_ + "/" + name, bytes);
  auto it = std::find_if(files_.begin(), files_.end(), [&](const auto& f) { return f.first == name; });
  if (it != files_.end())
    it->second = bytes;
  else
    files_.emplace_back(name, bytes);
}

void OutputDir::json(const std::string& name, nlohmann::ordered_json body) {
  nlohmann::ordered_json j;
  j["provenance"] = provenance();
  for (auto& [k, v] : body.items()) j[k] = v;
  write(name, j.dump(2) + "\n");
}

void OutputDir::csv(const std::string& name, const std::vector<std::string>& columns,
                    const std::vector<std::vector<double>>& rows) {
  write(name, "# rnlw " RNLW_VERSION " config " + cfg_.hash() + " " + command_ + "\n" + io::csv(columns, rows));
}

void OutputDir::container(const std::string& name, io::Container c) {
  auto h = nlohmann::ordered_json::parse(c.header);
  h["provenance"] = provenance();
  c.header = h.dump();
  write(name, io::serialize(c));
}

void OutputDir::finish() {
  auto sorted = files_;
  std::sort(sorted.begin(), sorted.end());
  nlohmann::ordered_json m;
  m["version"] = RNLW_VERSION;
  m["command"] = command_;
  m["config_hash"] = cfg_.hash();
  m["files"] = nlohmann::ordered_json::array();
  for (const auto& [name, bytes] : sorted)
    m["files"].push_back({{"name", name}, {"bytes", bytes.size()}, {"fnv1a", hex(fnv1a(bytes))}});
  io::atomic_write(dir_ + "/manifest.json", m.dump(2) + "\n");
  nlohmann::ordered_json ts{{"command", command_}, {"started", started_}, {"finished", now_utc()}};
  io::atomic_write(dir_ + "/timestamps.json", ts.dump(2) + "\n");
}

}  // namespace rnlw::cli
