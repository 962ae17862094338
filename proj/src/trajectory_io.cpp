#include "rnlw/trajectory_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rnlw/errors.hpp"

namespace rnlw::io {

namespace {

constexpr char kMagic[8] = {'R', 'N', 'L', 'W', 'D', 'A', 'T', 'A'};

template <class T>
void put(std::string& out, const T& v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}
  template <class T>
  T get() {
    T v;
    take(&v, sizeof v);
    return v;
  }
  void take(void* dst, std::size_t n) {
    if (pos_ + n > s_.size()) throw std::runtime_error("container truncated");
    std::memcpy(dst, s_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == s_.size(); }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize(const Container& c) {
  std::string out(kMagic, 8);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint64_t>(out, c.header.size());
  out += c.header;
  for (const auto& r : c.records) {
    if (r.tag.size() != 4) throw std::invalid_argument("record tags have 4 characters");
    if (r.position.size() != r.velocity.size()) throw std::invalid_argument("record halves differ in length");
    out += r.tag;
    put<double>(out, r.time);
    put<std::uint64_t>(out, r.position.size());
    out.append(reinterpret_cast<const char*>(r.position.data()), r.position.size() * sizeof(double));
    out.append(reinterpret_cast<const char*>(r.velocity.data()), r.velocity.size() * sizeof(double));
  }
  return out;
}

Container deserialize(const std::string& bytes) {
  Reader rd(bytes);
  char magic[8];
  rd.take(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("not an rnlw container");
  const auto version = rd.get<std::uint32_t>();
  if (version != kFormatVersion) throw std::runtime_error("unsupported container version " + std::to_string(version));
  Container c;
  c.header.resize(rd.get<std::uint64_t>());
  rd.take(c.header.data(), c.header.size());
  while (!rd.done()) {
    Record r;
    r.tag.resize(4);
    rd.take(r.tag.data(), 4);
    r.time = rd.get<double>();
    const auto n = rd.get<std::uint64_t>();
    r.position.resize(n);
    r.velocity.resize(n);
    rd.take(r.position.data(), n * sizeof(double));
    rd.take(r.velocity.data(), n * sizeof(double));
    c.records.push_back(std::move(r));
  }
  return c;
}

void atomic_write(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

namespace {

Record record(const std::string& tag, double t, const RadialField& f, const RadialField& g) {
  return Record{tag, t, f.values, g.values};
}

std::string with_grid(const std::string& header, const RadialGrid& g) {
  auto j = header.empty() ? nlohmann::ordered_json::object() : nlohmann::ordered_json::parse(header);
  j["radius"] = g.radius_max;
  j["points"] = g.point_count;
  return j.dump(2);
}

}  // namespace

Container pack(const Trajectory& traj, const std::string& header) {
  Container c;
  c.header = with_grid(header, traj.grid);
  if (traj.forcing) c.records.push_back(record("FORC", 0.0, traj.forcing->position, traj.forcing->velocity));
  for (const auto& s : traj.states) c.records.push_back(record("SNAP", s.time, s.position, s.velocity));
  return c;
}

Container pack(const WaveData& data, const WaveData* forcing, const std::string& header) {
  Container c;
  c.header = with_grid(header, data.grid());
  c.records.push_back(record("DATA", 0.0, data.position, data.velocity));
  if (forcing) c.records.push_back(record("FORC", 0.0, forcing->position, forcing->velocity));
  return c;
}

RadialGrid grid_of(const Container& c) {
  const auto j = nlohmann::json::parse(c.header);
  if (!j.contains("radius") || !j.contains("points")) throw std::runtime_error("container header lacks the grid");
  return RadialGrid(j["radius"].get<double>(), j["points"].get<int>());
}

namespace {

RadialField field(const RadialGrid& g, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != g.size()) throw GridError("record length does not match the grid");
  RadialField f(g);
  f.values = v;
  return f;
}

}  // namespace

Trajectory unpack_trajectory(const Container& c) {
  Trajectory t;
  t.grid = grid_of(c);
  for (const auto& r : c.records) {
    if (r.tag == "FORC") t.forcing = WaveData(field(t.grid, r.position), field(t.grid, r.velocity));
    if (r.tag == "SNAP") t.states.push_back(WaveState{r.time, field(t.grid, r.position), field(t.grid, r.velocity)});
  }
  if (t.states.size() >= 2) {
    t.params.dt = t.states[1].time - t.states[0].time;
    t.params.report_stride = 1;
  }
  return t;
}

WaveData unpack_data(const Container& c, const std::string& tag) {
  const auto g = grid_of(c);
  for (const auto& r : c.records)
    if (r.tag == tag) return WaveData(field(g, r.position), field(g, r.velocity));
  throw std::runtime_error("container holds no " + tag + " record");
}

bool has_tag(const Container& c, const std::string& tag) {
  for (const auto& r : c.records)
    if (r.tag == tag) return true;
  return false;
}

std::string csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += (i ? "," : "");
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace rnlw::io
