#pragma once

#include <string>
#include <vector>

#include "rnlw/nlw.hpp"

namespace rnlw::io {

// Container layout (little endian):
//   "RNLWDATA" | u32 version | u64 header bytes | header (JSON text)
//   then records: char[4] tag | f64 time | u64 n | f64 position[n] | f64 velocity[n]
// Tags: DATA (initial data), FORC (forcing data), SNAP (trajectory snapshot).
inline constexpr unsigned kFormatVersion = 1;

struct Record {
  std::string tag;
  double time = 0.0;
  std::vector<double> position, velocity;
};

struct Container {
  std::string header;  // JSON text, includes the grid (R, N)
  std::vector<Record> records;
};

std::string serialize(const Container& c);
Container deserialize(const std::string& bytes);

// temp file + rename
void atomic_write(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

Container pack(const Trajectory& traj, const std::string& header);
Container pack(const WaveData& data, const WaveData* forcing, const std::string& header);

// grid from the header keys "radius" and "points"
RadialGrid grid_of(const Container& c);
Trajectory unpack_trajectory(const Container& c);
WaveData unpack_data(const Container& c, const std::string& tag = "DATA");
bool has_tag(const Container& c, const std::string& tag);

// plain CSV, %.17g
std::string csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);

}  // namespace rnlw::io
