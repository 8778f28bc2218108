#pragma once

// Named-array archive: a little-endian container of float64 arrays plus a JSON
// header. Layout:
//
//   bytes 0..7   magic "MMDDARC1"
//   bytes 8..15  uint64 header length H
//   next H bytes UTF-8 JSON {"meta": {...}, "arrays": [{"name", "shape", "offset"}]}
//   remainder    array payloads, float64, row-major, offsets relative to payload start

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace mmdd {

struct NamedArray {
  std::vector<std::int64_t> shape;
  std::vector<double> data;
};

struct ArrayArchive {
  nlohmann::json meta = nlohmann::json::object();
  std::map<std::string, NamedArray> arrays;

  void put(const std::string& name, std::vector<std::int64_t> shape, std::vector<double> data);
  const NamedArray& get(const std::string& name) const;
  bool contains(const std::string& name) const { return arrays.count(name) != 0; }
};

void write_archive(const std::filesystem::path& path, const ArrayArchive& archive);
ArrayArchive read_archive(const std::filesystem::path& path);

}  // namespace mmdd
