#include "mmdd/archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "mmdd/error.hpp"

namespace mmdd {

namespace {

constexpr char kMagic[8] = {'M', 'M', 'D', 'D', 'A', 'R', 'C', '1'};

static_assert(std::endian::native == std::endian::little,
              "archive I/O assumes a little-endian host");

std::int64_t element_count(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (auto s : shape) {
    n *= s;
  }
  return n;
}

}  // namespace

void ArrayArchive::put(const std::string& name, std::vector<std::int64_t> shape,
                       std::vector<double> data) {
  require(element_count(shape) == static_cast<std::int64_t>(data.size()),
          ErrorCode::invalid_argument, "archive array '" + name + "' shape does not match data");
  arrays[name] = NamedArray{std::move(shape), std::move(data)};
}

const NamedArray& ArrayArchive::get(const std::string& name) const {
  auto it = arrays.find(name);
  require(it != arrays.end(), ErrorCode::io, "archive has no array named '" + name + "'");
  return it->second;
}

void write_archive(const std::filesystem::path& path, const ArrayArchive& archive) {
  nlohmann::json header;
  header["meta"] = archive.meta;
  header["arrays"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, array] : archive.arrays) {
    header["arrays"].push_back({{"name", name}, {"shape", array.shape}, {"offset", offset}});
    offset += array.data.size() * sizeof(double);
  }
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::io, "cannot open archive for writing: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& [name, array] : archive.arrays) {
    out.write(reinterpret_cast<const char*>(array.data.data()),
              static_cast<std::streamsize>(array.data.size() * sizeof(double)));
  }
  require(out.good(), ErrorCode::io, "failed writing archive: " + path.string());
}

ArrayArchive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io, "cannot open archive: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  require(in.good() && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0, ErrorCode::io,
          "not an archive (bad magic): " + path.string());
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  require(in.good() && len < (1ull << 32), ErrorCode::io, "corrupt archive header: " + path.string());
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  require(in.good(), ErrorCode::io, "truncated archive header: " + path.string());

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, "corrupt archive header in " + path.string() + ": " + e.what());
  }
  const auto payload_start = in.tellg();

  ArrayArchive archive;
  archive.meta = header.value("meta", nlohmann::json::object());
  for (const auto& entry : header.at("arrays")) {
    NamedArray array;
    array.shape = entry.at("shape").get<std::vector<std::int64_t>>();
    const auto offset = entry.at("offset").get<std::uint64_t>();
    array.data.resize(static_cast<std::size_t>(element_count(array.shape)));
    in.seekg(payload_start + static_cast<std::streamoff>(offset));
    in.read(reinterpret_cast<char*>(array.data.data()),
            static_cast<std::streamsize>(array.data.size() * sizeof(double)));
    require(in.good(), ErrorCode::io, "truncated archive payload: " + path.string());
    archive.arrays[entry.at("name").get<std::string>()] = std::move(array);
  }
  return archive;
}

}  // namespace mmdd
