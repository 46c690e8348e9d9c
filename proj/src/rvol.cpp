#include "nucseg/rvol.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

namespace nucseg {

static_assert(std::endian::native == std::endian::little,
              "RVOL I/O assumes a little-endian host");

std::string to_string(DType dtype) {
  switch (dtype) {
    case DType::U8:
      return "u8";
    case DType::U16:
      return "u16";
    case DType::U32:
      return "u32";
    case DType::F32:
      return "f32";
  }
  return "?";
}

DType parse_dtype(const std::string &name) {
  if (name == "u8") return DType::U8;
  if (name == "u16") return DType::U16;
  if (name == "u32") return DType::U32;
  if (name == "f32") return DType::F32;
  throw DataError("dtype: unsupported value '" + name + "'");
}

RvolPaths rvol_paths(const std::filesystem::path &path) {
  std::filesystem::path stem = path;
  const auto ext = path.extension();
  if (ext == ".json" || ext == ".raw") {
    stem.replace_extension();
  }
  return {std::filesystem::path(stem.string() + ".json"),
          std::filesystem::path(stem.string() + ".raw")};
}

namespace {

template <typename T>
Volume<T> read_samples(const std::filesystem::path &raw, Extent extent, Spacing spacing) {
  std::ifstream in(raw, std::ios::binary);
  if (!in) {
    throw DataError("cannot open raw file " + raw.string());
  }
  std::vector<T> data(extent.voxel_count());
  const auto bytes = static_cast<std::streamsize>(data.size() * sizeof(T));
  in.read(reinterpret_cast<char *>(data.data()), bytes);
  if (in.gcount() != bytes) {
    throw DataError("raw file " + raw.string() + " is shorter than its header declares");
  }
  in.peek();
  if (!in.eof()) {
    throw DataError("raw file " + raw.string() + " is longer than its header declares");
  }
  return Volume<T>(extent, spacing, std::move(data));
}

}  // namespace

AnyVolume read_rvol(const std::filesystem::path &path) {
  const auto paths = rvol_paths(path);
  std::ifstream hin(paths.header);
  if (!hin) {
    throw DataError("cannot open header " + paths.header.string());
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(hin);
  } catch (const nlohmann::json::exception &e) {
    throw DataError("header " + paths.header.string() + ": " + e.what());
  }

  Extent extent;
  Spacing spacing;
  DType dtype;
  try {
    const auto &size = header.at("size");
    const auto &sp = header.at("spacing");
    if (size.size() != 3 || sp.size() != 3) {
      throw DataError("header: size and spacing must have three entries");
    }
    for (const auto &s : size) {
      if (!s.is_number_integer() || s.get<std::int64_t>() <= 0) {
        throw DataError("size: entries must be positive integers");
      }
    }
    extent = {size[0].get<std::size_t>(), size[1].get<std::size_t>(), size[2].get<std::size_t>()};
    spacing = {sp[0].get<double>(), sp[1].get<double>(), sp[2].get<double>()};
    dtype = parse_dtype(header.at("dtype").get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    throw DataError("header " + paths.header.string() + ": " + e.what());
  }
  if (!(spacing.x > 0 && spacing.y > 0 && spacing.z > 0)) {
    throw DataError("spacing: all components must be > 0");
  }

  switch (dtype) {
    case DType::U8:
      return read_samples<std::uint8_t>(paths.raw, extent, spacing);
    case DType::U16:
      return read_samples<std::uint16_t>(paths.raw, extent, spacing);
    case DType::U32:
      return read_samples<std::uint32_t>(paths.raw, extent, spacing);
    case DType::F32:
      return read_samples<float>(paths.raw, extent, spacing);
  }
  throw DataError("unreachable dtype");
}

template <typename T>
void write_rvol(const std::filesystem::path &path, const Volume<T> &volume) {
  const auto paths = rvol_paths(path);
  const auto &e = volume.extent();
  const auto &s = volume.spacing();
  nlohmann::json header = {
      {"size", {e.x, e.y, e.z}},
      {"spacing", {s.x, s.y, s.z}},
      {"dtype", to_string(dtype_of<T>())},
  };
  {
    std::ofstream hout(paths.header);
    if (!hout) {
      throw DataError("cannot write header " + paths.header.string());
    }
    hout << header.dump() << '\n';
  }
  std::ofstream out(paths.raw, std::ios::binary);
  if (!out) {
    throw DataError("cannot write raw file " + paths.raw.string());
  }
  out.write(reinterpret_cast<const char *>(volume.data().data()),
            static_cast<std::streamsize>(volume.size() * sizeof(T)));
  if (!out) {
    throw DataError("short write to " + paths.raw.string());
  }
}

template void write_rvol(const std::filesystem::path &, const VolumeU8 &);
template void write_rvol(const std::filesystem::path &, const VolumeU16 &);
template void write_rvol(const std::filesystem::path &, const VolumeU32 &);
template void write_rvol(const std::filesystem::path &, const VolumeF32 &);

VolumeF32 to_float(const AnyVolume &volume) {
  return std::visit([](const auto &v) { return convert<float>(v); }, volume);
}

LabelVolume read_labels(const std::filesystem::path &path) {
  auto any = read_rvol(path);
  if (auto *labels = std::get_if<LabelVolume>(&any)) {
    return std::move(*labels);
  }
  throw DataError("dtype: label volume " + path.string() + " must be u32");
}

}  // namespace nucseg
