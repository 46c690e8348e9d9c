#pragma once

// RVOL: a JSON header {"size":[Sx,Sy,Sz],"spacing":[dx,dy,dz],"dtype":...}
// next to a raw little-endian sample file, x-fastest.
//
// A volume is addressed by a path stem P: the header lives at P.json and the
// samples at P.raw. Passing either file name directly is accepted too.

#include <filesystem>
#include <string>
#include <variant>

#include "nucseg/volume.hpp"

namespace nucseg {

enum class DType { U8, U16, U32, F32 };

[[nodiscard]] std::string to_string(DType dtype);
[[nodiscard]] DType parse_dtype(const std::string &name);

template <typename T>
constexpr DType dtype_of();
template <>
constexpr DType dtype_of<std::uint8_t>() { return DType::U8; }
template <>
constexpr DType dtype_of<std::uint16_t>() { return DType::U16; }
template <>
constexpr DType dtype_of<std::uint32_t>() { return DType::U32; }
template <>
constexpr DType dtype_of<float>() { return DType::F32; }

using AnyVolume = std::variant<VolumeU8, VolumeU16, VolumeU32, VolumeF32>;

struct RvolPaths {
  std::filesystem::path header;
  std::filesystem::path raw;
};

[[nodiscard]] RvolPaths rvol_paths(const std::filesystem::path &path);

/// Reads any supported dtype. Throws DataError on malformed or truncated files.
[[nodiscard]] AnyVolume read_rvol(const std::filesystem::path &path);

template <typename T>
void write_rvol(const std::filesystem::path &path, const Volume<T> &volume);

/// Converts whatever was read into float samples.
[[nodiscard]] VolumeF32 to_float(const AnyVolume &volume);

/// Reads a label volume; requires dtype u32.
[[nodiscard]] LabelVolume read_labels(const std::filesystem::path &path);

}  // namespace nucseg
