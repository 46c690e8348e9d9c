#pragma once

#include <array>
#include <vector>

#include "nucseg/volume.hpp"

namespace nucseg {

/// Normalized discrete Gaussian of radius ceil(3 sigma). sigma == 0 yields {1}.
[[nodiscard]] std::vector<float> gaussian_kernel(double sigma);

/// Separable Gaussian smoothing with per-axis standard deviations in voxel
/// units. Borders are clamped (edge replication). A zero sigma leaves that
/// axis untouched.
[[nodiscard]] VolumeF32 gaussian_smooth(const VolumeF32 &volume, std::array<double, 3> sigma);

[[nodiscard]] inline VolumeF32 gaussian_smooth(const VolumeF32 &volume, double sigma) {
  return gaussian_smooth(volume, {sigma, sigma, sigma});
}

template <typename T>
[[nodiscard]] VolumeF32 gaussian_smooth(const Volume<T> &volume, double sigma) {
  return gaussian_smooth(convert<float>(volume), {sigma, sigma, sigma});
}

}  // namespace nucseg
