#pragma once

#include <filesystem>

#include "outfit/features.hpp"

namespace outfit::cli {

/// Decodes any format OpenCV reads into an HSV image (H in degrees, S and V
/// in [0,1]). Throws std::runtime_error when the file can't be decoded.
HsvImage load_hsv_image(const std::filesystem::path& path);

}  // namespace outfit::cli
