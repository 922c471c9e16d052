#pragma once

#include <string>

#include "platepipe/image.hpp"

namespace platepipe {

/// Decodes a PNG or JPEG file (by extension) into a 1- or 3-channel image.
Image load_image(const std::string& path);

/// Encodes PNG or JPEG by extension (.png, .jpg, .jpeg).
void save_image(const Image& img, const std::string& path);

}  // namespace platepipe
