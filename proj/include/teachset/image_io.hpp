#pragma once

#include <filesystem>

#include "teachset/imaging.hpp"

namespace teachset::io {

/// Loads a PNG or binary PPM (P6) image, dispatching on the file's magic
/// bytes. Throws teachset::Error naming the file on any failure.
imaging::ImageRGB load_image(const std::filesystem::path& path);

void save_png(const std::filesystem::path& path, const imaging::ImageRGB& img);
void save_ppm(const std::filesystem::path& path, const imaging::ImageRGB& img);

/// Decodes an in-memory PNG or PPM buffer (as uploaded over HTTP).
imaging::ImageRGB decode_image(const std::string& bytes, const std::string& name = "upload");

/// Encodes to PNG bytes.
std::string encode_png(const imaging::ImageRGB& img);

}  // namespace teachset::io
