#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "moiremix/image.hpp"

namespace moiremix {

enum class ImageFormat { png, jpeg };

/// Guesses the format from a file extension (.png, .jpg, .jpeg; case-insensitive).
std::optional<ImageFormat> format_from_extension(const std::filesystem::path& path);

/// Reads an 8-bit PNG or baseline JPEG. Intensities are byte / 255; grayscale
/// files give 1 channel, color files 3 (alpha is dropped).
ImageBuffer load_image(const std::filesystem::path& path);

/// Decodes an in-memory PNG or JPEG stream; `name` only labels error messages.
ImageBuffer decode_image(std::span<const std::uint8_t> bytes, const std::string& name = "<memory>");

/// Writes `img` after round(v * 255) quantization. jpeg_quality must be in 1..100
/// regardless of format.
void save_image(const ImageBuffer& img, const std::filesystem::path& path, ImageFormat format,
                int jpeg_quality = 95);

std::vector<std::uint8_t> encode_png(const ImageBuffer& img);
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);

/// Every .png/.jpg/.jpeg file under `root`, as paths relative to it, sorted.
std::vector<std::filesystem::path> list_image_files(const std::filesystem::path& root);

/// Encode then decode at the given quality; the JPEG stage of the degrader.
ImageBuffer jpeg_roundtrip(const ImageBuffer& img, int quality);

}  // namespace moiremix
