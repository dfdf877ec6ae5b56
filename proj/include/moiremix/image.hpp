#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace moiremix {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or precondition violation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File or codec failure; the message carries the path and the cause.
class IoError : public Error {
public:
    using Error::Error;
};

/**
 * H x W x C raster of real intensities, row-major and channel-interleaved.
 *
 * Pixel (u, v) is column u, row v, origin at the top-left. Values are not
 * clamped on construction; operations documented as clip-bearing leave every
 * value in [0, 1]. Some analysis buffers (Fourier basis images) hold signed
 * values on purpose.
 */
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, int channels, double fill = 0.0);
    ImageBuffer(int width, int height, int channels, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }
    bool empty() const noexcept { return data_.empty(); }

    double& at(int u, int v, int c) noexcept { return data_[index(u, v, c)]; }
    double at(int u, int v, int c) const noexcept { return data_[index(u, v, c)]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    std::size_t index(int u, int v, int c) const noexcept {
        return (static_cast<std::size_t>(v) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(u)) *
                   static_cast<std::size_t>(channels_) +
               static_cast<std::size_t>(c);
    }

    bool same_shape(const ImageBuffer& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
    }

    /// True when every value lies in [0, 1] (NaN fails).
    bool in_unit_range() const noexcept;

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/// Unbounded single-channel accumulator, row-major.
class GrayField {
public:
    GrayField() = default;
    GrayField(int width, int height, double fill = 0.0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    double& at(int u, int v) noexcept { return data_[static_cast<std::size_t>(v) * width_ + u]; }
    double at(int u, int v) const noexcept { return data_[static_cast<std::size_t>(v) * width_ + u]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const GrayField&, const GrayField&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Copies a [0,1] field into all three channels of a new buffer.
ImageBuffer replicate_channels(const GrayField& field);

/// Clamps every value to [0, 1]; NaN maps to 0.
void clip_unit(ImageBuffer& img) noexcept;

/// Per-pixel mean over channels, as a field.
GrayField channel_mean(const ImageBuffer& img);

/// round(v * 255) after clamping, the file-boundary quantization.
std::uint8_t quantize_byte(double v) noexcept;

/// Round-trips every value through 8-bit quantization.
ImageBuffer quantize(const ImageBuffer& img);

}  // namespace moiremix
