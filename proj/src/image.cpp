#include "moiremix/image.hpp"

#include <algorithm>
#include <cmath>

namespace moiremix {

namespace {

void check_dims(int width, int height, int channels) {
    if (width <= 0 || height <= 0)
        throw ConfigError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
    if (channels != 1 && channels != 3)
        throw ConfigError("channels must be 1 or 3, got " + std::to_string(channels));
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
    check_dims(width, height, channels);
    data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_dims(width, height, channels);
    if (data_.size() != pixel_count() * static_cast<std::size_t>(channels))
        throw ConfigError("image data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height) + "x" + std::to_string(channels));
}

bool ImageBuffer::in_unit_range() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

GrayField::GrayField(int width, int height, double fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw ConfigError("field dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

ImageBuffer replicate_channels(const GrayField& field) {
    ImageBuffer out(field.width(), field.height(), 3);
    auto src = field.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[3 * i] = src[i];
        dst[3 * i + 1] = src[i];
        dst[3 * i + 2] = src[i];
    }
    return out;
}

void clip_unit(ImageBuffer& img) noexcept {
    for (double& v : img.data()) {
        if (std::isnan(v))
            v = 0.0;
        else
            v = std::clamp(v, 0.0, 1.0);
    }
}

GrayField channel_mean(const ImageBuffer& img) {
    GrayField out(img.width(), img.height());
    const int c = img.channels();
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        double s = 0.0;
        for (int k = 0; k < c; ++k) s += src[i * c + k];
        dst[i] = s / c;
    }
    return out;
}

std::uint8_t quantize_byte(double v) noexcept {
    if (!(v > 0.0)) return 0;
    if (v >= 1.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

ImageBuffer quantize(const ImageBuffer& img) {
    ImageBuffer out = img;
    for (double& v : out.data()) v = quantize_byte(v) / 255.0;
    return out;
}

}  // namespace moiremix
