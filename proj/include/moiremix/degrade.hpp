#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "moiremix/image.hpp"
#include "moiremix/random.hpp"

namespace moiremix::degrade {

enum class CfaPattern { rggb, bggr, grbg, gbrg };

std::string_view to_string(CfaPattern p) noexcept;
CfaPattern parse_cfa(std::string_view name);

// Approximate reproduction of a screen-capture pipeline; none of these
// defaults are published, they are this library's reconstruction.
struct DegradeConfig {
    int lcd_scale = 3;
    double tilt_deg = 10.0;      // tilt about each in-plane axis drawn from [-tilt, tilt]
    double scale_jitter = 0.05;  // scale drawn from [1 - jitter, 1 + jitter]
    CfaPattern cfa = CfaPattern::rggb;
    int jpeg_quality_min = 60;
    int jpeg_quality_max = 95;
    double sharpen_amount = 0.5;

    void validate() const;
};

/**
 * Each source pixel becomes an s x s block of vertical R|G|B stripes. Column
 * c of a block shows channel floor(3c/s) with gain s/w, where w is that
 * stripe's width, so every channel's block mean equals the source value and
 * its block sum is s^2 times it. Values may exceed 1; the warp clips.
 * s = 1 is the identity; s = 2 leaves no room for a blue stripe and is rejected.
 */
ImageBuffer lcd_resample(const ImageBuffer& x, const DegradeConfig& cfg);

struct WarpParams {
    double tilt_x_deg = 0.0;  // rotation about the horizontal axis
    double tilt_y_deg = 0.0;  // rotation about the vertical axis
    double scale = 1.0;
};

WarpParams sample_warp(SeedStream& stream, const DegradeConfig& cfg);

/// Row-major 3x3 homography from the display plane to the image, in centred
/// coordinates divided by the image width.
using Homography = std::array<double, 9>;

/// sigma * R restricted to the plane, with the projective row R[2] / f and f = 1.
Homography warp_homography(const WarpParams& p);
Homography invert(const Homography& h);
std::array<double, 2> apply_homography(const Homography& h, double x, double y) noexcept;

/**
 * Resamples x through the inverse warp onto an out_w x out_h grid. Each output
 * pixel averages T x T bilinear taps, T = round(input / output size), so a
 * downsample integrates its footprint. Samples outside the source read 0.5
 * gray. Result is clipped to [0, 1]; an identity warp at equal size is exact.
 */
ImageBuffer warp_image(const ImageBuffer& x, const WarpParams& p, int out_w, int out_h);

/// Draws a warp and applies it at the input size.
ImageBuffer geometric_transform(const ImageBuffer& x, SeedStream& stream, const DegradeConfig& cfg);

/// Mosaic then bilinear demosaic with reflected borders. Needs at least 2x2.
ImageBuffer bayer_cfa(const ImageBuffer& x, const DegradeConfig& cfg);

/// The channel sampled at (u, v) under the pattern.
int cfa_channel(CfaPattern p, int u, int v) noexcept;

/// x + amount * (x - blur(x)) with the separable [1 2 1] / 4 kernel, then clip.
ImageBuffer signal_process(const ImageBuffer& x, const DegradeConfig& cfg);

struct DegradeRecord {
    WarpParams warp;
    int jpeg_quality = 0;
};

/// lcd_resample, warp back to W x H, bayer_cfa, signal_process, JPEG round trip.
ImageBuffer degrade(const ImageBuffer& x, SeedStream& stream, const DegradeConfig& cfg,
                    DegradeRecord* record = nullptr);

struct BatchSummary {
    std::size_t processed = 0;
    std::vector<std::string> failures;  // "relative/path: reason"
};

/**
 * Degrades every image under in_dir into the same relative path under
 * out_dir. Files are indexed in sorted path order and image i uses
 * derive(root_seed, i).fork(kDegrade). Writes degrade_log.csv beside the
 * outputs. Unreadable files are logged and skipped.
 */
BatchSummary degrade_directory(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                               const DegradeConfig& cfg, std::uint64_t root_seed, int workers);

inline constexpr const char* kDegradeLogHeader =
    "path,seed,index,tilt_x_deg,tilt_y_deg,scale,jpeg_quality,status";

}  // namespace moiremix::degrade
