#pragma once

#include <vector>

#include "moiremix/image.hpp"
#include "moiremix/random.hpp"

namespace moiremix::moire {

/// One radial wave: centre in pixel coordinates and frequency in cycles per image width.
struct Component {
    double cx = 0.0;
    double cy = 0.0;
    double f = 1.0;

    friend bool operator==(const Component&, const Component&) = default;
};

struct MoireParams {
    std::vector<Component> components;  // n == components.size()

    friend bool operator==(const MoireParams&, const MoireParams&) = default;
};

struct MoireConfig {
    int n_max = 3;
    double f_min = 1.0;
    double f_max = 100.0;
    int width = 224;
    int height = 224;

    /// Throws ConfigError unless n_max >= 1, 0 < f_min <= f_max and dimensions are positive.
    void validate() const;
};

/// Draw order: n ~ U{1..n_max}, then per component c_x ~ U[0,W), c_y ~ U[0,H), f ~ U[f_min,f_max].
MoireParams sample_moire_params(SeedStream& stream, const MoireConfig& cfg);

/**
 * Accumulates sin(2*pi*f_i*d_i/W) over all components, where d_i is the
 * Euclidean distance from integer pixel (u, v) to the component centre.
 * The divisor is the image width for both axes.
 */
GrayField render_moire(const MoireParams& params, int width, int height);

/// Spread below which a field counts as constant and normalizes to all zeros.
inline constexpr double kDegenerateSpread = 1e-9;

/// (v - min) / (max - min); attains exactly 0 and 1 unless the field is degenerate.
GrayField normalize_minmax(const GrayField& field);

/// Sample, render, normalize and replicate to three channels.
ImageBuffer generate_moire_image(SeedStream& stream, const MoireConfig& cfg);

/// Render, normalize and replicate fixed parameters.
ImageBuffer moire_image_from_params(const MoireParams& params, int width, int height);

}  // namespace moiremix::moire
