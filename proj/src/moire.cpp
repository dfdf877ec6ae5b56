#include "moiremix/moire.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace moiremix::moire {

void MoireConfig::validate() const {
    if (n_max < 1) throw ConfigError("moire n_max must be >= 1");
    if (!(f_min > 0.0) || !(f_min <= f_max))
        throw ConfigError("moire frequency range must satisfy 0 < f_min <= f_max");
    if (width <= 0 || height <= 0) throw ConfigError("moire dimensions must be positive");
}

MoireParams sample_moire_params(SeedStream& stream, const MoireConfig& cfg) {
    cfg.validate();
    MoireParams params;
    const auto n = stream.uniform_int(1, cfg.n_max);
    params.components.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        Component c;
        c.cx = stream.uniform(0.0, cfg.width);
        c.cy = stream.uniform(0.0, cfg.height);
        // Closed interval: the upper end is reachable only up to rounding, which is immaterial.
        c.f = cfg.f_min == cfg.f_max ? cfg.f_min : cfg.f_min + (cfg.f_max - cfg.f_min) * stream.uniform();
        params.components.push_back(c);
    }
    return params;
}

GrayField render_moire(const MoireParams& params, int width, int height) {
    GrayField field(width, height);
    std::vector<double> dx2(static_cast<std::size_t>(width));
    for (const Component& c : params.components) {
        const double k = 2.0 * std::numbers::pi * c.f / width;
        for (int u = 0; u < width; ++u) {
            const double dx = u - c.cx;
            dx2[u] = dx * dx;
        }
        for (int v = 0; v < height; ++v) {
            const double dy = v - c.cy;
            const double dy2 = dy * dy;
            double* row = field.data().data() + static_cast<std::size_t>(v) * width;
            for (int u = 0; u < width; ++u) row[u] += std::sin(k * std::sqrt(dx2[u] + dy2));
        }
    }
    return field;
}

GrayField normalize_minmax(const GrayField& field) {
    GrayField out(field.width(), field.height());
    const auto src = field.data();
    const auto [lo_it, hi_it] = std::minmax_element(src.begin(), src.end());
    const double lo = *lo_it;
    const double spread = *hi_it - lo;
    if (!(spread > kDegenerateSpread)) return out;
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] - lo) / spread;
    return out;
}

ImageBuffer moire_image_from_params(const MoireParams& params, int width, int height) {
    return replicate_channels(normalize_minmax(render_moire(params, width, height)));
}

ImageBuffer generate_moire_image(SeedStream& stream, const MoireConfig& cfg) {
    const MoireParams params = sample_moire_params(stream, cfg);
    return moire_image_from_params(params, cfg.width, cfg.height);
}

}  // namespace moiremix::moire
