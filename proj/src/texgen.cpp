#include "moiremix/texgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace moiremix::texgen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fade(double t) noexcept { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

template <class>
inline constexpr bool kAlwaysFalse = false;

}  // namespace

std::string_view to_string(GeneratorKind kind) noexcept {
    switch (kind) {
        case GeneratorKind::moire: return "moire";
        case GeneratorKind::perlin: return "perlin";
        case GeneratorKind::dead_leaves: return "dead_leaves";
        case GeneratorKind::stripe: return "stripe";
        case GeneratorKind::fourier_basis: return "fourier_basis";
    }
    return "unknown";
}

GeneratorKind parse_kind(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '-', '_');
    for (GeneratorKind k : kAllKinds)
        if (to_string(k) == s) return k;
    throw ConfigError("unknown generator kind '" + std::string(name) +
                      "' (expected moire, perlin, dead_leaves, stripe or fourier_basis)");
}

void GeneratorConfig::validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("generator dimensions must be positive");
    switch (kind) {
        case GeneratorKind::moire: moire_config().validate(); break;
        case GeneratorKind::perlin:
            if (perlin.cell_min < 1 || perlin.cell_max < perlin.cell_min)
                throw ConfigError("perlin cell range must satisfy 1 <= cell_min <= cell_max");
            if (perlin.octaves < 1) throw ConfigError("perlin octaves must be >= 1");
            if (!(perlin.persistence > 0.0)) throw ConfigError("perlin persistence must be > 0");
            break;
        case GeneratorKind::dead_leaves:
            if (!(dead_leaves.r_min > 0.0) || !(dead_leaves_r_max() >= dead_leaves.r_min))
                throw ConfigError("dead leaves radii must satisfy 0 < r_min <= r_max");
            if (!(dead_leaves.exponent > 0.0)) throw ConfigError("dead leaves exponent must be > 0");
            if (dead_leaves.shape_cap < 1) throw ConfigError("dead leaves shape cap must be >= 1");
            break;
        case GeneratorKind::stripe:
            if (!(stripe.f_min > 0.0) || !(stripe.f_max >= stripe.f_min))
                throw ConfigError("stripe frequency range must satisfy 0 < f_min <= f_max");
            break;
        case GeneratorKind::fourier_basis:
            if (fourier_basis.max_index < 1) throw ConfigError("fourier basis max_index must be >= 1");
            break;
    }
}

moire::MoireConfig GeneratorConfig::moire_config() const {
    moire::MoireConfig m = moire;
    m.width = width;
    m.height = height;
    return m;
}

double GeneratorConfig::dead_leaves_r_max() const {
    return dead_leaves.r_max > 0.0 ? dead_leaves.r_max : width / 2.0;
}

// ---------------------------------------------------------------------------
// Stripe

StripeParams sample_stripe_params(SeedStream& stream, const GeneratorConfig& cfg) {
    StripeParams p;
    p.f = cfg.stripe.f_min + (cfg.stripe.f_max - cfg.stripe.f_min) * stream.uniform();
    p.theta = stream.uniform(0.0, std::numbers::pi);
    return p;
}

GrayField render_stripe_field(const StripeParams& p, int width, int height) {
    GrayField field(width, height);
    const double k = kTwoPi * p.f / width;
    const double kx = k * std::cos(p.theta);
    const double ky = k * std::sin(p.theta);
    for (int v = 0; v < height; ++v) {
        double* row = field.data().data() + static_cast<std::size_t>(v) * width;
        const double py = ky * v;
        for (int u = 0; u < width; ++u) row[u] = std::sin(kx * u + py);
    }
    return field;
}

ImageBuffer render_stripe(const StripeParams& p, int width, int height) {
    return replicate_channels(moire::normalize_minmax(render_stripe_field(p, width, height)));
}

ImageBuffer generate_stripe(SeedStream& stream, const GeneratorConfig& cfg) {
    cfg.validate();
    return render_stripe(sample_stripe_params(stream, cfg), cfg.width, cfg.height);
}

// ---------------------------------------------------------------------------
// Perlin

PerlinParams sample_perlin_params(SeedStream& stream, const GeneratorConfig& cfg) {
    PerlinParams p;
    p.persistence = cfg.perlin.persistence;
    const int base_cell = static_cast<int>(stream.uniform_int(cfg.perlin.cell_min, cfg.perlin.cell_max));
    for (int o = 0; o < cfg.perlin.octaves; ++o) {
        PerlinOctave oct;
        oct.cell = std::max(1, base_cell >> o);
        oct.grid_w = (cfg.width - 1) / oct.cell + 2;
        oct.grid_h = (cfg.height - 1) / oct.cell + 2;
        const std::size_t n = static_cast<std::size_t>(oct.grid_w) * oct.grid_h;
        oct.gx.resize(n);
        oct.gy.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a = stream.uniform(0.0, kTwoPi);
            oct.gx[i] = std::cos(a);
            oct.gy[i] = std::sin(a);
        }
        p.octaves.push_back(std::move(oct));
    }
    return p;
}

GrayField render_perlin_field(const PerlinParams& p, int width, int height) {
    GrayField field(width, height);
    std::vector<int> col_cell(static_cast<std::size_t>(width));
    std::vector<double> col_t(static_cast<std::size_t>(width));
    std::vector<double> col_s(static_cast<std::size_t>(width));
    double amplitude = 1.0;
    for (const PerlinOctave& oct : p.octaves) {
        const double inv = 1.0 / oct.cell;
        for (int u = 0; u < width; ++u) {
            col_cell[u] = u / oct.cell;
            col_t[u] = (u - col_cell[u] * oct.cell) * inv;
            col_s[u] = fade(col_t[u]);
        }
        for (int v = 0; v < height; ++v) {
            const int cy = v / oct.cell;
            const double ty = (v - cy * oct.cell) * inv;
            const double sy = fade(ty);
            const double* gx0 = oct.gx.data() + static_cast<std::size_t>(cy) * oct.grid_w;
            const double* gy0 = oct.gy.data() + static_cast<std::size_t>(cy) * oct.grid_w;
            const double* gx1 = gx0 + oct.grid_w;
            const double* gy1 = gy0 + oct.grid_w;
            double* row = field.data().data() + static_cast<std::size_t>(v) * width;
            for (int u = 0; u < width; ++u) {
                const int cx = col_cell[u];
                const double tx = col_t[u];
                const double n00 = gx0[cx] * tx + gy0[cx] * ty;
                const double n10 = gx0[cx + 1] * (tx - 1.0) + gy0[cx + 1] * ty;
                const double n01 = gx1[cx] * tx + gy1[cx] * (ty - 1.0);
                const double n11 = gx1[cx + 1] * (tx - 1.0) + gy1[cx + 1] * (ty - 1.0);
                const double sx = col_s[u];
                const double top = n00 + sx * (n10 - n00);
                const double bottom = n01 + sx * (n11 - n01);
                row[u] += amplitude * (top + sy * (bottom - top));
            }
        }
        amplitude *= p.persistence;
    }
    return field;
}

ImageBuffer render_perlin(const PerlinParams& p, int width, int height) {
    return replicate_channels(moire::normalize_minmax(render_perlin_field(p, width, height)));
}

ImageBuffer generate_perlin(SeedStream& stream, const GeneratorConfig& cfg) {
    cfg.validate();
    return render_perlin(sample_perlin_params(stream, cfg), cfg.width, cfg.height);
}

// ---------------------------------------------------------------------------
// Dead leaves

DeadLeavesParams sample_dead_leaves_params(SeedStream& stream, const GeneratorConfig& cfg) {
    const auto& dl = cfg.dead_leaves;
    const double r_lo = dl.r_min;
    const double r_hi = cfg.dead_leaves_r_max();
    const double a = dl.exponent;
    const bool log_uniform = std::abs(a - 1.0) < 1e-12;
    const double e = 1.0 - a;
    const double lo_e = log_uniform ? std::log(r_lo) : std::pow(r_lo, e);
    const double hi_e = log_uniform ? std::log(r_hi) : std::pow(r_hi, e);

    DeadLeavesParams p;
    p.background = dl.background;
    p.disks.resize(static_cast<std::size_t>(dl.shape_cap));
    for (Disk& d : p.disks) {
        d.cx = stream.uniform(0.0, cfg.width);
        d.cy = stream.uniform(0.0, cfg.height);
        // Inverse CDF of the truncated power law.
        const double t = lo_e + stream.uniform() * (hi_e - lo_e);
        d.r = log_uniform ? std::exp(t) : std::pow(t, 1.0 / e);
        d.intensity = stream.uniform();
    }
    return p;
}

DeadLeavesRender render_dead_leaves_field(const DeadLeavesParams& p, int width, int height) {
    DeadLeavesRender out{GrayField(width, height, p.background), 0, false};
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(width) * height, 0);
    std::size_t remaining = covered.size();
    auto data = out.field.data();
    for (const Disk& d : p.disks) {
        ++out.shapes_painted;
        const double r2 = d.r * d.r;
        const int u0 = std::max(0, static_cast<int>(std::ceil(d.cx - d.r)));
        const int u1 = std::min(width - 1, static_cast<int>(std::floor(d.cx + d.r)));
        const int v0 = std::max(0, static_cast<int>(std::ceil(d.cy - d.r)));
        const int v1 = std::min(height - 1, static_cast<int>(std::floor(d.cy + d.r)));
        for (int v = v0; v <= v1; ++v) {
            const double dy = v - d.cy;
            const double rem = r2 - dy * dy;
            if (rem < 0.0) continue;
            const double half = std::sqrt(rem);
            const int a = std::max(u0, static_cast<int>(std::ceil(d.cx - half)));
            const int b = std::min(u1, static_cast<int>(std::floor(d.cx + half)));
            const std::size_t base = static_cast<std::size_t>(v) * width;
            for (int u = a; u <= b; ++u) {
                if (covered[base + u]) continue;
                covered[base + u] = 1;
                data[base + u] = d.intensity;
                --remaining;
            }
        }
        if (remaining == 0) {
            out.fully_covered = true;
            break;
        }
    }
    return out;
}

ImageBuffer render_dead_leaves(const DeadLeavesParams& p, int width, int height) {
    return replicate_channels(moire::normalize_minmax(render_dead_leaves_field(p, width, height).field));
}

ImageBuffer generate_dead_leaves(SeedStream& stream, const GeneratorConfig& cfg) {
    cfg.validate();
    return render_dead_leaves(sample_dead_leaves_params(stream, cfg), cfg.width, cfg.height);
}

// ---------------------------------------------------------------------------
// Fourier basis (one planar wave per channel)

FourierBasisParams sample_fourier_basis_params(SeedStream& stream, const GeneratorConfig& cfg) {
    const int m = cfg.fourier_basis.max_index;
    FourierBasisParams p;
    for (PlanarWave& w : p.channels) {
        do {
            w.i = static_cast<int>(stream.uniform_int(-m, m));
            w.j = static_cast<int>(stream.uniform_int(-m, m));
        } while (w.i == 0 && w.j == 0);
        w.phase = stream.uniform(0.0, kTwoPi);
    }
    return p;
}

ImageBuffer render_fourier_basis(const FourierBasisParams& p, int width, int height) {
    ImageBuffer out(width, height, 3);
    GrayField wave(width, height);
    for (int c = 0; c < 3; ++c) {
        const PlanarWave& w = p.channels[c];
        const double ku = kTwoPi * w.i / width;
        const double kv = kTwoPi * w.j / width;
        for (int v = 0; v < height; ++v) {
            double* row = wave.data().data() + static_cast<std::size_t>(v) * width;
            const double pv = kv * v + w.phase;
            for (int u = 0; u < width; ++u) row[u] = std::sin(ku * u + pv);
        }
        const GrayField norm = moire::normalize_minmax(wave);
        const auto src = norm.data();
        auto dst = out.data();
        for (std::size_t i = 0; i < src.size(); ++i) dst[3 * i + c] = src[i];
    }
    return out;
}

ImageBuffer generate_fourier_basis(SeedStream& stream, const GeneratorConfig& cfg) {
    cfg.validate();
    return render_fourier_basis(sample_fourier_basis_params(stream, cfg), cfg.width, cfg.height);
}

// ---------------------------------------------------------------------------
// Dispatch

TextureParams sample_params(SeedStream& stream, const GeneratorConfig& cfg) {
    cfg.validate();
    switch (cfg.kind) {
        case GeneratorKind::moire: return moire::sample_moire_params(stream, cfg.moire_config());
        case GeneratorKind::perlin: return sample_perlin_params(stream, cfg);
        case GeneratorKind::dead_leaves: return sample_dead_leaves_params(stream, cfg);
        case GeneratorKind::stripe: return sample_stripe_params(stream, cfg);
        case GeneratorKind::fourier_basis: return sample_fourier_basis_params(stream, cfg);
    }
    throw ConfigError("unhandled generator kind");
}

ImageBuffer render(const TextureParams& params, int width, int height) {
    return std::visit(
        [&](const auto& p) -> ImageBuffer {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, moire::MoireParams>)
                return moire::moire_image_from_params(p, width, height);
            else if constexpr (std::is_same_v<T, PerlinParams>)
                return render_perlin(p, width, height);
            else if constexpr (std::is_same_v<T, DeadLeavesParams>)
                return render_dead_leaves(p, width, height);
            else if constexpr (std::is_same_v<T, StripeParams>)
                return render_stripe(p, width, height);
            else if constexpr (std::is_same_v<T, FourierBasisParams>)
                return render_fourier_basis(p, width, height);
            else
                static_assert(kAlwaysFalse<T>);
        },
        params);
}

ImageBuffer generate(GeneratorKind kind, SeedStream& stream, const GeneratorConfig& cfg) {
    if (kind != cfg.kind)
        throw ConfigError("generator kind " + std::string(to_string(kind)) +
                          " does not match config kind " + std::string(to_string(cfg.kind)));
    return generate(stream, cfg);
}

ImageBuffer generate(SeedStream& stream, const GeneratorConfig& cfg) {
    cfg.validate();
    switch (cfg.kind) {
        case GeneratorKind::moire: return moire::generate_moire_image(stream, cfg.moire_config());
        case GeneratorKind::perlin: return generate_perlin(stream, cfg);
        case GeneratorKind::dead_leaves: return generate_dead_leaves(stream, cfg);
        case GeneratorKind::stripe: return generate_stripe(stream, cfg);
        case GeneratorKind::fourier_basis: return generate_fourier_basis(stream, cfg);
    }
    throw ConfigError("unhandled generator kind");
}

std::string params_json(const TextureParams& params, const GeneratorConfig& cfg) {
    using nlohmann::json;
    json j;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, moire::MoireParams>) {
                j["n"] = p.components.size();
                j["components"] = json::array();
                for (const auto& c : p.components)
                    j["components"].push_back({{"cx", c.cx}, {"cy", c.cy}, {"f", c.f}});
                j["n_max"] = cfg.moire.n_max;
                j["f_min"] = cfg.moire.f_min;
                j["f_max"] = cfg.moire.f_max;
            } else if constexpr (std::is_same_v<T, PerlinParams>) {
                j["cells"] = json::array();
                for (const auto& o : p.octaves) j["cells"].push_back(o.cell);
                j["octaves"] = p.octaves.size();
                j["persistence"] = p.persistence;
            } else if constexpr (std::is_same_v<T, DeadLeavesParams>) {
                j["shapes_sampled"] = p.disks.size();
                j["r_min"] = cfg.dead_leaves.r_min;
                j["r_max"] = cfg.dead_leaves_r_max();
                j["exponent"] = cfg.dead_leaves.exponent;
                j["background"] = p.background;
            } else if constexpr (std::is_same_v<T, StripeParams>) {
                j["f"] = p.f;
                j["theta"] = p.theta;
                j["f_min"] = cfg.stripe.f_min;
                j["f_max"] = cfg.stripe.f_max;
            } else if constexpr (std::is_same_v<T, FourierBasisParams>) {
                j["channels"] = json::array();
                for (const auto& w : p.channels)
                    j["channels"].push_back({{"i", w.i}, {"j", w.j}, {"phase", w.phase}});
                j["max_index"] = cfg.fourier_basis.max_index;
            }
        },
        params);
    return j.dump();
}

}  // namespace moiremix::texgen
