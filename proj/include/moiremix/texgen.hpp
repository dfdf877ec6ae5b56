#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moiremix/image.hpp"
#include "moiremix/moire.hpp"
#include "moiremix/random.hpp"

namespace moiremix::texgen {

enum class GeneratorKind { moire, perlin, dead_leaves, stripe, fourier_basis };

inline constexpr std::array<GeneratorKind, 5> kAllKinds = {
    GeneratorKind::moire, GeneratorKind::perlin, GeneratorKind::dead_leaves, GeneratorKind::stripe,
    GeneratorKind::fourier_basis};

std::string_view to_string(GeneratorKind kind) noexcept;
/// Accepts the canonical snake_case names and their hyphenated spellings.
GeneratorKind parse_kind(std::string_view name);

// Defaults below are this toolkit's choices; the generators other than moire
// have no published parameters.

struct PerlinConfig {
    int cell_min = 16;  // lattice cell size in pixels, drawn uniformly from [cell_min, cell_max]
    int cell_max = 64;
    int octaves = 1;
    double persistence = 0.5;  // amplitude ratio between successive octaves
};

struct DeadLeavesConfig {
    double exponent = 3.0;  // radius density ~ r^-exponent
    double r_min = 2.0;
    double r_max = 0.0;  // <= 0 means width / 2
    int shape_cap = 2000;
    double background = 0.5;
};

struct StripeConfig {
    double f_min = 1.0;
    double f_max = 100.0;
};

struct FourierBasisConfig {
    int max_index = 32;  // (i, j) drawn from [-max_index, max_index]^2 without (0, 0)
};

struct GeneratorConfig {
    GeneratorKind kind = GeneratorKind::moire;
    int width = 224;
    int height = 224;
    moire::MoireConfig moire;  // width/height here are ignored in favour of the fields above
    PerlinConfig perlin;
    DeadLeavesConfig dead_leaves;
    StripeConfig stripe;
    FourierBasisConfig fourier_basis;

    void validate() const;
    moire::MoireConfig moire_config() const;
    double dead_leaves_r_max() const;
};

struct StripeParams {
    double f = 1.0;
    double theta = 0.0;  // radians in [0, pi)
};

struct PerlinOctave {
    int cell = 16;
    int grid_w = 0;
    int grid_h = 0;
    std::vector<double> gx;  // unit gradients, row-major over the lattice
    std::vector<double> gy;
};

struct PerlinParams {
    std::vector<PerlinOctave> octaves;
    double persistence = 0.5;
};

struct Disk {
    double cx = 0.0;
    double cy = 0.0;
    double r = 1.0;
    double intensity = 0.5;
};

/// Disk 0 is front-most; every later disk lies behind all earlier ones.
struct DeadLeavesParams {
    std::vector<Disk> disks;
    double background = 0.5;
};

struct PlanarWave {
    int i = 1;  // cycles per width along u
    int j = 0;  // cycles per width along v
    double phase = 0.0;
};

struct FourierBasisParams {
    std::array<PlanarWave, 3> channels;
};

using TextureParams =
    std::variant<moire::MoireParams, PerlinParams, DeadLeavesParams, StripeParams, FourierBasisParams>;

StripeParams sample_stripe_params(SeedStream& stream, const GeneratorConfig& cfg);
PerlinParams sample_perlin_params(SeedStream& stream, const GeneratorConfig& cfg);
DeadLeavesParams sample_dead_leaves_params(SeedStream& stream, const GeneratorConfig& cfg);
FourierBasisParams sample_fourier_basis_params(SeedStream& stream, const GeneratorConfig& cfg);

/// sin(2*pi*f*(u cos(theta) + v sin(theta)) / W) before normalization.
GrayField render_stripe_field(const StripeParams& p, int width, int height);
/// Gradient noise with quintic fade; exactly zero at lattice corners for one octave.
GrayField render_perlin_field(const PerlinParams& p, int width, int height);

struct DeadLeavesRender {
    GrayField field;
    int shapes_painted = 0;
    bool fully_covered = false;
};
/// Paints front to back, stopping once every pixel is covered.
DeadLeavesRender render_dead_leaves_field(const DeadLeavesParams& p, int width, int height);

ImageBuffer render_stripe(const StripeParams& p, int width, int height);
ImageBuffer render_perlin(const PerlinParams& p, int width, int height);
ImageBuffer render_dead_leaves(const DeadLeavesParams& p, int width, int height);
/// One planar wave per channel, each channel min-max normalized independently.
ImageBuffer render_fourier_basis(const FourierBasisParams& p, int width, int height);

ImageBuffer generate_stripe(SeedStream& stream, const GeneratorConfig& cfg);
ImageBuffer generate_perlin(SeedStream& stream, const GeneratorConfig& cfg);
ImageBuffer generate_dead_leaves(SeedStream& stream, const GeneratorConfig& cfg);
ImageBuffer generate_fourier_basis(SeedStream& stream, const GeneratorConfig& cfg);

TextureParams sample_params(SeedStream& stream, const GeneratorConfig& cfg);
ImageBuffer render(const TextureParams& params, int width, int height);

/// Dispatch on `kind`; throws ConfigError when cfg.kind differs.
ImageBuffer generate(GeneratorKind kind, SeedStream& stream, const GeneratorConfig& cfg);
/// Dispatch on cfg.kind.
ImageBuffer generate(SeedStream& stream, const GeneratorConfig& cfg);

/// Compact JSON describing the sampled parameters and the configured ranges.
std::string params_json(const TextureParams& params, const GeneratorConfig& cfg);

}  // namespace moiremix::texgen
