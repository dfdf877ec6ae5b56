#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moiremix/augment_ops.hpp"
#include "moiremix/image.hpp"
#include "moiremix/random.hpp"
#include "moiremix/texgen.hpp"

namespace moiremix::mix {

enum class MixOpKind { add, multiply };
enum class MixSource { augmented_input, procedural };

std::string_view to_string(MixOpKind op) noexcept;
std::string_view to_string(MixSource src) noexcept;

/// Per-channel (x - mean) / stddev applied after the final clip.
struct Standardize {
    std::vector<double> mean;
    std::vector<double> stddev;
};

struct MixConfig {
    int k = 4;          // maximum mixing rounds; rounds ~ U{0..k}
    double beta = 4.0;  // Beta shape for the blend coefficients
    texgen::GeneratorConfig generator;
    std::vector<AugOp> aug_ops = default_aug_ops();
    std::optional<Standardize> standardize;

    void validate() const;
};

struct Coefficients {
    double a = 1.0;
    double b = 0.0;
};

/**
 * Blend weights. With probability 1/2: a ~ Beta(beta, 1), b ~ Beta(1, beta);
 * otherwise a = 1 + Beta(1, beta), b = -Beta(1, beta) with independent draws.
 * Draw order: branch coin, then a's draw, then b's draw.
 */
Coefficients sample_coefficients(SeedStream& stream, double beta);

/// Floor applied to the second operand of a multiplicative blend.
inline constexpr double kMultiplyFloor = 1e-37;

/**
 * add:      ((a*(2*x1-1) + b*(2*x2-1)) + 1) / 2
 * multiply: (max(2*x1, 0)^a * max(2*x2, floor)^b) / 2
 *
 * No clipping; a single-channel x2 is broadcast over x1's channels.
 */
ImageBuffer mix_op(const ImageBuffer& x1, const ImageBuffer& x2, MixOpKind op, double a, double b);

struct RoundRecord {
    MixSource source = MixSource::procedural;
    std::optional<AugChoice> aug;  // set when source == augmented_input
    MixOpKind op = MixOpKind::add;
    Coefficients coeffs;
};

/// Every random decision taken by augment(), enough to replay it exactly.
struct MixTrace {
    std::optional<AugChoice> base_aug;  // empty when the original image was kept
    int rounds = 0;
    std::vector<RoundRecord> records;
    std::uint64_t texture_key = 0;  // SeedStream key the texture was generated from
};

struct MixResult {
    ImageBuffer image;
    MixTrace trace;
};

/// Generates the mixing texture for `x` from the texture child of `stream`,
/// at x's resolution.
ImageBuffer procedural_texture(const ImageBuffer& x, const SeedStream& stream, const MixConfig& cfg);

/**
 * The full stochastic pipeline: keep-or-augment the base image, draw the
 * number of rounds, blend each round with either an augmented copy of x or
 * the procedural texture (rendered once per image), clip to [0, 1] and
 * optionally standardize.
 */
MixResult augment(const ImageBuffer& x, SeedStream& stream, const MixConfig& cfg);

/// Recomputes augment() from its trace; bit-identical to the original output.
ImageBuffer replay(const ImageBuffer& x, const MixTrace& trace, const MixConfig& cfg);

std::string trace_to_json(const MixTrace& trace);
MixTrace trace_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Static texture export

struct ManifestRow {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    std::string generator;
    std::string params_json;
    std::string file;
};

struct Manifest {
    std::vector<ManifestRow> rows;
};

inline constexpr const char* kManifestHeader = "index,seed,generator,params_json";

/// File name for texture `index`: zero-padded to six digits plus ".png".
std::string texture_file_name(std::uint64_t index);

/// Writes `count` textures generated from derive_stream(root_seed, index)
/// plus manifest.csv into out_dir (created if missing).
Manifest export_dataset(std::uint64_t count, const texgen::GeneratorConfig& cfg,
                        const std::filesystem::path& out_dir, std::uint64_t root_seed, int workers = 1);

}  // namespace moiremix::mix
