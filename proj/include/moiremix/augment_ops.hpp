#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moiremix/image.hpp"
#include "moiremix/random.hpp"

namespace moiremix::mix {

enum class AugOp {
    rotate,
    shear_x,
    shear_y,
    translate_x,
    translate_y,
    posterize,
    solarize,
    equalize,
    autocontrast,
};

std::string_view to_string(AugOp op) noexcept;
/// Accepts snake_case or hyphenated names; throws ConfigError on unknown names.
AugOp parse_aug_op(std::string_view name);
std::vector<AugOp> parse_aug_ops(std::string_view comma_separated);
std::vector<AugOp> default_aug_ops();

/// One concrete augmentation: the op plus its sampled magnitude.
/// rotate: degrees; shear: shear factor; translate: integer pixels;
/// posterize: bits kept (1..4); solarize: threshold; equalize/autocontrast: unused.
struct AugChoice {
    AugOp op = AugOp::rotate;
    double param = 0.0;

    friend bool operator==(const AugChoice&, const AugChoice&) = default;
};

/// Fill value for pixels uncovered by a geometric op.
inline constexpr double kGeometryFill = 0.5;

/// Severity ranges: rotate +-30 deg, shear +-0.3, translate +-1/3 of the extent,
/// posterize 1..4 bits, solarize threshold in [0.3, 1].
AugChoice sample_aug_choice(SeedStream& stream, std::span<const AugOp> ops, int width, int height);

/// Applies a fixed choice; output values stay in [0, 1] for [0, 1] input.
ImageBuffer apply_aug(const ImageBuffer& x, const AugChoice& choice);

/// Picks an op uniformly from `ops` at a random severity and applies it.
ImageBuffer base_augment(const ImageBuffer& x, SeedStream& stream, std::span<const AugOp> ops,
                         AugChoice* chosen = nullptr);

}  // namespace moiremix::mix
