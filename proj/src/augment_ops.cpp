#include "moiremix/augment_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace moiremix::mix {

namespace {

constexpr std::array<AugOp, 9> kAllOps = {AugOp::rotate,      AugOp::shear_x,     AugOp::shear_y,
                                          AugOp::translate_x, AugOp::translate_y, AugOp::posterize,
                                          AugOp::solarize,    AugOp::equalize,    AugOp::autocontrast};

double sample_bilinear(const ImageBuffer& x, double sx, double sy, int c) noexcept {
    const int w = x.width();
    const int h = x.height();
    const double fx0 = std::floor(sx);
    const double fy0 = std::floor(sy);
    const double tx = sx - fx0;
    const double ty = sy - fy0;
    const int x0 = static_cast<int>(fx0);
    const int y0 = static_cast<int>(fy0);
    auto px = [&](int u, int v) {
        return (u < 0 || v < 0 || u >= w || v >= h) ? kGeometryFill : x.at(u, v, c);
    };
    if (tx == 0.0 && ty == 0.0) return px(x0, y0);
    const double top = px(x0, y0) * (1.0 - tx) + px(x0 + 1, y0) * tx;
    const double bottom = px(x0, y0 + 1) * (1.0 - tx) + px(x0 + 1, y0 + 1) * tx;
    return top * (1.0 - ty) + bottom * ty;
}

// out(u, v) = in(a*du + b*dv + cx, c*du + d*dv + cy) with (du, dv) relative to the centre.
ImageBuffer affine_about_centre(const ImageBuffer& x, double a, double b, double c, double d) {
    ImageBuffer out(x.width(), x.height(), x.channels());
    const double cx = (x.width() - 1) / 2.0;
    const double cy = (x.height() - 1) / 2.0;
    for (int v = 0; v < x.height(); ++v) {
        const double dv = v - cy;
        for (int u = 0; u < x.width(); ++u) {
            const double du = u - cx;
            const double sx = a * du + b * dv + cx;
            const double sy = c * du + d * dv + cy;
            for (int ch = 0; ch < x.channels(); ++ch) out.at(u, v, ch) = sample_bilinear(x, sx, sy, ch);
        }
    }
    return out;
}

ImageBuffer translate(const ImageBuffer& x, int du, int dv) {
    ImageBuffer out(x.width(), x.height(), x.channels(), kGeometryFill);
    for (int v = 0; v < x.height(); ++v) {
        const int sv = v - dv;
        if (sv < 0 || sv >= x.height()) continue;
        for (int u = 0; u < x.width(); ++u) {
            const int su = u - du;
            if (su < 0 || su >= x.width()) continue;
            for (int c = 0; c < x.channels(); ++c) out.at(u, v, c) = x.at(su, sv, c);
        }
    }
    return out;
}

ImageBuffer posterize(const ImageBuffer& x, int bits) {
    const double levels = std::ldexp(1.0, bits);
    ImageBuffer out = x;
    for (double& v : out.data()) {
        const double q = std::min(std::floor(std::clamp(v, 0.0, 1.0) * levels), levels - 1.0);
        v = q / (levels - 1.0);
    }
    return out;
}

ImageBuffer solarize(const ImageBuffer& x, double threshold) {
    ImageBuffer out = x;
    for (double& v : out.data())
        if (v > threshold) v = 1.0 - v;
    return out;
}

// Histogram equalization on the 8-bit quantized channel, same lookup-table
// construction as the common imaging-library implementation.
ImageBuffer equalize(const ImageBuffer& x) {
    ImageBuffer out = x;
    const int nc = x.channels();
    const std::size_t n = x.pixel_count();
    for (int c = 0; c < nc; ++c) {
        std::array<std::size_t, 256> hist{};
        for (std::size_t i = 0; i < n; ++i) ++hist[quantize_byte(x.data()[i * nc + c])];
        std::size_t last = 0;
        for (int b = 255; b >= 0; --b)
            if (hist[b]) {
                last = hist[b];
                break;
            }
        const std::size_t step = (n - last) / 255;
        if (step == 0) continue;
        std::array<double, 256> lut{};
        std::size_t acc = step / 2;
        for (int b = 0; b < 256; ++b) {
            lut[b] = std::min<std::size_t>(acc / step, 255) / 255.0;
            acc += hist[b];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double& v = out.data()[i * nc + c];
            v = lut[quantize_byte(v)];
        }
    }
    return out;
}

ImageBuffer autocontrast(const ImageBuffer& x) {
    ImageBuffer out = x;
    const int nc = x.channels();
    const std::size_t n = x.pixel_count();
    for (int c = 0; c < nc; ++c) {
        double lo = 1.0, hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            lo = std::min(lo, x.data()[i * nc + c]);
            hi = std::max(hi, x.data()[i * nc + c]);
        }
        if (!(hi > lo)) continue;
        for (std::size_t i = 0; i < n; ++i) {
            double& v = out.data()[i * nc + c];
            v = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(AugOp op) noexcept {
    switch (op) {
        case AugOp::rotate: return "rotate";
        case AugOp::shear_x: return "shear_x";
        case AugOp::shear_y: return "shear_y";
        case AugOp::translate_x: return "translate_x";
        case AugOp::translate_y: return "translate_y";
        case AugOp::posterize: return "posterize";
        case AugOp::solarize: return "solarize";
        case AugOp::equalize: return "equalize";
        case AugOp::autocontrast: return "autocontrast";
    }
    return "unknown";
}

AugOp parse_aug_op(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '-', '_');
    for (AugOp op : kAllOps)
        if (to_string(op) == s) return op;
    throw ConfigError("unknown augmentation op '" + std::string(name) + "'");
}

std::vector<AugOp> parse_aug_ops(std::string_view list) {
    std::vector<AugOp> ops;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = std::min(list.find(',', pos), list.size());
        auto item = list.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) ops.push_back(parse_aug_op(item));
        pos = comma + 1;
    }
    if (ops.empty()) throw ConfigError("augmentation op list is empty");
    return ops;
}

std::vector<AugOp> default_aug_ops() { return {kAllOps.begin(), kAllOps.end()}; }

AugChoice sample_aug_choice(SeedStream& stream, std::span<const AugOp> ops, int width, int height) {
    if (ops.empty()) throw ConfigError("augmentation op list is empty");
    AugChoice choice;
    choice.op = ops[static_cast<std::size_t>(stream.uniform_int(0, static_cast<std::int64_t>(ops.size()) - 1))];
    switch (choice.op) {
        case AugOp::rotate: choice.param = stream.uniform(-30.0, 30.0); break;
        case AugOp::shear_x:
        case AugOp::shear_y: choice.param = stream.uniform(-0.3, 0.3); break;
        case AugOp::translate_x: choice.param = static_cast<double>(stream.uniform_int(-(width / 3), width / 3)); break;
        case AugOp::translate_y: choice.param = static_cast<double>(stream.uniform_int(-(height / 3), height / 3)); break;
        case AugOp::posterize: choice.param = static_cast<double>(stream.uniform_int(1, 4)); break;
        case AugOp::solarize: choice.param = stream.uniform(0.3, 1.0); break;
        case AugOp::equalize:
        case AugOp::autocontrast: break;
    }
    return choice;
}

ImageBuffer apply_aug(const ImageBuffer& x, const AugChoice& choice) {
    switch (choice.op) {
        case AugOp::rotate: {
            const double t = choice.param * std::numbers::pi / 180.0;
            const double c = std::cos(t), s = std::sin(t);
            return affine_about_centre(x, c, s, -s, c);
        }
        case AugOp::shear_x: return affine_about_centre(x, 1.0, choice.param, 0.0, 1.0);
        case AugOp::shear_y: return affine_about_centre(x, 1.0, 0.0, choice.param, 1.0);
        case AugOp::translate_x: return translate(x, static_cast<int>(choice.param), 0);
        case AugOp::translate_y: return translate(x, 0, static_cast<int>(choice.param));
        case AugOp::posterize: {
            const int bits = static_cast<int>(choice.param);
            if (bits < 1 || bits > 8) throw ConfigError("posterize bits must be in 1..8");
            return posterize(x, bits);
        }
        case AugOp::solarize: return solarize(x, choice.param);
        case AugOp::equalize: return equalize(x);
        case AugOp::autocontrast: return autocontrast(x);
    }
    throw ConfigError("unhandled augmentation op");
}

ImageBuffer base_augment(const ImageBuffer& x, SeedStream& stream, std::span<const AugOp> ops,
                         AugChoice* chosen) {
    const AugChoice choice = sample_aug_choice(stream, ops, x.width(), x.height());
    if (chosen) *chosen = choice;
    return apply_aug(x, choice);
}

}  // namespace moiremix::mix
