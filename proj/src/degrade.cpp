#include "moiremix/degrade.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "moiremix/csv.hpp"
#include "moiremix/image_io.hpp"
#include "moiremix/parallel.hpp"

namespace moiremix::degrade {

namespace fs = std::filesystem;

namespace {

constexpr double kFill = 0.5;
constexpr double kSnap = 1e-9;

int reflect101(int i, int n) noexcept {
    if (n == 1) return 0;
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}

double snap(double t) noexcept {
    const double r = std::nearbyint(t);
    return std::abs(t - r) < kSnap ? r : t;
}

double deg2rad(double d) noexcept { return d * std::numbers::pi / 180.0; }

// Bilinear read of channel c at (us, vs); kFill outside the sample lattice.
double bilinear(const ImageBuffer& x, double us, double vs, int c) noexcept {
    const int w = x.width();
    const int h = x.height();
    if (!(us >= 0.0 && vs >= 0.0 && us <= w - 1 && vs <= h - 1)) return kFill;
    const int u0 = static_cast<int>(std::floor(us));
    const int v0 = static_cast<int>(std::floor(vs));
    const double fu = us - u0;
    const double fv = vs - v0;
    const int u1 = std::min(u0 + 1, w - 1);
    const int v1 = std::min(v0 + 1, h - 1);
    if (fu == 0.0 && fv == 0.0) return x.at(u0, v0, c);
    const double top = x.at(u0, v0, c) + fu * (x.at(u1, v0, c) - x.at(u0, v0, c));
    const double bot = x.at(u0, v1, c) + fu * (x.at(u1, v1, c) - x.at(u0, v1, c));
    return top + fv * (bot - top);
}

}  // namespace

std::string_view to_string(CfaPattern p) noexcept {
    switch (p) {
        case CfaPattern::rggb: return "RGGB";
        case CfaPattern::bggr: return "BGGR";
        case CfaPattern::grbg: return "GRBG";
        case CfaPattern::gbrg: return "GBRG";
    }
    return "?";
}

CfaPattern parse_cfa(std::string_view name) {
    std::string up(name);
    for (char& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (CfaPattern p : {CfaPattern::rggb, CfaPattern::bggr, CfaPattern::grbg, CfaPattern::gbrg})
        if (up == to_string(p)) return p;
    throw ConfigError("unknown CFA pattern '" + std::string(name) + "' (expected RGGB, BGGR, GRBG or GBRG)");
}

void DegradeConfig::validate() const {
    if (lcd_scale < 1) throw ConfigError("lcd_scale must be >= 1");
    if (lcd_scale == 2) throw ConfigError("lcd_scale 2 cannot hold three subpixel stripes; use 1 or >= 3");
    if (!(tilt_deg >= 0.0 && tilt_deg < 60.0)) throw ConfigError("tilt_deg must be in [0, 60)");
    if (!(scale_jitter >= 0.0 && scale_jitter < 0.5)) throw ConfigError("scale_jitter must be in [0, 0.5)");
    if (jpeg_quality_min < 1 || jpeg_quality_max > 100 || jpeg_quality_min > jpeg_quality_max)
        throw ConfigError("jpeg quality range must satisfy 1 <= min <= max <= 100");
    if (!(sharpen_amount >= 0.0) || !std::isfinite(sharpen_amount))
        throw ConfigError("sharpen_amount must be a finite value >= 0");
}

ImageBuffer lcd_resample(const ImageBuffer& x, const DegradeConfig& cfg) {
    cfg.validate();
    if (x.channels() != 3) throw ConfigError("lcd_resample needs a 3-channel image");
    const int s = cfg.lcd_scale;
    if (s == 1) return x;

    std::vector<int> stripe(static_cast<std::size_t>(s));
    int width[3] = {0, 0, 0};
    for (int c = 0; c < s; ++c) {
        stripe[c] = 3 * c / s;
        ++width[stripe[c]];
    }
    double gain[3];
    for (int k = 0; k < 3; ++k) gain[k] = static_cast<double>(s) / width[k];

    ImageBuffer out(x.width() * s, x.height() * s, 3, 0.0);
    for (int v = 0; v < x.height(); ++v)
        for (int u = 0; u < x.width(); ++u)
            for (int dv = 0; dv < s; ++dv)
                for (int du = 0; du < s; ++du) {
                    const int ch = stripe[du];
                    out.at(u * s + du, v * s + dv, ch) = gain[ch] * x.at(u, v, ch);
                }
    return out;
}

WarpParams sample_warp(SeedStream& stream, const DegradeConfig& cfg) {
    WarpParams p;
    p.tilt_x_deg = cfg.tilt_deg > 0.0 ? stream.uniform(-cfg.tilt_deg, cfg.tilt_deg) : 0.0;
    p.tilt_y_deg = cfg.tilt_deg > 0.0 ? stream.uniform(-cfg.tilt_deg, cfg.tilt_deg) : 0.0;
    p.scale = cfg.scale_jitter > 0.0 ? stream.uniform(1.0 - cfg.scale_jitter, 1.0 + cfg.scale_jitter) : 1.0;
    return p;
}

Homography warp_homography(const WarpParams& p) {
    const double ax = deg2rad(p.tilt_x_deg);
    const double ay = deg2rad(p.tilt_y_deg);
    const double cx = std::cos(ax), sx = std::sin(ax);
    const double cy = std::cos(ay), sy = std::sin(ay);
    // R = Ry(ay) * Rx(ax); only the first two columns act on the plane z = 0.
    const double r00 = cy, r01 = sy * sx;
    const double r10 = 0.0, r11 = cx;
    const double r20 = -sy, r21 = cy * sx;
    const double s = p.scale;
    return {s * r00, s * r01, 0.0, s * r10, s * r11, 0.0, r20, r21, 1.0};
}

Homography invert(const Homography& m) {
    const double a = m[0], b = m[1], c = m[2], d = m[3], e = m[4], f = m[5], g = m[6], h = m[7], i = m[8];
    const double A = e * i - f * h, B = -(d * i - f * g), C = d * h - e * g;
    const double det = a * A + b * B + c * C;
    if (std::abs(det) < 1e-300) throw ConfigError("singular homography");
    const double inv = 1.0 / det;
    return {A * inv,
            -(b * i - c * h) * inv,
            (b * f - c * e) * inv,
            B * inv,
            (a * i - c * g) * inv,
            -(a * f - c * d) * inv,
            C * inv,
            -(a * h - b * g) * inv,
            (a * e - b * d) * inv};
}

std::array<double, 2> apply_homography(const Homography& m, double x, double y) noexcept {
    const double w = m[6] * x + m[7] * y + m[8];
    return {(m[0] * x + m[1] * y + m[2]) / w, (m[3] * x + m[4] * y + m[5]) / w};
}

ImageBuffer warp_image(const ImageBuffer& x, const WarpParams& p, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw ConfigError("warp output size must be positive");
    const Homography hinv = invert(warp_homography(p));
    const int wi = x.width();
    const int hi = x.height();
    const int nc = x.channels();
    const int tx = std::max(1, static_cast<int>(std::lround(static_cast<double>(wi) / out_w)));
    const int ty = std::max(1, static_cast<int>(std::lround(static_cast<double>(hi) / out_h)));
    const double taps = static_cast<double>(tx) * ty;

    ImageBuffer out(out_w, out_h, nc, 0.0);
    std::vector<double> acc(static_cast<std::size_t>(nc));
    for (int v = 0; v < out_h; ++v) {
        for (int u = 0; u < out_w; ++u) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int sy = 0; sy < ty; ++sy) {
                const double vo = v + (sy + 0.5) / ty - 0.5;
                for (int sx = 0; sx < tx; ++sx) {
                    const double uo = u + (sx + 0.5) / tx - 0.5;
                    const double xn = (uo + 0.5 - out_w / 2.0) / out_w;
                    const double yn = (vo + 0.5 - out_h / 2.0) / out_w;
                    const auto src = apply_homography(hinv, xn, yn);
                    const double us = snap(src[0] * wi + wi / 2.0 - 0.5);
                    const double vs = snap(src[1] * wi + hi / 2.0 - 0.5);
                    for (int c = 0; c < nc; ++c) acc[c] += bilinear(x, us, vs, c);
                }
            }
            for (int c = 0; c < nc; ++c) out.at(u, v, c) = taps == 1.0 ? acc[c] : acc[c] / taps;
        }
    }
    clip_unit(out);
    return out;
}

ImageBuffer geometric_transform(const ImageBuffer& x, SeedStream& stream, const DegradeConfig& cfg) {
    cfg.validate();
    return warp_image(x, sample_warp(stream, cfg), x.width(), x.height());
}

int cfa_channel(CfaPattern p, int u, int v) noexcept {
    const std::string_view name = to_string(p);
    const char ch = name[static_cast<std::size_t>((v & 1) * 2 + (u & 1))];
    return ch == 'R' ? 0 : ch == 'G' ? 1 : 2;
}

ImageBuffer bayer_cfa(const ImageBuffer& x, const DegradeConfig& cfg) {
    if (x.channels() != 3) throw ConfigError("bayer_cfa needs a 3-channel image");
    const int w = x.width();
    const int h = x.height();
    if (w < 2 || h < 2) throw ConfigError("bayer_cfa needs an image of at least 2x2");
    const CfaPattern pat = cfg.cfa;

    GrayField m(w, h);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u) m.at(u, v) = x.at(u, v, cfa_channel(pat, u, v));

    auto at = [&](int u, int v) { return m.at(reflect101(u, w), reflect101(v, h)); };

    ImageBuffer out(w, h, 3, 0.0);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const int site = cfa_channel(pat, u, v);
            for (int c = 0; c < 3; ++c) {
                double val;
                if (site == c) {
                    val = m.at(u, v);
                } else if (c == 1) {
                    val = 0.5 * (0.5 * (at(u - 1, v) + at(u + 1, v)) + 0.5 * (at(u, v - 1) + at(u, v + 1)));
                } else if (site == 1) {
                    if (cfa_channel(pat, u + 1, v) == c)
                        val = 0.5 * (at(u - 1, v) + at(u + 1, v));
                    else
                        val = 0.5 * (at(u, v - 1) + at(u, v + 1));
                } else {
                    val = 0.5 * (0.5 * (at(u - 1, v - 1) + at(u + 1, v + 1)) +
                                 0.5 * (at(u + 1, v - 1) + at(u - 1, v + 1)));
                }
                out.at(u, v, c) = val;
            }
        }
    }
    return out;
}

ImageBuffer signal_process(const ImageBuffer& x, const DegradeConfig& cfg) {
    if (!(cfg.sharpen_amount >= 0.0)) throw ConfigError("sharpen_amount must be >= 0");
    const int w = x.width();
    const int h = x.height();
    const int nc = x.channels();
    const double amount = cfg.sharpen_amount;

    ImageBuffer tmp(w, h, nc, 0.0);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u)
            for (int c = 0; c < nc; ++c)
                tmp.at(u, v, c) =
                    0.5 * (0.5 * (x.at(reflect101(u - 1, w), v, c) + x.at(reflect101(u + 1, w), v, c)) +
                           x.at(u, v, c));

    ImageBuffer out(w, h, nc, 0.0);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u)
            for (int c = 0; c < nc; ++c) {
                const double blur =
                    0.5 * (0.5 * (tmp.at(u, reflect101(v - 1, h), c) + tmp.at(u, reflect101(v + 1, h), c)) +
                           tmp.at(u, v, c));
                const double orig = x.at(u, v, c);
                out.at(u, v, c) = orig + amount * (orig - blur);
            }
    clip_unit(out);
    return out;
}

ImageBuffer degrade(const ImageBuffer& x, SeedStream& stream, const DegradeConfig& cfg, DegradeRecord* record) {
    cfg.validate();
    if (x.channels() != 3) throw ConfigError("degrade needs a 3-channel image");
    DegradeRecord rec;
    rec.warp = sample_warp(stream, cfg);
    rec.jpeg_quality = static_cast<int>(stream.uniform_int(cfg.jpeg_quality_min, cfg.jpeg_quality_max));

    ImageBuffer y = lcd_resample(x, cfg);
    y = warp_image(y, rec.warp, x.width(), x.height());
    y = bayer_cfa(y, cfg);
    y = signal_process(y, cfg);
    y = jpeg_roundtrip(y, rec.jpeg_quality);
    if (record) *record = rec;
    return y;
}

BatchSummary degrade_directory(const fs::path& in_dir, const fs::path& out_dir, const DegradeConfig& cfg,
                               std::uint64_t root_seed, int workers) {
    cfg.validate();
    const std::vector<fs::path> files = list_image_files(in_dir);
    std::vector<std::string> log(files.size());
    std::vector<std::string> failure(files.size());

    parallel_for(files.size(), workers, [&](std::size_t i) {
        const fs::path& rel = files[i];
        std::ostringstream line;
        line.precision(17);
        line << csv::escape(rel.generic_string()) << ',' << root_seed << ',' << i << ',';
        try {
            const ImageBuffer img = load_image(in_dir / rel);
            const ImageBuffer rgb = img.channels() == 3 ? img : replicate_channels(channel_mean(img));
            SeedStream stream = SeedStream::derive(root_seed, i).fork(stream_tag::kDegrade);
            DegradeRecord rec;
            const ImageBuffer out = degrade(rgb, stream, cfg, &rec);
            const fs::path dst = out_dir / rel;
            fs::create_directories(dst.parent_path());
            save_image(out, dst, format_from_extension(rel).value_or(ImageFormat::png), 95);
            line << rec.warp.tilt_x_deg << ',' << rec.warp.tilt_y_deg << ',' << rec.warp.scale << ','
                 << rec.jpeg_quality << ",ok";
        } catch (const std::exception& e) {
            failure[i] = rel.generic_string() + ": " + e.what();
            line << ",,,," << csv::escape(std::string("error: ") + e.what());
        }
        log[i] = line.str();
    });

    fs::create_directories(out_dir);
    const fs::path log_path = out_dir / "degrade_log.csv";
    std::ofstream out(log_path, std::ios::trunc);
    if (!out) throw IoError(log_path.string() + ": cannot open for writing");
    out << kDegradeLogHeader << '\n';
    for (const auto& l : log) out << l << '\n';

    BatchSummary summary;
    for (auto& f : failure) {
        if (f.empty())
            ++summary.processed;
        else
            summary.failures.push_back(std::move(f));
    }
    return summary;
}

}  // namespace moiremix::degrade
