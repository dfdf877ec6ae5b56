#include "moiremix/mixer.hpp"

#include <cmath>

#include <json.hpp>

namespace moiremix::mix {

std::string_view to_string(MixOpKind op) noexcept { return op == MixOpKind::add ? "add" : "multiply"; }

std::string_view to_string(MixSource src) noexcept {
    return src == MixSource::augmented_input ? "augmented_input" : "procedural";
}

void MixConfig::validate() const {
    if (k < 0) throw ConfigError("mix k must be >= 0");
    if (!(beta > 0.0)) throw ConfigError("mix beta must be > 0");
    if (aug_ops.empty()) throw ConfigError("mix aug_ops must not be empty");
    if (standardize) {
        if (standardize->mean.size() != standardize->stddev.size() || standardize->mean.empty())
            throw ConfigError("standardize mean and stddev must have the same non-zero length");
        for (double s : standardize->stddev)
            if (!(s > 0.0)) throw ConfigError("standardize stddev must be > 0");
    }
}

Coefficients sample_coefficients(SeedStream& stream, double beta) {
    Coefficients c;
    if (stream.coin()) {
        c.a = stream.beta_a1(beta);
        c.b = stream.beta_1b(beta);
    } else {
        c.a = 1.0 + stream.beta_1b(beta);
        c.b = -stream.beta_1b(beta);
    }
    return c;
}

ImageBuffer mix_op(const ImageBuffer& x1, const ImageBuffer& x2, MixOpKind op, double a, double b) {
    if (x1.width() != x2.width() || x1.height() != x2.height())
        throw ConfigError("mix_op dimension mismatch: " + std::to_string(x1.width()) + "x" +
                          std::to_string(x1.height()) + " vs " + std::to_string(x2.width()) + "x" +
                          std::to_string(x2.height()));
    if (x2.channels() != x1.channels() && x2.channels() != 1)
        throw ConfigError("mix_op channel mismatch: " + std::to_string(x1.channels()) + " vs " +
                          std::to_string(x2.channels()));
    ImageBuffer out(x1.width(), x1.height(), x1.channels());
    // a*(2*x1-1) + b*(2*x2-1) mapped back by (y+1)/2, in expanded form.
    const double offset = (1.0 - a - b) / 2.0;
    const int c1 = x1.channels();
    const int c2 = x2.channels();
    const auto p = x1.data();
    const auto q = x2.data();
    auto o = out.data();
    const std::size_t n = x1.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < c1; ++c) {
            const double v1 = p[i * c1 + c];
            const double v2 = q[i * c2 + (c2 == 1 ? 0 : c)];
            double y;
            if (op == MixOpKind::add) {
                y = a * v1 + b * v2 + offset;
            } else {
                // Unclipped intermediates can be negative.
                const double base1 = std::max(2.0 * v1, 0.0);
                const double base2 = std::max(2.0 * v2, kMultiplyFloor);
                y = std::pow(base1, a) * std::pow(base2, b) / 2.0;
            }
            o[i * c1 + c] = y;
        }
    }
    return out;
}

namespace {

ImageBuffer texture_from_key(const ImageBuffer& x, std::uint64_t key, const MixConfig& cfg) {
    texgen::GeneratorConfig gen = cfg.generator;
    gen.width = x.width();
    gen.height = x.height();
    SeedStream tex = SeedStream::from_key(key);
    ImageBuffer texture = texgen::generate(tex, gen);
    if (x.channels() == 1) {
        const GrayField g = channel_mean(texture);
        return ImageBuffer(g.width(), g.height(), 1, std::vector<double>(g.data().begin(), g.data().end()));
    }
    return texture;
}

}  // namespace

ImageBuffer procedural_texture(const ImageBuffer& x, const SeedStream& stream, const MixConfig& cfg) {
    return texture_from_key(x, stream.fork(stream_tag::kTexture).key(), cfg);
}

namespace {

ImageBuffer finish(ImageBuffer img, const MixConfig& cfg) {
    clip_unit(img);
    if (cfg.standardize) {
        const auto& s = *cfg.standardize;
        const int nc = img.channels();
        if (static_cast<int>(s.mean.size()) != nc)
            throw ConfigError("standardize has " + std::to_string(s.mean.size()) +
                              " channels but the image has " + std::to_string(nc));
        auto d = img.data();
        for (std::size_t i = 0; i < d.size(); ++i) {
            const std::size_t c = i % static_cast<std::size_t>(nc);
            d[i] = (d[i] - s.mean[c]) / s.stddev[c];
        }
    }
    return img;
}

}  // namespace

MixResult augment(const ImageBuffer& x, SeedStream& stream, const MixConfig& cfg) {
    cfg.validate();
    MixResult result;
    MixTrace& trace = result.trace;
    trace.texture_key = stream.fork(stream_tag::kTexture).key();
    const ImageBuffer texture = procedural_texture(x, stream, cfg);

    ImageBuffer mixed;
    if (stream.coin()) {
        AugChoice choice;
        mixed = base_augment(x, stream, cfg.aug_ops, &choice);
        trace.base_aug = choice;
    } else {
        mixed = x;
    }

    trace.rounds = static_cast<int>(stream.uniform_int(0, cfg.k));
    for (int r = 0; r < trace.rounds; ++r) {
        RoundRecord rec;
        ImageBuffer partner;
        if (stream.coin()) {
            rec.source = MixSource::augmented_input;
            AugChoice choice;
            partner = base_augment(x, stream, cfg.aug_ops, &choice);
            rec.aug = choice;
        } else {
            rec.source = MixSource::procedural;
        }
        rec.op = stream.coin() ? MixOpKind::add : MixOpKind::multiply;
        rec.coeffs = sample_coefficients(stream, cfg.beta);
        const ImageBuffer& other = rec.source == MixSource::procedural ? texture : partner;
        mixed = mix_op(mixed, other, rec.op, rec.coeffs.a, rec.coeffs.b);
        trace.records.push_back(rec);
    }
    result.image = finish(std::move(mixed), cfg);
    return result;
}

ImageBuffer replay(const ImageBuffer& x, const MixTrace& trace, const MixConfig& cfg) {
    if (static_cast<int>(trace.records.size()) != trace.rounds)
        throw ConfigError("trace round count does not match its records");
    std::optional<ImageBuffer> texture;
    ImageBuffer mixed = trace.base_aug ? apply_aug(x, *trace.base_aug) : x;
    for (const RoundRecord& rec : trace.records) {
        ImageBuffer partner;
        if (rec.source == MixSource::augmented_input) {
            if (!rec.aug) throw ConfigError("trace round uses an augmented input without an op record");
            partner = apply_aug(x, *rec.aug);
        } else {
            if (!texture) texture = texture_from_key(x, trace.texture_key, cfg);
            partner = *texture;
        }
        mixed = mix_op(mixed, partner, rec.op, rec.coeffs.a, rec.coeffs.b);
    }
    return finish(std::move(mixed), cfg);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json aug_to_json(const AugChoice& c) { return {{"op", to_string(c.op)}, {"param", c.param}}; }

AugChoice aug_from_json(const nlohmann::json& j) {
    return AugChoice{parse_aug_op(j.at("op").get<std::string>()), j.at("param").get<double>()};
}

}  // namespace

std::string trace_to_json(const MixTrace& trace) {
    nlohmann::json j;
    j["base"] = trace.base_aug ? aug_to_json(*trace.base_aug) : nlohmann::json(nullptr);
    j["rounds"] = trace.rounds;
    j["texture_key"] = trace.texture_key;
    j["records"] = nlohmann::json::array();
    for (const RoundRecord& r : trace.records) {
        nlohmann::json rec;
        rec["source"] = to_string(r.source);
        rec["aug"] = r.aug ? aug_to_json(*r.aug) : nlohmann::json(nullptr);
        rec["op"] = to_string(r.op);
        rec["a"] = r.coeffs.a;
        rec["b"] = r.coeffs.b;
        j["records"].push_back(std::move(rec));
    }
    return j.dump(2);
}

MixTrace trace_from_json(const std::string& text) {
    MixTrace t;
    try {
        const auto j = nlohmann::json::parse(text);
        if (!j.at("base").is_null()) t.base_aug = aug_from_json(j.at("base"));
        t.rounds = j.at("rounds").get<int>();
        t.texture_key = j.at("texture_key").get<std::uint64_t>();
        for (const auto& rec : j.at("records")) {
            RoundRecord r;
            const auto src = rec.at("source").get<std::string>();
            if (src == "augmented_input")
                r.source = MixSource::augmented_input;
            else if (src == "procedural")
                r.source = MixSource::procedural;
            else
                throw ConfigError("unknown trace source '" + src + "'");
            if (!rec.at("aug").is_null()) r.aug = aug_from_json(rec.at("aug"));
            const auto op = rec.at("op").get<std::string>();
            if (op == "add")
                r.op = MixOpKind::add;
            else if (op == "multiply")
                r.op = MixOpKind::multiply;
            else
                throw ConfigError("unknown trace op '" + op + "'");
            r.coeffs = {rec.at("a").get<double>(), rec.at("b").get<double>()};
            t.records.push_back(r);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed trace JSON: ") + e.what());
    }
    return t;
}

}  // namespace moiremix::mix
