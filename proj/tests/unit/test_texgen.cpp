#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "moiremix/moire.hpp"
#include "moiremix/spectra.hpp"
#include "moiremix/texgen.hpp"

using namespace moiremix;
using namespace moiremix::texgen;

namespace {

GeneratorConfig config(GeneratorKind kind, int w, int h) {
    GeneratorConfig cfg;
    cfg.kind = kind;
    cfg.width = w;
    cfg.height = h;
    return cfg;
}

int signed_index(int k, int n) { return k <= n / 2 ? k : k - n; }

// Share of non-DC power held by the coefficient pair +-(kx, ky).
double pair_fraction(const GrayField& f, int kx, int ky) {
    const int w = f.width(), h = f.height();
    const auto p = spectra::power_spectrum_2d(f);
    double total = 0.0, pair = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (x == 0 && y == 0) continue;
            const double v = p[static_cast<std::size_t>(y) * w + x];
            total += v;
            const int sx = signed_index(x, w), sy = signed_index(y, h);
            if ((sx == kx && sy == ky) || (sx == -kx && sy == -ky)) pair += v;
        }
    return pair / total;
}

double spectral_centroid(const GrayField& f) {
    const int w = f.width(), h = f.height();
    const auto p = spectra::power_spectrum_2d(f);
    double num = 0.0, den = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (x == 0 && y == 0) continue;
            const double r = std::hypot(signed_index(x, w), signed_index(y, h) * double(w) / h);
            num += r * p[static_cast<std::size_t>(y) * w + x];
            den += p[static_cast<std::size_t>(y) * w + x];
        }
    return num / den;
}

double max_abs_laplacian(const GrayField& f) {
    double m = 0.0;
    for (int v = 1; v + 1 < f.height(); ++v)
        for (int u = 1; u + 1 < f.width(); ++u)
            m = std::max(m, std::abs(f.at(u - 1, v) + f.at(u + 1, v) + f.at(u, v - 1) + f.at(u, v + 1) -
                                     4.0 * f.at(u, v)));
    return m;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_CASE("kind names round-trip") {
    for (auto k : kAllKinds) CHECK(parse_kind(to_string(k)) == k);
    CHECK(parse_kind("dead-leaves") == GeneratorKind::dead_leaves);
    CHECK_THROWS_AS(parse_kind("voronoi"), ConfigError);
}

TEST_CASE("every generator is bounded, sized and deterministic") {
    for (auto kind : kAllKinds) {
        CAPTURE(to_string(kind));
        const GeneratorConfig cfg = config(kind, 37, 29);
        for (std::uint64_t i = 0; i < 8; ++i) {
            SeedStream a = SeedStream::derive(31, i);
            SeedStream b = SeedStream::derive(31, i);
            const ImageBuffer x = generate(kind, a, cfg);
            CHECK(x == generate(kind, b, cfg));
            CHECK(x.width() == 37);
            CHECK(x.height() == 29);
            CHECK(x.channels() == 3);
            CHECK(x.in_unit_range());
        }
    }
}

TEST_CASE("dispatch matches the direct generators") {
    SeedStream a = SeedStream::derive(4, 4);
    SeedStream b = SeedStream::derive(4, 4);
    const GeneratorConfig cfg = config(GeneratorKind::moire, 32, 32);
    CHECK(generate(GeneratorKind::moire, a, cfg) == moire::generate_moire_image(b, cfg.moire_config()));

    SeedStream c = SeedStream::derive(4, 5);
    SeedStream d = SeedStream::derive(4, 5);
    const GeneratorConfig scfg = config(GeneratorKind::stripe, 32, 32);
    CHECK(generate(GeneratorKind::stripe, c, scfg) == generate_stripe(d, scfg));

    SeedStream e = SeedStream::derive(4, 6);
    CHECK_THROWS_AS(generate(GeneratorKind::perlin, e, scfg), ConfigError);
}

TEST_CASE("stripe hand-computed columns") {
    const GrayField f = render_stripe_field({1.0, 0.0}, 4, 3);
    for (int v = 0; v < 3; ++v)
        for (int u = 0; u < 4; ++u) CHECK(std::abs(f.at(u, v) - std::sin(2.0 * std::numbers::pi * u / 4.0)) < 1e-12);

    const GrayField vert = render_stripe_field({7.0, std::numbers::pi / 2.0}, 16, 16);
    for (int v = 0; v < 16; ++v)
        for (int u = 1; u < 16; ++u) CHECK(std::abs(vert.at(u, v) - vert.at(0, v)) < 1e-9);
}

TEST_CASE("stripe spectrum is a single conjugate pair") {
    CHECK(pair_fraction(render_stripe_field({12.0, 0.0}, 256, 256), 12, 0) >= 0.9);
    CHECK(pair_fraction(render_stripe_field({9.0, std::numbers::pi / 2.0}, 256, 256), 0, 9) >= 0.9);
    CHECK(pair_fraction(render_stripe_field({5.0, std::atan2(4.0, 3.0)}, 256, 256), 3, 4) >= 0.9);
}

TEST_CASE("perlin vanishes on lattice corners") {
    GeneratorConfig cfg = config(GeneratorKind::perlin, 130, 97);
    for (std::uint64_t i = 0; i < 10; ++i) {
        SeedStream s = SeedStream::derive(8, i);
        const PerlinParams p = sample_perlin_params(s, cfg);
        const int cell = p.octaves.at(0).cell;
        const GrayField f = render_perlin_field(p, 130, 97);
        for (int v = 0; v < 97; v += cell)
            for (int u = 0; u < 130; u += cell) CHECK(std::abs(f.at(u, v)) < 1e-12);
    }
}

TEST_CASE("perlin is smoother than moire and mostly low frequency") {
    for (std::uint64_t i = 0; i < 5; ++i) {
        SeedStream s = SeedStream::derive(12, i);
        const GeneratorConfig cfg = config(GeneratorKind::perlin, 256, 256);
        const PerlinParams p = sample_perlin_params(s, cfg);
        const ImageBuffer perlin = render_perlin(p, 256, 256);
        SeedStream m = SeedStream::derive(12, i);
        const ImageBuffer moire = generate(m, config(GeneratorKind::moire, 256, 256));
        CHECK(max_abs_laplacian(channel_mean(perlin)) < max_abs_laplacian(channel_mean(moire)));

        const int cell = p.octaves.at(0).cell;
        const double cutoff = 256.0 / cell * 2.0;
        const auto pw = spectra::power_spectrum_2d(channel_mean(perlin));
        double low = 0.0, total = 0.0;
        for (int y = 0; y < 256; ++y)
            for (int x = 0; x < 256; ++x) {
                if (x == 0 && y == 0) continue;
                const double v = pw[static_cast<std::size_t>(y) * 256 + x];
                total += v;
                if (std::hypot(signed_index(x, 256), signed_index(y, 256)) < cutoff) low += v;
            }
        CHECK(low / total > 0.7);
    }
}

TEST_CASE("dead leaves occlusion") {
    DeadLeavesParams one;
    one.disks.push_back({10.0, 10.0, 1000.0, 0.3});
    const DeadLeavesRender r = render_dead_leaves_field(one, 20, 20);
    CHECK(r.fully_covered);
    for (double v : r.field.data()) CHECK(v == 0.3);
    const ImageBuffer flat = render_dead_leaves(one, 20, 20);
    for (double v : flat.data()) CHECK(v == 0.0);

    // The front disk hides the one behind it.
    DeadLeavesParams two;
    two.disks.push_back({5.0, 5.0, 2.0, 0.9});
    two.disks.push_back({5.0, 5.0, 4.0, 0.1});
    const GrayField f = render_dead_leaves_field(two, 12, 12).field;
    CHECK(f.at(5, 5) == 0.9);
    CHECK(f.at(8, 5) == 0.1);
    CHECK(f.at(11, 11) == two.background);
}

TEST_CASE("dead leaves output is piecewise constant") {
    const GeneratorConfig cfg = config(GeneratorKind::dead_leaves, 256, 256);
    for (std::uint64_t i = 0; i < 5; ++i) {
        SeedStream s = SeedStream::derive(13, i);
        const ImageBuffer x = generate(s, cfg);
        std::size_t flat = 0;
        for (int v = 0; v < 256; ++v)
            for (int u = 0; u < 256; ++u) {
                const double c = x.at(u, v, 0);
                const bool same = (u > 0 && x.at(u - 1, v, 0) == c) || (u < 255 && x.at(u + 1, v, 0) == c) ||
                                  (v > 0 && x.at(u, v - 1, 0) == c) || (v < 255 && x.at(u, v + 1, 0) == c);
                if (same) ++flat;
            }
        CHECK(flat >= 256u * 256u / 2u);
    }
}

TEST_CASE("fourier basis generator") {
    FourierBasisParams same;
    same.channels.fill({3, -5, 1.1});
    const ImageBuffer g = render_fourier_basis(same, 32, 32);
    for (int v = 0; v < 32; ++v)
        for (int u = 0; u < 32; ++u) {
            CHECK(g.at(u, v, 0) == g.at(u, v, 1));
            CHECK(g.at(u, v, 1) == g.at(u, v, 2));
        }

    const GeneratorConfig cfg = config(GeneratorKind::fourier_basis, 256, 256);
    for (std::uint64_t i = 0; i < 5; ++i) {
        SeedStream s = SeedStream::derive(14, i);
        const FourierBasisParams p = sample_fourier_basis_params(s, cfg);
        const ImageBuffer x = render_fourier_basis(p, 256, 256);
        for (int c = 0; c < 3; ++c) {
            const PlanarWave& w = p.channels[c];
            CHECK_FALSE((w.i == 0 && w.j == 0));
            GrayField ch(256, 256);
            for (int v = 0; v < 256; ++v)
                for (int u = 0; u < 256; ++u) ch.at(u, v) = x.at(u, v, c);
            CHECK(pair_fraction(ch, w.i, w.j) >= 0.9);
        }
    }
}

TEST_CASE("median spectral centroid orders perlin < dead leaves < moire") {
    std::vector<double> perlin, leaves, moire;
    for (std::uint64_t i = 0; i < 50; ++i) {
        SeedStream a = SeedStream::derive(15, i), b = SeedStream::derive(15, i), c = SeedStream::derive(15, i);
        perlin.push_back(spectral_centroid(channel_mean(generate(a, config(GeneratorKind::perlin, 256, 256)))));
        leaves.push_back(spectral_centroid(channel_mean(generate(b, config(GeneratorKind::dead_leaves, 256, 256)))));
        moire.push_back(spectral_centroid(channel_mean(generate(c, config(GeneratorKind::moire, 256, 256)))));
    }
    CHECK(median(perlin) < median(leaves));
    CHECK(median(leaves) < median(moire));
}

TEST_CASE("generator config validation") {
    GeneratorConfig cfg;
    cfg.width = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = config(GeneratorKind::perlin, 64, 64);
    cfg.perlin.cell_min = 70;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = config(GeneratorKind::stripe, 64, 64);
    cfg.stripe.f_min = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = config(GeneratorKind::fourier_basis, 64, 64);
    cfg.fourier_basis.max_index = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    // Ranges of other kinds are not checked.
    cfg.kind = GeneratorKind::moire;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("params_json records the draw") {
    SeedStream s = SeedStream::derive(3, 0);
    const GeneratorConfig cfg = config(GeneratorKind::stripe, 16, 16);
    const std::string js = params_json(sample_params(s, cfg), cfg);
    CHECK(js.find("\"theta\"") != std::string::npos);
    CHECK(js.find("\"f\"") != std::string::npos);
}
