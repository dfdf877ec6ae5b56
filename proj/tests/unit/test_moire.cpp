#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "moiremix/moire.hpp"
#include "moiremix/spectra.hpp"

using namespace moiremix;
using namespace moiremix::moire;

namespace {

// Straight transcription of the formula, no shared code with render_moire.
double oracle_pixel(const MoireParams& p, int u, int v, int width) {
    const double pi = 3.14159265358979323846;
    double m = 0.0;
    for (const Component& c : p.components) {
        const double d = std::sqrt((u - c.cx) * (u - c.cx) + (v - c.cy) * (v - c.cy)) / width;
        m += std::sin(2.0 * pi * c.f * d);
    }
    return m;
}

}  // namespace

TEST_CASE("sample_moire_params honours the configured ranges") {
    MoireConfig cfg;
    cfg.n_max = 1;
    SeedStream s = SeedStream::derive(1, 1);
    for (int k = 0; k < 200; ++k) CHECK(sample_moire_params(s, cfg).components.size() == 1);

    cfg.n_max = 5;
    cfg.width = 40;
    cfg.height = 30;
    for (int k = 0; k < 2000; ++k) {
        const MoireParams p = sample_moire_params(s, cfg);
        REQUIRE(p.components.size() >= 1);
        REQUIRE(p.components.size() <= 5);
        for (const auto& c : p.components) {
            CHECK_UNARY(c.cx >= 0.0);
            CHECK_UNARY(c.cx < 40.0);
            CHECK_UNARY(c.cy >= 0.0);
            CHECK_UNARY(c.cy < 30.0);
            CHECK_UNARY(c.f >= 1.0);
            CHECK_UNARY(c.f <= 100.0);
        }
    }
}

TEST_CASE("component count is uniform over 1..n_max") {
    MoireConfig cfg;
    cfg.n_max = 5;
    const int trials = 100000;
    std::array<int, 6> hist{};
    double fsum = 0.0;
    std::size_t fcount = 0;
    for (int t = 0; t < trials; ++t) {
        SeedStream s = SeedStream::derive(2024, static_cast<std::uint64_t>(t));
        const MoireParams p = sample_moire_params(s, cfg);
        ++hist[p.components.size()];
        for (const auto& c : p.components) {
            fsum += c.f;
            ++fcount;
        }
    }
    const double sigma = std::sqrt(trials * 0.2 * 0.8);
    for (int n = 1; n <= 5; ++n) CHECK(std::abs(hist[n] - trials * 0.2) < 3.0 * sigma);

    // Uniform on [1, 100]: mean 50.5, sd 99 / sqrt(12).
    const double fsigma = 99.0 / std::sqrt(12.0) / std::sqrt(static_cast<double>(fcount));
    CHECK(std::abs(fsum / fcount - 50.5) < 3.0 * fsigma);
}

TEST_CASE("render_moire hand-computed values") {
    MoireParams at_pixel{{{3.0, 2.0, 17.3}}};
    CHECK(render_moire(at_pixel, 8, 8).at(3, 2) == 0.0);

    MoireParams origin{{{0.0, 0.0, 1.0}}};
    CHECK(std::abs(render_moire(origin, 4, 4).at(3, 0) - (-1.0)) < 1e-12);
}

TEST_CASE("render_moire matches the scalar oracle") {
    SeedStream s = SeedStream::derive(77, 0);
    for (int t = 0; t < 100; ++t) {
        const int w = static_cast<int>(s.uniform_int(1, 16));
        const int h = static_cast<int>(s.uniform_int(1, 16));
        MoireConfig cfg;
        cfg.width = w;
        cfg.height = h;
        cfg.n_max = 5;
        const MoireParams p = sample_moire_params(s, cfg);
        const GrayField f = render_moire(p, w, h);
        for (int v = 0; v < h; ++v)
            for (int u = 0; u < w; ++u) REQUIRE(std::abs(f.at(u, v) - oracle_pixel(p, u, v, w)) <= 1e-9);
    }
}

TEST_CASE("raw field is bounded by the component count") {
    MoireConfig cfg;
    cfg.width = 32;
    cfg.height = 32;
    cfg.n_max = 5;
    SeedStream s = SeedStream::derive(5, 5);
    for (int t = 0; t < 50; ++t) {
        const MoireParams p = sample_moire_params(s, cfg);
        const double n = static_cast<double>(p.components.size());
        const GrayField f = render_moire(p, 32, 32);
        for (double v : f.data()) {
            CHECK_UNARY(v >= -n);
            CHECK_UNARY(v <= n);
        }
    }
}

TEST_CASE("normalize_minmax") {
    GrayField f(3, 1);
    f.data()[0] = -1.0;
    f.data()[1] = 0.0;
    f.data()[2] = 1.0;
    const GrayField g = normalize_minmax(f);
    CHECK(g.data()[0] == 0.0);
    CHECK(g.data()[1] == 0.5);
    CHECK(g.data()[2] == 1.0);

    const GrayField flat = normalize_minmax(GrayField(2, 2, 0.7));
    for (double v : flat.data()) CHECK(v == 0.0);
}

TEST_CASE("generated images are gray, deterministic and span [0, 1]") {
    MoireConfig cfg;
    cfg.width = 48;
    cfg.height = 40;
    for (std::uint64_t i = 0; i < 20; ++i) {
        SeedStream a = SeedStream::derive(9, i);
        SeedStream b = SeedStream::derive(9, i);
        const ImageBuffer x = generate_moire_image(a, cfg);
        CHECK(x == generate_moire_image(b, cfg));
        CHECK(x.channels() == 3);
        double lo = 1.0, hi = 0.0;
        for (int v = 0; v < x.height(); ++v)
            for (int u = 0; u < x.width(); ++u) {
                CHECK(x.at(u, v, 0) == x.at(u, v, 1));
                CHECK(x.at(u, v, 1) == x.at(u, v, 2));
                lo = std::min(lo, x.at(u, v, 0));
                hi = std::max(hi, x.at(u, v, 0));
            }
        CHECK(lo == 0.0);
        CHECK(hi == 1.0);
    }
}

TEST_CASE("centred single component peaks at its frequency") {
    for (double f : {5.0, 10.0, 20.0}) {
        MoireParams p{{{128.0, 128.0, f}}};
        const ImageBuffer img = moire_image_from_params(p, 256, 256);
        const auto rep = spectra::radial_power_spectrum(img, 128);
        CHECK(std::abs(static_cast<double>(rep.argmax()) - static_cast<double>(rep.bin_of(f))) <= 1.0);
    }
}

TEST_CASE("MoireConfig validation") {
    MoireConfig cfg;
    cfg.n_max = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = MoireConfig{};
    cfg.f_min = 50;
    cfg.f_max = 10;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = MoireConfig{};
    cfg.f_min = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
