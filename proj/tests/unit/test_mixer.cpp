#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "moiremix/augment_ops.hpp"
#include "moiremix/csv.hpp"
#include "moiremix/image_io.hpp"
#include "moiremix/mixer.hpp"
#include "support.hpp"

using namespace moiremix;
using namespace moiremix::mix;
using testsupport::TempDir;

namespace {

MixConfig small_config(int k = 4, double beta = 4.0) {
    MixConfig cfg;
    cfg.k = k;
    cfg.beta = beta;
    return cfg;
}

std::vector<std::uint8_t> file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("aug op names") {
    for (AugOp op : default_aug_ops()) CHECK(parse_aug_op(to_string(op)) == op);
    CHECK(parse_aug_op("shear-x") == AugOp::shear_x);
    CHECK(parse_aug_ops("rotate, solarize").size() == 2);
    CHECK_THROWS_AS(parse_aug_op("cutout"), ConfigError);
    CHECK(default_aug_ops().size() == 9);
}

TEST_CASE("identity severities") {
    const ImageBuffer x = testsupport::random_image(17, 11, 3, 1);
    CHECK(apply_aug(x, {AugOp::rotate, 0.0}) == x);
    CHECK(apply_aug(x, {AugOp::shear_x, 0.0}) == x);
    CHECK(apply_aug(x, {AugOp::translate_y, 0.0}) == x);
    CHECK(apply_aug(x, {AugOp::solarize, 1.0}) == x);
}

TEST_CASE("posterize to one bit leaves only 0 and 1") {
    const ImageBuffer x = testsupport::random_image(16, 16, 3, 2);
    const ImageBuffer q = quantize(apply_aug(x, {AugOp::posterize, 1.0}));
    std::set<double> levels(q.data().begin(), q.data().end());
    CHECK(levels == std::set<double>{0.0, 1.0});
}

TEST_CASE("geometric ops fill with gray and translate exactly") {
    const ImageBuffer x = testsupport::random_image(10, 6, 3, 3);
    const ImageBuffer t = apply_aug(x, {AugOp::translate_x, 3.0});
    for (int v = 0; v < 6; ++v)
        for (int c = 0; c < 3; ++c) {
            for (int u = 0; u < 3; ++u) CHECK(t.at(u, v, c) == kGeometryFill);
            for (int u = 3; u < 10; ++u) CHECK(t.at(u, v, c) == x.at(u - 3, v, c));
        }
}

TEST_CASE("every sampled augmentation stays in range") {
    const ImageBuffer x = testsupport::natural_image(24, 20, 4);
    SeedStream s = SeedStream::derive(5, 5);
    const auto ops = default_aug_ops();
    for (int t = 0; t < 500; ++t) {
        AugChoice choice;
        const ImageBuffer y = base_augment(x, s, ops, &choice);
        CHECK(y.same_shape(x));
        CHECK(y.in_unit_range());
    }
}

TEST_CASE("solarize, equalize and autocontrast") {
    ImageBuffer x(4, 1, 1, std::vector<double>{0.1, 0.4, 0.6, 0.9});
    const ImageBuffer s = apply_aug(x, {AugOp::solarize, 0.5});
    CHECK(s.data()[0] == 0.1);
    CHECK(s.data()[1] == 0.4);
    CHECK(std::abs(s.data()[2] - 0.4) < 1e-15);
    CHECK(std::abs(s.data()[3] - 0.1) < 1e-15);

    const ImageBuffer a = apply_aug(x, {AugOp::autocontrast, 0.0});
    CHECK(a.data()[0] == 0.0);
    CHECK(a.data()[3] == 1.0);

    const ImageBuffer e = apply_aug(x, {AugOp::equalize, 0.0});
    CHECK(e.in_unit_range());
    CHECK(e.data()[0] < e.data()[3]);
}

TEST_CASE("coefficients in the infinite-beta limit") {
    SeedStream s = SeedStream::derive(6, 6);
    for (int t = 0; t < 1000; ++t) {
        const Coefficients c = sample_coefficients(s, 1e12);
        CHECK(std::abs(c.a - 1.0) < 1e-9);
        CHECK(std::abs(c.b) < 1e-9);
    }
}

TEST_CASE("coefficient mean and support at beta 4") {
    SeedStream s = SeedStream::derive(7, 7);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < n; ++t) {
        const Coefficients c = sample_coefficients(s, 4.0);
        REQUIRE(c.a > 0.0);
        REQUIRE(c.a < 2.0);
        REQUIRE(c.b > -1.0);
        REQUIRE(c.b < 1.0);
        sum += c.a;
        sum2 += c.a * c.a;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 3.0 * sd);
}

TEST_CASE("mix_op identities and hand values") {
    const ImageBuffer x1 = testsupport::random_image(9, 7, 3, 8);
    const ImageBuffer x2 = testsupport::random_image(9, 7, 3, 9);
    CHECK(mix_op(x1, x2, MixOpKind::add, 1.0, 0.0) == x1);
    CHECK(mix_op(x1, x2, MixOpKind::multiply, 1.0, 0.0) == x1);

    const ImageBuffer c = ImageBuffer(3, 3, 3, 0.75);
    const ImageBuffer half = mix_op(c, c, MixOpKind::add, 0.5, 0.5);
    for (double v : half.data()) CHECK(v == doctest::Approx(0.75).epsilon(1e-15));

    // (2*0.5)^0.5 * (2*0.25)^2 / 2 = 0.125
    const ImageBuffer m = mix_op(ImageBuffer(1, 1, 1, 0.5), ImageBuffer(1, 1, 1, 0.25), MixOpKind::multiply, 0.5, 2.0);
    CHECK(m.data()[0] == doctest::Approx(0.125).epsilon(1e-15));

    // Zero second operand hits the floor instead of 0^-b.
    const ImageBuffer z = mix_op(ImageBuffer(1, 1, 1, 0.5), ImageBuffer(1, 1, 1, 0.0), MixOpKind::multiply, 1.0, -0.5);
    CHECK(std::isfinite(z.data()[0]));

    CHECK_THROWS_AS(mix_op(x1, ImageBuffer(8, 7, 3), MixOpKind::add, 0.5, 0.5), ConfigError);
}

TEST_CASE("grayscale partner broadcasts over channels") {
    const ImageBuffer x1 = testsupport::random_image(5, 4, 3, 10);
    const ImageBuffer g = testsupport::random_image(5, 4, 1, 11);
    const ImageBuffer y = mix_op(x1, g, MixOpKind::add, 0.6, 0.3);
    for (int v = 0; v < 4; ++v)
        for (int u = 0; u < 5; ++u)
            for (int c = 0; c < 3; ++c)
                CHECK(y.at(u, v, c) == doctest::Approx(0.6 * x1.at(u, v, c) + 0.3 * g.at(u, v, 0) + 0.05));
}

TEST_CASE("zero rounds keeps x or its base augmentation") {
    const MixConfig cfg = small_config(0);
    const ImageBuffer x = testsupport::natural_image(32, 24, 12);
    int kept = 0, augmented = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        SeedStream s = SeedStream::derive(13, i);
        const MixResult r = augment(x, s, cfg);
        SeedStream mirror = SeedStream::derive(13, i);
        if (mirror.coin()) {
            ImageBuffer expected = base_augment(x, mirror, cfg.aug_ops);
            clip_unit(expected);
            CHECK(r.image == expected);
            ++augmented;
        } else {
            CHECK(r.image == x);
            ++kept;
        }
        CHECK(r.trace.rounds == 0);
    }
    CHECK(kept > 50);
    CHECK(augmented > 50);
}

TEST_CASE("augment is deterministic, bounded and replayable") {
    const MixConfig cfg = small_config();
    for (std::uint64_t i = 0; i < 60; ++i) {
        const ImageBuffer x = testsupport::natural_image(40, 30, i);
        SeedStream a = SeedStream::derive(14, i);
        SeedStream b = SeedStream::derive(14, i);
        const MixResult r1 = augment(x, a, cfg);
        const MixResult r2 = augment(x, b, cfg);
        CHECK(r1.image == r2.image);
        CHECK(trace_to_json(r1.trace) == trace_to_json(r2.trace));
        CHECK(r1.image.same_shape(x));
        CHECK(r1.image.in_unit_range());
        CHECK(r1.trace.rounds <= cfg.k);
        CHECK(static_cast<int>(r1.trace.records.size()) == r1.trace.rounds);
        CHECK(replay(x, r1.trace, cfg) == r1.image);
        CHECK(replay(x, trace_from_json(trace_to_json(r1.trace)), cfg) == r1.image);
    }
}

TEST_CASE("augment works with every generator") {
    for (auto kind : texgen::kAllKinds) {
        MixConfig cfg = small_config();
        cfg.generator.kind = kind;
        const ImageBuffer x = testsupport::natural_image(33, 21, 15);
        SeedStream s = SeedStream::derive(15, static_cast<std::uint64_t>(kind));
        const MixResult r = augment(x, s, cfg);
        CHECK(r.image.in_unit_range());
        CHECK(replay(x, r.trace, cfg) == r.image);
    }
}

TEST_CASE("grayscale inputs are mixed with a gray texture") {
    const ImageBuffer x = testsupport::random_image(20, 20, 1, 16);
    SeedStream s = SeedStream::derive(16, 0);
    const MixResult r = augment(x, s, small_config());
    CHECK(r.image.channels() == 1);
    CHECK(r.image.in_unit_range());
}

TEST_CASE("standardization follows the clip") {
    MixConfig cfg = small_config();
    cfg.standardize = Standardize{{0.5, 0.5, 0.5}, {0.25, 0.5, 1.0}};
    MixConfig plain = small_config();
    const ImageBuffer x = testsupport::natural_image(16, 16, 17);
    SeedStream a = SeedStream::derive(17, 0);
    SeedStream b = SeedStream::derive(17, 0);
    const ImageBuffer s = augment(x, a, cfg).image;
    const ImageBuffer p = augment(x, b, plain).image;
    for (std::size_t i = 0; i < p.data().size(); ++i) {
        const double sd = cfg.standardize->stddev[i % 3];
        CHECK(s.data()[i] == doctest::Approx((p.data()[i] - 0.5) / sd));
    }
    cfg.standardize = Standardize{{0.5}, {0.25}};
    SeedStream c = SeedStream::derive(17, 0);
    CHECK_THROWS_AS(augment(x, c, cfg), ConfigError);
}

TEST_CASE("heavier mixing moves images further") {
    double dev4 = 0.0, dev1 = 0.0;
    const MixConfig c4 = small_config(4, 4.0);
    const MixConfig c1 = small_config(4, 1.0);
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const ImageBuffer x = testsupport::natural_image(16, 16, 1000 + i);
        SeedStream a = SeedStream::derive(18, i);
        SeedStream b = SeedStream::derive(18, i);
        const ImageBuffer y4 = augment(x, a, c4).image;
        const ImageBuffer y1 = augment(x, b, c1).image;
        for (std::size_t k = 0; k < x.data().size(); ++k) {
            dev4 += std::abs(y4.data()[k] - x.data()[k]);
            dev1 += std::abs(y1.data()[k] - x.data()[k]);
        }
    }
    CHECK(dev4 < dev1);
}

TEST_CASE("MixConfig validation") {
    MixConfig cfg;
    cfg.k = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = MixConfig{};
    cfg.beta = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = MixConfig{};
    cfg.aug_ops.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("export_dataset writes a reproducible database") {
    TempDir a("dbA"), b("dbB"), empty("db0");
    texgen::GeneratorConfig cfg;
    cfg.width = 24;
    cfg.height = 24;

    const Manifest none = export_dataset(0, cfg, empty.path(), 1, 1);
    CHECK(none.rows.empty());
    const csv::Table t0 = csv::read(empty / "manifest.csv");
    CHECK(t0.rows.empty());
    CHECK(list_image_files(empty.path()).empty());

    const Manifest m = export_dataset(10, cfg, a.path(), 99, 1);
    export_dataset(10, cfg, b.path(), 99, 4);
    REQUIRE(m.rows.size() == 10);
    const csv::Table table = csv::read(a / "manifest.csv");
    CHECK(table.header == csv::Row{"index", "seed", "generator", "params_json"});
    REQUIRE(table.rows.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        const std::string name = texture_file_name(i);
        CHECK(std::filesystem::exists(a / name));
        CHECK(file_bytes(a / name) == file_bytes(b / name));
        CHECK(table.rows[i][0] == std::to_string(i));
    }
    CHECK(file_bytes(a / "manifest.csv") == file_bytes(b / "manifest.csv"));
}
