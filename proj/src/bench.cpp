#include "moiremix/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <thread>

#include "moiremix/image_io.hpp"
#include "moiremix/parallel.hpp"
#include "moiremix/version.hpp"

#ifndef MOIREMIX_BUILD_TYPE
#define MOIREMIX_BUILD_TYPE "unknown"
#endif

namespace moiremix::bench {

namespace {

using Clock = std::chrono::steady_clock;

template <class Fn>
double time_once(Fn&& fn) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

// Keeps results observable so the optimizer cannot drop the work.
volatile double g_sink = 0.0;

void consume(const ImageBuffer& img) {
    if (!img.empty()) g_sink = g_sink + img.data()[0];
}

std::vector<std::pair<std::string, std::string>> environment(int width, int height, int samples, int threads) {
    return {
        {"moiremix", kVersion},
        {"resolution", std::to_string(width) + "x" + std::to_string(height)},
        {"threads", std::to_string(threads)},
        {"build", MOIREMIX_BUILD_TYPE},
        {"compiler", __VERSION__},
        {"hardware_concurrency", std::to_string(std::thread::hardware_concurrency())},
        {"clock", "steady_clock, per-sample"},
        {"warmup", std::to_string(kWarmup) + " discarded per row"},
        {"samples", std::to_string(samples) + " retained per row"},
    };
}

void check_samples(int samples) {
    if (samples < kMinSamples)
        throw ConfigError("benchmarks need at least " + std::to_string(kMinSamples) + " samples");
}

}  // namespace

Stats summarize(std::span<const double> seconds) {
    Stats s;
    const std::size_t n = seconds.size();
    if (n == 0) return s;
    std::vector<double> v(seconds.begin(), seconds.end());
    std::sort(v.begin(), v.end());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    const std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * n));
    s.p95 = v[std::max<std::size_t>(rank, 1) - 1];
    if (n > 1) {
        double ss = 0.0;
        for (double t : v) ss += (t - s.mean) * (t - s.mean);
        s.stddev = std::sqrt(ss / (n - 1));
    }
    return s;
}

std::optional<double> BenchRow::generation_fraction() const {
    if (!gen_mean || stats.mean <= 0.0) return std::nullopt;
    return *gen_mean / stats.mean;
}

const BenchRow* BenchReport::find(std::string_view name) const {
    for (const auto& r : rows)
        if (r.name == name) return &r;
    return nullptr;
}

std::optional<double> reference_seconds(texgen::GeneratorKind kind) noexcept {
    using texgen::GeneratorKind;
    switch (kind) {
        case GeneratorKind::stripe: return 0.0009;
        case GeneratorKind::moire: return 0.0026;
        case GeneratorKind::dead_leaves: return 0.0050;
        case GeneratorKind::fourier_basis: return 0.0172;
        case GeneratorKind::perlin: return 0.0592;
    }
    return std::nullopt;
}

BenchReport bench_generators(std::span<const texgen::GeneratorKind> kinds, int width, int height, int samples,
                             std::uint64_t root_seed) {
    check_samples(samples);
    std::vector<texgen::GeneratorConfig> cfgs;
    for (auto kind : kinds) {
        texgen::GeneratorConfig cfg;
        cfg.kind = kind;
        cfg.width = width;
        cfg.height = height;
        cfg.validate();
        cfgs.push_back(cfg);
    }
    BenchReport report;
    report.environment = environment(width, height, samples, 1);
    report.rows.resize(cfgs.size());
    for (std::size_t g = 0; g < cfgs.size(); ++g) {
        report.rows[g].name = std::string(texgen::to_string(cfgs[g].kind));
        report.rows[g].resolution = width;
        report.rows[g].seconds.reserve(static_cast<std::size_t>(samples));
    }
    for (int s = -kWarmup; s < samples; ++s) {
        // Warm-up samples use indices past the measured range.
        const std::uint64_t index = s < 0 ? static_cast<std::uint64_t>(samples - s) : static_cast<std::uint64_t>(s);
        for (std::size_t g = 0; g < cfgs.size(); ++g) {
            SeedStream stream = SeedStream::derive(root_seed, index);
            ImageBuffer img;
            const double t = time_once([&] { img = texgen::generate(stream, cfgs[g]); });
            consume(img);
            if (s >= 0) report.rows[g].seconds.push_back(t);
        }
    }
    for (auto& row : report.rows) row.stats = summarize(row.seconds);
    return report;
}

BenchReport bench_pipeline(const mix::MixConfig& cfg, const std::vector<ImageBuffer>& images, int samples,
                           std::uint64_t root_seed) {
    check_samples(samples);
    cfg.validate();
    if (images.empty()) throw ConfigError("bench_pipeline needs at least one image");
    BenchRow row;
    row.name = "augment:" + std::string(texgen::to_string(cfg.generator.kind));
    row.resolution = images.front().width();
    std::vector<double> gen;
    for (int s = -kWarmup; s < samples; ++s) {
        const std::uint64_t index = s < 0 ? static_cast<std::uint64_t>(samples - s) : static_cast<std::uint64_t>(s);
        const ImageBuffer& x = images[index % images.size()];
        const SeedStream base = SeedStream::derive(root_seed, index);
        ImageBuffer tex;
        const double tg = time_once([&] { tex = mix::procedural_texture(x, base, cfg); });
        consume(tex);
        SeedStream stream = base;
        mix::MixResult res;
        const double tp = time_once([&] { res = mix::augment(x, stream, cfg); });
        consume(res.image);
        if (s >= 0) {
            gen.push_back(tg);
            row.seconds.push_back(tp);
        }
    }
    row.stats = summarize(row.seconds);
    row.gen_mean = summarize(gen).mean;
    BenchReport report;
    report.environment = environment(images.front().width(), images.front().height(), samples, 1);
    report.environment.emplace_back("k", std::to_string(cfg.k));
    report.environment.emplace_back("beta", std::to_string(cfg.beta));
    report.rows.push_back(std::move(row));
    return report;
}

BenchReport bench_pipeline(const mix::MixConfig& cfg, const std::filesystem::path& image_dir, int samples,
                           std::uint64_t root_seed) {
    std::vector<ImageBuffer> images;
    for (const auto& rel : list_image_files(image_dir)) {
        ImageBuffer img = load_image(image_dir / rel);
        if (img.channels() != 3) img = replicate_channels(channel_mean(img));
        images.push_back(std::move(img));
    }
    if (images.empty()) throw ConfigError(image_dir.string() + ": no images to benchmark");
    return bench_pipeline(cfg, images, samples, root_seed);
}

std::vector<ThroughputRow> bench_throughput(const mix::MixConfig& cfg, const std::vector<ImageBuffer>& images,
                                            std::size_t count, std::span<const int> worker_counts,
                                            std::uint64_t root_seed) {
    cfg.validate();
    if (images.empty()) throw ConfigError("bench_throughput needs at least one image");
    std::vector<ThroughputRow> rows;
    for (int w : worker_counts) {
        ThroughputRow r;
        r.workers = w;
        r.images = count;
        r.seconds = time_once([&] {
            parallel_for(count, w, [&](std::size_t i) {
                SeedStream stream = SeedStream::derive(root_seed, i);
                consume(mix::augment(images[i % images.size()], stream, cfg).image);
            });
        });
        rows.push_back(r);
    }
    return rows;
}

std::vector<int> default_worker_sweep() {
    std::vector<int> w = {1, 2, 4, default_workers()};
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    return w;
}

void write_csv(const BenchReport& report, std::ostream& out) {
    for (const auto& [k, v] : report.environment) out << "# " << k << ": " << v << '\n';
    const bool pipeline = std::any_of(report.rows.begin(), report.rows.end(), [](const BenchRow& r) {
        return r.gen_mean.has_value();
    });
    out << "generator,resolution,samples,mean_s,median_s,p95_s,std_s";
    if (pipeline) out << ",gen_mean_s,generation_fraction";
    out << '\n';
    out << std::setprecision(9);
    for (const auto& r : report.rows) {
        out << r.name << ',' << r.resolution << ',' << r.seconds.size() << ',' << r.stats.mean << ','
            << r.stats.median << ',' << r.stats.p95 << ',' << r.stats.stddev;
        if (pipeline) {
            out << ',';
            if (r.gen_mean) out << *r.gen_mean;
            out << ',';
            if (auto f = r.generation_fraction()) out << *f;
        }
        out << '\n';
    }
}

void write_table(const BenchReport& report, std::ostream& out) {
    out << std::left << std::setw(20) << "generator" << std::right << std::setw(12) << "mean [s]" << std::setw(12)
        << "median [s]" << std::setw(12) << "p95 [s]" << std::setw(12) << "std [s]" << std::setw(12)
        << "reference [s]" << '\n';
    out << std::fixed << std::setprecision(6);
    for (const auto& r : report.rows) {
        out << std::left << std::setw(20) << r.name << std::right << std::setw(12) << r.stats.mean << std::setw(12)
            << r.stats.median << std::setw(12) << r.stats.p95 << std::setw(12) << r.stats.stddev;
        std::optional<double> ref;
        try {
            ref = reference_seconds(texgen::parse_kind(r.name));
        } catch (const Error&) {
        }
        if (ref && r.resolution == 224)
            out << std::setw(12) << std::setprecision(4) << *ref << std::setprecision(6);
        else
            out << std::setw(12) << "-";
        out << '\n';
    }
    out << std::defaultfloat;
}

void write_throughput_csv(std::span<const ThroughputRow> rows, std::ostream& out) {
    out << "workers,images,seconds,images_per_s\n" << std::setprecision(9);
    for (const auto& r : rows)
        out << r.workers << ',' << r.images << ',' << r.seconds << ',' << r.images_per_second() << '\n';
}

}  // namespace moiremix::bench
