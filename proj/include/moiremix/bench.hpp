#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "moiremix/mixer.hpp"
#include "moiremix/texgen.hpp"

namespace moiremix::bench {

inline constexpr int kMinSamples = 30;
inline constexpr int kWarmup = 5;

struct Stats {
    double mean = 0.0;
    double median = 0.0;
    double p95 = 0.0;  // nearest rank
    double stddev = 0.0;  // sample standard deviation
};

Stats summarize(std::span<const double> seconds);

struct BenchRow {
    std::string name;
    int resolution = 0;  // width
    std::vector<double> seconds;  // retained samples, warm-up excluded
    Stats stats;
    std::optional<double> gen_mean;  // pipeline rows: pure generation mean
    std::optional<double> generation_fraction() const;
};

struct BenchReport {
    std::vector<std::pair<std::string, std::string>> environment;
    std::vector<BenchRow> rows;

    const BenchRow* find(std::string_view name) const;
};

/// Published per-image generation times at 224x224, in seconds.
std::optional<double> reference_seconds(texgen::GeneratorKind kind) noexcept;

/**
 * Single-threaded timing of each generator, one fresh stream
 * derive(root_seed, s) per sample. kWarmup samples per generator run first
 * and are discarded. Generators are interleaved round-robin so slow drift in
 * machine load spreads evenly across kinds.
 */
BenchReport bench_generators(std::span<const texgen::GeneratorKind> kinds, int width, int height, int samples,
                             std::uint64_t root_seed);

/**
 * End-to-end augment() timing over the images in image_dir (cycled), next to
 * the time spent generating the texture alone for the same streams.
 */
BenchReport bench_pipeline(const mix::MixConfig& cfg, const std::filesystem::path& image_dir, int samples,
                           std::uint64_t root_seed);
BenchReport bench_pipeline(const mix::MixConfig& cfg, const std::vector<ImageBuffer>& images, int samples,
                           std::uint64_t root_seed);

struct ThroughputRow {
    int workers = 1;
    std::size_t images = 0;
    double seconds = 0.0;
    double images_per_second() const noexcept { return seconds > 0.0 ? images / seconds : 0.0; }
};

/// Augments `count` images with each worker count and reports wall time.
std::vector<ThroughputRow> bench_throughput(const mix::MixConfig& cfg, const std::vector<ImageBuffer>& images,
                                            std::size_t count, std::span<const int> worker_counts,
                                            std::uint64_t root_seed);

/// The default sweep: 1, 2, 4 and the logical core count, deduplicated.
std::vector<int> default_worker_sweep();

/// `generator,resolution,samples,mean_s,median_s,p95_s,std_s` with `#` environment lines;
/// pipeline reports add `gen_mean_s,generation_fraction`.
void write_csv(const BenchReport& report, std::ostream& out);
void write_table(const BenchReport& report, std::ostream& out);
void write_throughput_csv(std::span<const ThroughputRow> rows, std::ostream& out);

}  // namespace moiremix::bench
