// moiremix command-line front end.

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>


#include "moiremix/bench.hpp"
#include "moiremix/degrade.hpp"
#include "moiremix/heatmap.hpp"
#include "moiremix/image_io.hpp"
#include "moiremix/mixer.hpp"
#include "moiremix/oracle.hpp"
#include "moiremix/parallel.hpp"
#include "moiremix/spectra.hpp"
#include "moiremix/texgen.hpp"
#include "moiremix/version.hpp"

namespace fs = std::filesystem;
using namespace moiremix;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr const char* kSidecarName = "moiremix_config.ini";
constexpr const char* kStubOracleName = "moiremix-stub-oracle";

// Channel statistics of natural-image training sets, as commonly used.
const mix::Standardize kImagenetProfile{{0.485, 0.456, 0.406}, {0.229, 0.224, 0.225}};

struct GenOptions {
    std::string kind = "moire";
    int width = 224;
    int height = 224;
    std::uint64_t count = 1;
    std::uint64_t seed = 0;
    std::string out;
    int workers = default_workers();
    texgen::GeneratorConfig gen;
};

struct AugmentOptions {
    std::string in_dir;
    std::string out_dir;
    int k = 4;
    double beta = 4.0;
    std::string generator = "moire";
    std::string ops;
    std::uint64_t seed = 0;
    bool trace = false;
    std::string standardize;
    int jpeg_quality = 95;
    int workers = default_workers();
    texgen::GeneratorConfig gen;
};

struct DegradeOptions {
    std::string in;
    std::string out;
    std::uint64_t seed = 0;
    std::string cfa = "RGGB";
    int workers = default_workers();
    degrade::DegradeConfig cfg;
};

struct SpectrumOptions {
    std::string in;
    std::string out;
    int bins = 128;
    std::uint64_t seed = 0;
};

struct HeatmapOptions {
    std::string dataset;
    std::string labels;
    std::string oracle = "stub";
    std::string out_dir;
    int half_extent = 31;
    double epsilon = 0.0;  // 0: per-pixel RMS of 4/255
    std::string signs = "per-channel";
    bool no_mirror = false;
    int workers = default_workers();
    int oracle_concurrency = 1;
    double timeout_s = 60.0;
    int cell_px = 4;
    std::uint64_t seed = 0;
};

struct BenchOptions {
    int resolution = 224;
    int samples = 100;
    std::vector<std::string> kinds;
    std::uint64_t seed = 0;
    std::string out;
    std::string pipeline_dir;
    int k = 4;
    double beta = 4.0;
    std::string generator = "moire";
    bool throughput = false;
    std::size_t throughput_images = 200;
};

std::vector<std::string> kind_names() {
    std::vector<std::string> names;
    for (auto k : texgen::kAllKinds) {
        names.emplace_back(texgen::to_string(k));
        std::string hyphen(texgen::to_string(k));
        std::replace(hyphen.begin(), hyphen.end(), '_', '-');
        if (hyphen != names.back()) names.push_back(hyphen);
    }
    return names;
}

void add_seed(CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "Root seed (environment: MOIREMIX_SEED)")
        ->envname("MOIREMIX_SEED")
        ->capture_default_str();
}

void add_workers(CLI::App* sub, int& workers) {
    sub->add_option("--workers", workers, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_generator_flags(CLI::App* sub, texgen::GeneratorConfig& g) {
    sub->add_option("--n-max", g.moire.n_max, "Moire: maximum number of radial waves")->capture_default_str();
    sub->add_option("--f-min", g.moire.f_min, "Moire: minimum wave frequency")->capture_default_str();
    sub->add_option("--f-max", g.moire.f_max, "Moire: maximum wave frequency")->capture_default_str();
    sub->add_option("--perlin-cell-min", g.perlin.cell_min, "Perlin: smallest lattice cell in pixels")
        ->capture_default_str();
    sub->add_option("--perlin-cell-max", g.perlin.cell_max, "Perlin: largest lattice cell in pixels")
        ->capture_default_str();
    sub->add_option("--perlin-octaves", g.perlin.octaves, "Perlin: octave count")->capture_default_str();
    sub->add_option("--perlin-persistence", g.perlin.persistence, "Perlin: amplitude ratio between octaves")
        ->capture_default_str();
    sub->add_option("--dl-exponent", g.dead_leaves.exponent, "Dead leaves: radius power-law exponent")
        ->capture_default_str();
    sub->add_option("--dl-r-min", g.dead_leaves.r_min, "Dead leaves: smallest radius")->capture_default_str();
    sub->add_option("--dl-r-max", g.dead_leaves.r_max, "Dead leaves: largest radius (<= 0: width / 2)")
        ->capture_default_str();
    sub->add_option("--dl-cap", g.dead_leaves.shape_cap, "Dead leaves: maximum disks")->capture_default_str();
    sub->add_option("--stripe-f-min", g.stripe.f_min, "Stripe: minimum frequency")->capture_default_str();
    sub->add_option("--stripe-f-max", g.stripe.f_max, "Stripe: maximum frequency")->capture_default_str();
    sub->add_option("--fourier-max-index", g.fourier_basis.max_index, "Fourier basis: largest |i|, |j|")
        ->capture_default_str();
}

fs::path executable_dir() {
    std::error_code ec;
    const fs::path self = fs::read_symlink("/proc/self/exe", ec);
    return ec ? fs::current_path() : self.parent_path();
}

void write_sidecar(const CLI::App& app, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot write effective config");
    out << "# moiremix " << kVersion << " effective configuration\n[" << app.get_name() << "]\n"
        << app.config_to_str(true, false);
}

// Little-endian float64 .npy, shape (H, W, C).
void write_npy(const ImageBuffer& img, const fs::path& path) {
    std::ostringstream header;
    header << "{'descr': '<f8', 'fortran_order': False, 'shape': (" << img.height() << ", " << img.width() << ", "
           << img.channels() << "), }";
    std::string h = header.str();
    const std::size_t preamble = 10;
    const std::size_t pad = 64 - (preamble + h.size() + 1) % 64;
    h.append(pad % 64, ' ');
    h.push_back('\n');
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    const unsigned char magic[8] = {0x93, 'N', 'U', 'M', 'P', 'Y', 1, 0};
    out.write(reinterpret_cast<const char*>(magic), 8);
    const auto len = static_cast<std::uint16_t>(h.size());
    const unsigned char lenb[2] = {static_cast<unsigned char>(len & 0xff), static_cast<unsigned char>(len >> 8)};
    out.write(reinterpret_cast<const char*>(lenb), 2);
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    const auto d = img.data();
    out.write(reinterpret_cast<const char*>(d.data()), static_cast<std::streamsize>(d.size() * sizeof(double)));
    if (!out) throw IoError(path.string() + ": write failed");
}

texgen::GeneratorConfig finish_generator(texgen::GeneratorConfig g, const std::string& kind, int w, int h) {
    g.kind = texgen::parse_kind(kind);
    g.width = w;
    g.height = h;
    g.validate();
    return g;
}

int run_gen(const CLI::App& app, const GenOptions& o) {
    const texgen::GeneratorConfig g = finish_generator(o.gen, o.kind, o.width, o.height);
    const fs::path out(o.out);
    mix::export_dataset(o.count, g, out, o.seed, o.workers);
    write_sidecar(app, out / kSidecarName);
    std::cerr << "wrote " << o.count << " " << texgen::to_string(g.kind) << " textures to " << out.string() << '\n';
    return 0;
}

int run_augment(const CLI::App& app, const AugmentOptions& o) {
    mix::MixConfig cfg;
    cfg.k = o.k;
    cfg.beta = o.beta;
    cfg.generator = finish_generator(o.gen, o.generator, o.gen.width, o.gen.height);
    if (!o.ops.empty()) cfg.aug_ops = mix::parse_aug_ops(o.ops);
    if (o.standardize == "imagenet") {
        cfg.standardize = kImagenetProfile;
    } else if (!o.standardize.empty()) {
        throw ConfigError("unknown standardization profile '" + o.standardize + "' (expected imagenet)");
    }
    cfg.validate();
    if (o.jpeg_quality < 1 || o.jpeg_quality > 100) throw ConfigError("--jpeg-quality must be in 1..100");

    const fs::path in_dir(o.in_dir);
    const fs::path out_dir(o.out_dir);
    const std::vector<fs::path> files = list_image_files(in_dir);
    if (files.empty()) throw IoError(in_dir.string() + ": no PNG or JPEG images found");
    fs::create_directories(out_dir);

    std::atomic<std::size_t> failed{0};
    std::mutex log_mutex;
    parallel_for(files.size(), o.workers, [&](std::size_t i) {
        const fs::path& rel = files[i];
        try {
            const ImageBuffer x = load_image(in_dir / rel);
            SeedStream stream = SeedStream::derive(o.seed, i);
            const mix::MixResult res = mix::augment(x, stream, cfg);
            fs::path dst = out_dir / rel;
            fs::create_directories(dst.parent_path());
            if (cfg.standardize) {
                dst.replace_extension(".npy");
                write_npy(res.image, dst);
            } else {
                save_image(res.image, dst, format_from_extension(rel).value_or(ImageFormat::png), o.jpeg_quality);
            }
            if (o.trace) {
                fs::path tpath = dst;
                tpath.replace_extension(dst.extension().string() + ".trace.json");
                std::ofstream t(tpath, std::ios::trunc);
                t << mix::trace_to_json(res.trace) << '\n';
                if (!t) throw IoError(tpath.string() + ": cannot write trace");
            }
        } catch (const std::exception& e) {
            ++failed;
            std::lock_guard lock(log_mutex);
            std::cerr << "skipped " << rel.generic_string() << ": " << e.what() << '\n';
        }
    });
    write_sidecar(app, out_dir / kSidecarName);
    const std::size_t ok = files.size() - failed.load();
    std::cerr << "augmented " << ok << " of " << files.size() << " images\n";
    return ok == 0 ? kExitRuntime : 0;
}

int run_degrade(const CLI::App& app, DegradeOptions o) {
    o.cfg.cfa = degrade::parse_cfa(o.cfa);
    o.cfg.validate();
    const fs::path in(o.in);
    const fs::path out(o.out);
    if (fs::is_directory(in)) {
        const auto summary = degrade::degrade_directory(in, out, o.cfg, o.seed, o.workers);
        for (const auto& f : summary.failures) std::cerr << "skipped " << f << '\n';
        write_sidecar(app, out / kSidecarName);
        std::cerr << "degraded " << summary.processed << " images\n";
        return summary.processed == 0 ? kExitRuntime : 0;
    }
    ImageBuffer x = load_image(in);
    if (x.channels() != 3) x = replicate_channels(channel_mean(x));
    SeedStream stream = SeedStream::derive(o.seed, 0).fork(stream_tag::kDegrade);
    const ImageBuffer y = degrade::degrade(x, stream, o.cfg);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_image(y, out, format_from_extension(out).value_or(ImageFormat::png), 95);
    write_sidecar(app, fs::path(out.string() + ".config.ini"));
    return 0;
}

int run_spectrum(const CLI::App& app, const SpectrumOptions& o) {
    const ImageBuffer x = load_image(o.in);
    const spectra::SpectrumReport rep = spectra::radial_power_spectrum(x, o.bins);
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out, std::ios::trunc);
        if (!file) throw IoError(o.out + ": cannot open for writing");
    }
    std::ostream& out = o.out.empty() ? std::cout : file;
    out.precision(17);
    out << "frequency,mean_power,count\n";
    for (const auto& b : rep.bins) out << b.frequency << ',' << b.mean_power << ',' << b.count << '\n';
    if (!o.out.empty()) write_sidecar(app, fs::path(o.out + ".config.ini"));
    return 0;
}

int run_heatmap(const CLI::App& app, const HeatmapOptions& o) {
    const auto dataset = spectra::load_labeled_dataset(o.dataset, o.labels);
    spectra::HeatmapConfig cfg;
    cfg.half_extent = o.half_extent;
    cfg.root_seed = o.seed;
    cfg.mirror = !o.no_mirror;
    cfg.workers = o.workers;
    cfg.oracle_concurrency = o.oracle_concurrency;
    cfg.spec_template.signs = o.signs == "global" ? spectra::SignPolicy::global : spectra::SignPolicy::per_channel;
    const ImageBuffer& first = dataset.front().image;
    cfg.spec_template.epsilon =
        o.epsilon > 0.0 ? o.epsilon : 4.0 / 255.0 * std::sqrt(static_cast<double>(first.pixel_count()));

    std::string command = o.oracle;
    if (command == "stub") command = spectra::shell_quote((executable_dir() / kStubOracleName).string());
    const fs::path out_dir(o.out_dir);
    fs::create_directories(out_dir);
    spectra::SubprocessOracle oracle(command, out_dir / "oracle_batches",
                                     std::chrono::milliseconds(static_cast<long long>(o.timeout_s * 1000.0)));
    const spectra::HeatmapGrid grid = spectra::sensitivity_heatmap(dataset, oracle, cfg);
    std::error_code ec;
    fs::remove(out_dir / "oracle_batches", ec);

    spectra::write_heatmap_csv(grid, out_dir / "heatmap.csv");
    save_image(spectra::render_heatmap(grid, o.cell_px), out_dir / "heatmap.png", ImageFormat::png);
    write_sidecar(app, out_dir / kSidecarName);
    std::size_t failed = 0;
    for (const auto& c : grid.cells)
        if (!c.ok()) ++failed;
    if (failed) std::cerr << failed << " heatmap cells failed; see heatmap.csv (nan rows)\n";
    std::cerr << "epsilon " << cfg.spec_template.epsilon << ", grid " << grid.side() << "x" << grid.side() << '\n';
    return failed == grid.cells.size() ? kExitRuntime : 0;
}

int run_bench(const CLI::App& app, const BenchOptions& o) {
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out, std::ios::trunc);
        if (!file) throw IoError(o.out + ": cannot open for writing");
    }
    std::ostream& csv_out = o.out.empty() ? std::cout : file;

    if (!o.pipeline_dir.empty()) {
        mix::MixConfig cfg;
        cfg.k = o.k;
        cfg.beta = o.beta;
        cfg.generator.kind = texgen::parse_kind(o.generator);
        const bench::BenchReport rep = bench::bench_pipeline(cfg, o.pipeline_dir, o.samples, o.seed);
        bench::write_csv(rep, csv_out);
        if (!o.out.empty()) bench::write_table(rep, std::cout);
        if (o.throughput) {
            std::vector<ImageBuffer> images;
            for (const auto& rel : list_image_files(o.pipeline_dir)) {
                ImageBuffer img = load_image(fs::path(o.pipeline_dir) / rel);
                if (img.channels() != 3) img = replicate_channels(channel_mean(img));
                images.push_back(std::move(img));
            }
            const auto sweep = bench::default_worker_sweep();
            const auto rows = bench::bench_throughput(cfg, images, o.throughput_images, sweep, o.seed);
            bench::write_throughput_csv(rows, o.out.empty() ? std::cerr : std::cout);
        }
    } else {
        std::vector<texgen::GeneratorKind> kinds;
        for (const auto& k : o.kinds) kinds.push_back(texgen::parse_kind(k));
        if (kinds.empty()) kinds.assign(texgen::kAllKinds.begin(), texgen::kAllKinds.end());
        const bench::BenchReport rep = bench::bench_generators(kinds, o.resolution, o.resolution, o.samples, o.seed);
        bench::write_csv(rep, csv_out);
        if (!o.out.empty()) bench::write_table(rep, std::cout);
    }
    if (!o.out.empty()) write_sidecar(app, fs::path(o.out + ".config.ini"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moiremix: procedural Moire textures, mixing augmentation and analysis tools"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "INI config file ([section] per subcommand); flags override it");
    app.require_subcommand(1);

    const auto kinds = kind_names();

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate procedural textures plus a manifest");
    gen_cmd->add_option("--kind", gen.kind, "Generator")->check(CLI::IsMember(kinds))->capture_default_str();
    gen_cmd->add_option("--width", gen.width, "Texture width")->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--height", gen.height, "Texture height")->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--count", gen.count, "Number of textures")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output directory")->required();
    add_seed(gen_cmd, gen.seed);
    add_workers(gen_cmd, gen.workers);
    add_generator_flags(gen_cmd, gen.gen);

    GenOptions db = gen;
    db.count = 1000;
    auto* db_cmd = app.add_subcommand("export-db", "Export a static texture database (files plus manifest.csv)");
    db_cmd->add_option("--kind", db.kind, "Generator")->check(CLI::IsMember(kinds))->capture_default_str();
    db_cmd->add_option("--width", db.width, "Texture width")->check(CLI::PositiveNumber)->capture_default_str();
    db_cmd->add_option("--height", db.height, "Texture height")->check(CLI::PositiveNumber)->capture_default_str();
    db_cmd->add_option("--count", db.count, "Number of textures")->capture_default_str();
    db_cmd->add_option("--out", db.out, "Output directory")->required();
    add_seed(db_cmd, db.seed);
    add_workers(db_cmd, db.workers);
    add_generator_flags(db_cmd, db.gen);

    AugmentOptions aug;
    auto* aug_cmd = app.add_subcommand("augment", "Augment every image in a directory tree");
    aug_cmd->add_option("--in-dir", aug.in_dir, "Input directory")->required()->check(CLI::ExistingDirectory);
    aug_cmd->add_option("--out-dir", aug.out_dir, "Output directory (mirrors the input tree)")->required();
    aug_cmd->add_option("--k", aug.k, "Maximum mixing rounds")->check(CLI::NonNegativeNumber)->capture_default_str();
    aug_cmd->add_option("--beta", aug.beta, "Beta shape of the blend weights")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    aug_cmd->add_option("--generator", aug.generator, "Procedural texture generator")
        ->check(CLI::IsMember(kinds))
        ->capture_default_str();
    aug_cmd->add_option("--ops", aug.ops, "Comma-separated base augmentations (default: all)");
    aug_cmd->add_flag("--trace", aug.trace, "Write a replayable <output>.trace.json per image");
    aug_cmd->add_option("--standardize", aug.standardize,
                        "Standardize with a named profile (imagenet) and write float64 .npy files");
    aug_cmd->add_option("--jpeg-quality", aug.jpeg_quality, "Quality for JPEG outputs")->capture_default_str();
    add_seed(aug_cmd, aug.seed);
    add_workers(aug_cmd, aug.workers);
    add_generator_flags(aug_cmd, aug.gen);

    DegradeOptions deg;
    auto* deg_cmd = app.add_subcommand("degrade", "Simulate screen capture: LCD, warp, CFA, sharpen, JPEG");
    deg_cmd->add_option("--in", deg.in, "Input image or directory")->required()->check(CLI::ExistingPath);
    deg_cmd->add_option("--out", deg.out, "Output image or directory")->required();
    deg_cmd->add_option("--lcd-scale", deg.cfg.lcd_scale, "Subpixel upsampling factor (1 or >= 3)")
        ->capture_default_str();
    deg_cmd->add_option("--tilt", deg.cfg.tilt_deg, "Maximum tilt per axis in degrees")->capture_default_str();
    deg_cmd->add_option("--scale-jitter", deg.cfg.scale_jitter, "Maximum relative scale change")
        ->capture_default_str();
    deg_cmd->add_option("--cfa", deg.cfa, "Bayer pattern (RGGB, BGGR, GRBG, GBRG)")->capture_default_str();
    deg_cmd->add_option("--quality-min", deg.cfg.jpeg_quality_min, "Lowest JPEG quality")->capture_default_str();
    deg_cmd->add_option("--quality-max", deg.cfg.jpeg_quality_max, "Highest JPEG quality")->capture_default_str();
    deg_cmd->add_option("--sharpen", deg.cfg.sharpen_amount, "Unsharp mask amount")->capture_default_str();
    add_seed(deg_cmd, deg.seed);
    add_workers(deg_cmd, deg.workers);

    SpectrumOptions spec;
    auto* spec_cmd = app.add_subcommand("spectrum", "Radially averaged power spectrum of an image as CSV");
    spec_cmd->add_option("--in", spec.in, "Input image")->required()->check(CLI::ExistingFile);
    spec_cmd->add_option("--bins", spec.bins, "Number of radial bins")->check(CLI::PositiveNumber)->capture_default_str();
    spec_cmd->add_option("--out", spec.out, "Output CSV (default: stdout)");
    add_seed(spec_cmd, spec.seed);

    HeatmapOptions hm;
    auto* hm_cmd = app.add_subcommand("heatmap", "Fourier-basis sensitivity heatmap through a classifier oracle");
    hm_cmd->add_option("--dataset", hm.dataset, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    hm_cmd->add_option("--labels", hm.labels, "Labels CSV (image_path,label)")->required()->check(CLI::ExistingFile);
    hm_cmd->add_option("--oracle", hm.oracle,
                       "Oracle command, run as '<command> <request.csv> <response.csv>'; 'stub' uses the bundled "
                       "mean-intensity stub")
        ->capture_default_str();
    hm_cmd->add_option("--out-dir", hm.out_dir, "Output directory for heatmap.csv and heatmap.png")->required();
    hm_cmd->add_option("--half-extent", hm.half_extent, "Grid covers i, j in [-h, h]")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    hm_cmd->add_option("--epsilon", hm.epsilon, "Perturbation l2 norm per channel (default: RMS 4/255 per pixel)");
    hm_cmd->add_option("--signs", hm.signs, "Sign policy")
        ->check(CLI::IsMember({"per-channel", "global"}))
        ->capture_default_str();
    hm_cmd->add_flag("--no-mirror", hm.no_mirror, "Evaluate both half-planes instead of mirroring");
    hm_cmd->add_option("--oracle-concurrency", hm.oracle_concurrency, "Concurrent oracle invocations")
        ->check(CLI::Range(1, 1024))
        ->capture_default_str();
    hm_cmd->add_option("--timeout", hm.timeout_s, "Per-call oracle timeout in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    hm_cmd->add_option("--cell-px", hm.cell_px, "Pixels per heatmap cell in the PNG")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_seed(hm_cmd, hm.seed);
    add_workers(hm_cmd, hm.workers);

    BenchOptions bn;
    auto* bn_cmd = app.add_subcommand("bench", "Per-image generation timing (single thread)");
    bn_cmd->add_option("--resolution", bn.resolution, "Square resolution")->check(CLI::PositiveNumber)->capture_default_str();
    bn_cmd->add_option("--samples", bn.samples, "Retained samples per generator (>= 30)")
        ->check(CLI::Range(bench::kMinSamples, 1000000))
        ->capture_default_str();
    bn_cmd->add_option("--kinds", bn.kinds, "Generators to time (default: all five)")
        ->check(CLI::IsMember(kinds))
        ->delimiter(',');
    bn_cmd->add_option("--out", bn.out, "Output CSV (default: stdout)");
    bn_cmd->add_option("--pipeline", bn.pipeline_dir, "Time augment() over the images in this directory instead")
        ->check(CLI::ExistingDirectory);
    bn_cmd->add_option("--k", bn.k, "Pipeline: maximum mixing rounds")->capture_default_str();
    bn_cmd->add_option("--beta", bn.beta, "Pipeline: Beta shape")->capture_default_str();
    bn_cmd->add_option("--generator", bn.generator, "Pipeline: texture generator")
        ->check(CLI::IsMember(kinds))
        ->capture_default_str();
    bn_cmd->add_flag("--throughput", bn.throughput, "Pipeline: also sweep worker counts 1, 2, 4, all cores");
    bn_cmd->add_option("--throughput-images", bn.throughput_images, "Pipeline: images per sweep step")
        ->capture_default_str();
    add_seed(bn_cmd, bn.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen_cmd) return run_gen(*gen_cmd, gen);
        if (*db_cmd) return run_gen(*db_cmd, db);
        if (*aug_cmd) return run_augment(*aug_cmd, aug);
        if (*deg_cmd) return run_degrade(*deg_cmd, deg);
        if (*spec_cmd) return run_spectrum(*spec_cmd, spec);
        if (*hm_cmd) return run_heatmap(*hm_cmd, hm);
        if (*bn_cmd) return run_bench(*bn_cmd, bn);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
