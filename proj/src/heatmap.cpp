#include "moiremix/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <semaphore>

#include "moiremix/csv.hpp"
#include "moiremix/image_io.hpp"
#include "moiremix/parallel.hpp"

namespace moiremix::spectra {

namespace fs = std::filesystem;

namespace {

constexpr int kMaxOracleConcurrency = 1024;

bool canonical(int i, int j) noexcept { return i > 0 || (i == 0 && j > 0); }

struct CellJob {
    int i;
    int j;
};

HeatmapCell evaluate_cell(const std::vector<LabeledImage>& dataset, ClassifierOracle& oracle,
                          const HeatmapConfig& cfg, int i, int j,
                          std::counting_semaphore<kMaxOracleConcurrency>& gate) {
    HeatmapCell cell;
    try {
        std::vector<ImageBuffer> batch;
        batch.reserve(dataset.size());
        if (i == 0 && j == 0) {
            for (const auto& item : dataset) batch.push_back(item.image);
        } else {
            FourierBasisSpec spec = cfg.spec_template;
            spec.i = i;
            spec.j = j;
            const std::uint64_t tag = cell_tag(i, j);
            ImageBuffer basis;
            for (std::size_t k = 0; k < dataset.size(); ++k) {
                const ImageBuffer& x = dataset[k].image;
                if (basis.width() != x.width() || basis.height() != x.height())
                    basis = fourier_basis_image(i, j, x.width(), x.height());
                SeedStream stream = SeedStream::derive(cfg.root_seed, k).fork(stream_tag::kPerturb).fork(tag);
                batch.push_back(perturb_with_basis(x, basis, spec, stream));
            }
        }
        std::vector<std::string> predicted;
        gate.acquire();
        try {
            predicted = oracle.classify(batch);
        } catch (...) {
            gate.release();
            throw;
        }
        gate.release();
        if (predicted.size() != dataset.size())
            throw OracleError("oracle returned " + std::to_string(predicted.size()) + " labels for " +
                              std::to_string(dataset.size()) + " images");
        std::size_t wrong = 0;
        for (std::size_t k = 0; k < dataset.size(); ++k)
            if (predicted[k] != dataset[k].label) ++wrong;
        cell.n = dataset.size();
        cell.error_rate = static_cast<double>(wrong) / static_cast<double>(cell.n);
    } catch (const std::exception& e) {
        cell.error_rate = std::numeric_limits<double>::quiet_NaN();
        cell.n = 0;
        cell.failure = e.what();
        if (cell.failure.empty()) cell.failure = "unknown failure";
    }
    return cell;
}

}  // namespace

std::size_t HeatmapGrid::index(int i, int j) const {
    if (std::abs(i) > half_extent || std::abs(j) > half_extent)
        throw ConfigError("heatmap index (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
    return static_cast<std::size_t>(i + half_extent) * side() + static_cast<std::size_t>(j + half_extent);
}

void HeatmapConfig::validate() const {
    if (half_extent < 0) throw ConfigError("half_extent must be >= 0");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (oracle_concurrency < 1 || oracle_concurrency > kMaxOracleConcurrency)
        throw ConfigError("oracle_concurrency must be in [1, 1024]");
    if (!(spec_template.epsilon >= 0.0) || !std::isfinite(spec_template.epsilon))
        throw ConfigError("perturbation epsilon must be a finite value >= 0");
}

std::uint64_t cell_tag(int i, int j) noexcept {
    if (!canonical(i, j)) {
        i = -i;
        j = -j;
    }
    const std::uint64_t packed = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                                 static_cast<std::uint32_t>(j);
    return mix64(packed ^ 0x63656c6c00000000ULL);
}

std::vector<LabeledImage> load_labeled_dataset(const fs::path& dataset_dir, const fs::path& labels_csv) {
    const csv::Table table = csv::read(labels_csv);
    const std::size_t pc = table.column("image_path");
    const std::size_t lc = table.column("label");
    std::vector<LabeledImage> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.size() <= std::max(pc, lc)) throw IoError(labels_csv.string() + ": short row");
        fs::path p = row[pc];
        if (p.is_relative()) p = dataset_dir / p;
        ImageBuffer img = load_image(p);
        if (img.channels() != 3) img = replicate_channels(channel_mean(img));
        out.push_back({row[pc], std::move(img), row[lc]});
    }
    if (out.empty()) throw ConfigError(labels_csv.string() + ": no labeled images");
    return out;
}

HeatmapGrid sensitivity_heatmap(const std::vector<LabeledImage>& dataset, ClassifierOracle& oracle,
                                const HeatmapConfig& cfg) {
    cfg.validate();
    if (dataset.empty()) throw ConfigError("sensitivity_heatmap needs at least one image");
    HeatmapGrid grid;
    grid.half_extent = cfg.half_extent;
    const int h = cfg.half_extent;
    grid.cells.resize(static_cast<std::size_t>(grid.side()) * grid.side());

    std::vector<CellJob> jobs;
    for (int i = -h; i <= h; ++i)
        for (int j = -h; j <= h; ++j)
            if (!cfg.mirror || canonical(i, j) || (i == 0 && j == 0)) jobs.push_back({i, j});

    std::counting_semaphore<kMaxOracleConcurrency> gate(cfg.oracle_concurrency);
    parallel_for(jobs.size(), cfg.workers, [&](std::size_t n) {
        const CellJob& job = jobs[n];
        grid.at(job.i, job.j) = evaluate_cell(dataset, oracle, cfg, job.i, job.j, gate);
    });

    if (cfg.mirror)
        for (int i = -h; i <= h; ++i)
            for (int j = -h; j <= h; ++j)
                if (!canonical(i, j) && !(i == 0 && j == 0)) grid.at(i, j) = grid.at(-i, -j);
    return grid;
}

HeatmapGrid sensitivity_heatmap(const fs::path& dataset_dir, const fs::path& labels_csv, ClassifierOracle& oracle,
                                const HeatmapConfig& cfg) {
    return sensitivity_heatmap(load_labeled_dataset(dataset_dir, labels_csv), oracle, cfg);
}

void write_heatmap_csv(const HeatmapGrid& grid, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out.precision(17);
    out << "i,j,error_rate,n\n";
    const int h = grid.half_extent;
    for (int i = -h; i <= h; ++i) {
        for (int j = -h; j <= h; ++j) {
            const HeatmapCell& c = grid.at(i, j);
            out << i << ',' << j << ',';
            if (c.ok())
                out << c.error_rate;
            else
                out << "nan";
            out << ',' << c.n << '\n';
        }
    }
    if (!out) throw IoError(path.string() + ": write failed");
}

ImageBuffer render_heatmap(const HeatmapGrid& grid, int cell_px) {
    if (cell_px < 1) throw ConfigError("cell_px must be >= 1");
    const int side = grid.side();
    ImageBuffer img(side * cell_px, side * cell_px, 3, 0.5);
    const int h = grid.half_extent;
    for (int i = -h; i <= h; ++i) {
        for (int j = -h; j <= h; ++j) {
            const HeatmapCell& c = grid.at(i, j);
            double rgb[3] = {0.5, 0.5, 0.5};
            if (c.ok()) {
                const double e = c.error_rate;
                rgb[0] = std::clamp(3.0 * e, 0.0, 1.0);
                rgb[1] = std::clamp(3.0 * e - 1.0, 0.0, 1.0);
                rgb[2] = std::clamp(3.0 * e - 2.0, 0.0, 1.0);
            }
            const int row0 = (i + h) * cell_px;
            const int col0 = (j + h) * cell_px;
            for (int dv = 0; dv < cell_px; ++dv)
                for (int du = 0; du < cell_px; ++du)
                    for (int ch = 0; ch < 3; ++ch) img.at(col0 + du, row0 + dv, ch) = rgb[ch];
        }
    }
    return img;
}

}  // namespace moiremix::spectra
