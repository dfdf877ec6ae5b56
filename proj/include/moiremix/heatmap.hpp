#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "moiremix/image.hpp"
#include "moiremix/oracle.hpp"
#include "moiremix/spectra.hpp"

namespace moiremix::spectra {

struct HeatmapCell {
    double error_rate = 0.0;  // NaN when the cell failed
    std::size_t n = 0;        // images evaluated; 0 when the cell failed
    std::string failure;

    bool ok() const noexcept { return failure.empty(); }
};

/// Error rates indexed by (i, j) in [-half_extent, half_extent]^2. Cell (0, 0)
/// holds the unperturbed error rate.
struct HeatmapGrid {
    int half_extent = 0;
    std::vector<HeatmapCell> cells;

    int side() const noexcept { return 2 * half_extent + 1; }
    HeatmapCell& at(int i, int j) { return cells[index(i, j)]; }
    const HeatmapCell& at(int i, int j) const { return cells[index(i, j)]; }
    std::size_t index(int i, int j) const;
};

struct HeatmapConfig {
    int half_extent = 31;
    /// epsilon and sign policy are taken from here; i and j are ignored.
    FourierBasisSpec spec_template;
    std::uint64_t root_seed = 0;
    /// Evaluate one half-plane and copy rates to (-i, -j).
    bool mirror = true;
    int workers = 1;
    /// Maximum concurrent oracle calls.
    int oracle_concurrency = 1;

    void validate() const;
};

struct LabeledImage {
    std::string path;
    ImageBuffer image;  // always 3 channels
    std::string label;
};

/// Reads an `image_path,label` CSV; relative paths resolve against dataset_dir.
std::vector<LabeledImage> load_labeled_dataset(const std::filesystem::path& dataset_dir,
                                               const std::filesystem::path& labels_csv);

/**
 * For each (i, j), perturbs every image with the (i, j) basis and records the
 * oracle's error rate. Image k's sign draws come from
 * derive(root_seed, k).fork(kPerturb).fork(cell_tag(i, j)), where the tag is
 * shared by (i, j) and (-i, -j); since the two basis images are identical, a
 * full evaluation is symmetric and mirroring is exact. A cell whose oracle
 * call fails keeps a NaN rate with n = 0 and the failure message.
 */
HeatmapGrid sensitivity_heatmap(const std::vector<LabeledImage>& dataset, ClassifierOracle& oracle,
                                const HeatmapConfig& cfg);

HeatmapGrid sensitivity_heatmap(const std::filesystem::path& dataset_dir, const std::filesystem::path& labels_csv,
                                ClassifierOracle& oracle, const HeatmapConfig& cfg);

/// Stream tag for the cell; identical for (i, j) and (-i, -j).
std::uint64_t cell_tag(int i, int j) noexcept;

/// `i,j,error_rate,n`, rows by i then j; failed cells print `nan`.
void write_heatmap_csv(const HeatmapGrid& grid, const std::filesystem::path& path);

/**
 * Heatmap image with `cell_px` square pixels per cell, row i (top = -half_extent),
 * column j. Error rate e maps to the "hot" ramp: r = clamp(3e), g = clamp(3e - 1),
 * b = clamp(3e - 2). Failed cells are mid-gray.
 */
ImageBuffer render_heatmap(const HeatmapGrid& grid, int cell_px = 4);

}  // namespace moiremix::spectra
