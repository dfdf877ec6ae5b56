#pragma once

#include <cstddef>
#include <vector>

#include "moiremix/image.hpp"
#include "moiremix/random.hpp"

namespace moiremix::spectra {

/// |DFT|^2 / N for a field, row-major over (ky, kx) in FFT order (DC at index 0).
std::vector<double> power_spectrum_2d(const GrayField& field);

struct SpectrumBin {
    double frequency = 0.0;  // cycles per image width (bin centre)
    double mean_power = 0.0;
    double total_power = 0.0;
    std::size_t count = 0;
};

/**
 * Radially averaged power. Bin b collects every non-DC coefficient whose
 * radius r (cycles per width, vertical frequencies rescaled by W/H) rounds to
 * b * bin_width, where bin_width = (W/2) / bin_count. Radii past the last bin
 * count towards nondc_power only.
 */
struct SpectrumReport {
    double bin_width = 1.0;
    std::vector<SpectrumBin> bins;
    double dc_power = 0.0;
    double nondc_power = 0.0;  // every non-DC coefficient, binned or not

    std::size_t bin_count() const noexcept { return bins.size(); }
    /// Bin index holding `frequency`.
    std::ptrdiff_t bin_of(double frequency) const noexcept;
    /// Index of the bin with the largest mean power.
    std::size_t argmax() const noexcept;
    double median_mean_power() const;
    /// Indices of bins that are strict local maxima of mean power above `floor`.
    std::vector<std::size_t> local_maxima(double floor) const;
};

/// Channels are averaged before the transform. Throws ConfigError below 2x2.
SpectrumReport radial_power_spectrum(const ImageBuffer& x, int bin_count);
SpectrumReport radial_power_spectrum(const GrayField& field, int bin_count);

// ---------------------------------------------------------------------------
// Fourier basis perturbations

enum class SignPolicy { per_channel, global };

struct FourierBasisSpec {
    int i = 1;  // vertical frequency index (cycles per height)
    int j = 0;  // horizontal frequency index (cycles per width)
    double epsilon = 1.0;  // l2 norm of the perturbation, per channel
    SignPolicy signs = SignPolicy::per_channel;

    void validate() const;
};

/**
 * cos(2*pi*(i*v/H + j*u/W)) scaled to unit l2 norm. Its DFT is supported on
 * exactly {(i, j), (-i, -j)}. Single-channel, signed values.
 * Throws ConfigError for (0, 0) or indices beyond Nyquist.
 */
ImageBuffer fourier_basis_image(int i, int j, int width, int height);

/// x + r_c * epsilon * U_ij per channel with r_c in {-1, +1}, then clip to [0, 1].
ImageBuffer perturb(const ImageBuffer& x, const FourierBasisSpec& spec, SeedStream& stream);

/// Same as perturb but with a precomputed basis image (hot loop of the heatmap).
ImageBuffer perturb_with_basis(const ImageBuffer& x, const ImageBuffer& basis, const FourierBasisSpec& spec,
                               SeedStream& stream);

}  // namespace moiremix::spectra
