#include "moiremix/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace moiremix::spectra {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int signed_index(int k, int n) noexcept { return k <= n / 2 ? k : k - n; }

}  // namespace

std::vector<double> power_spectrum_2d(const GrayField& field) {
    const int w = field.width();
    const int h = field.height();
    const std::size_t n = static_cast<std::size_t>(w) * h;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf) throw Error("fftw_malloc failed");
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(h, w, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    const auto src = field.data();
    for (std::size_t i = 0; i < n; ++i) {
        buf[i][0] = src[i];
        buf[i][1] = 0.0;
    }
    fftw_execute(plan);
    std::vector<double> power(n);
    for (std::size_t i = 0; i < n; ++i) power[i] = (buf[i][0] * buf[i][0] + buf[i][1] * buf[i][1]) / n;
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return power;
}

std::ptrdiff_t SpectrumReport::bin_of(double frequency) const noexcept {
    return static_cast<std::ptrdiff_t>(std::lround(frequency / bin_width));
}

std::size_t SpectrumReport::argmax() const noexcept {
    std::size_t best = 0;
    for (std::size_t b = 1; b < bins.size(); ++b)
        if (bins[b].mean_power > bins[best].mean_power) best = b;
    return best;
}

double SpectrumReport::median_mean_power() const {
    std::vector<double> p;
    for (const auto& b : bins)
        if (b.count) p.push_back(b.mean_power);
    if (p.empty()) return 0.0;
    const std::size_t mid = p.size() / 2;
    std::nth_element(p.begin(), p.begin() + mid, p.end());
    return p[mid];
}

std::vector<std::size_t> SpectrumReport::local_maxima(double floor) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < bins.size(); ++b) {
        if (!bins[b].count || !(bins[b].mean_power > floor)) continue;
        const double left = b > 0 ? bins[b - 1].mean_power : -1.0;
        const double right = b + 1 < bins.size() ? bins[b + 1].mean_power : -1.0;
        if (bins[b].mean_power > left && bins[b].mean_power > right) out.push_back(b);
    }
    return out;
}

SpectrumReport radial_power_spectrum(const GrayField& field, int bin_count) {
    const int w = field.width();
    const int h = field.height();
    if (w < 2 || h < 2) throw ConfigError("radial_power_spectrum needs an image of at least 2x2");
    if (bin_count < 1) throw ConfigError("bin_count must be >= 1");

    const std::vector<double> power = power_spectrum_2d(field);
    SpectrumReport rep;
    rep.bin_width = (w / 2.0) / bin_count;
    rep.bins.resize(static_cast<std::size_t>(bin_count));
    for (int b = 0; b < bin_count; ++b) rep.bins[b].frequency = b * rep.bin_width;
    const double aspect = static_cast<double>(w) / h;
    for (int ky = 0; ky < h; ++ky) {
        const double fy = signed_index(ky, h) * aspect;
        for (int kx = 0; kx < w; ++kx) {
            const double p = power[static_cast<std::size_t>(ky) * w + kx];
            if (kx == 0 && ky == 0) {
                rep.dc_power = p;
                continue;
            }
            rep.nondc_power += p;
            const double r = std::hypot(static_cast<double>(signed_index(kx, w)), fy);
            const long b = std::lround(r / rep.bin_width);
            if (b < bin_count) {
                rep.bins[b].total_power += p;
                ++rep.bins[b].count;
            }
        }
    }
    for (auto& b : rep.bins)
        if (b.count) b.mean_power = b.total_power / b.count;
    return rep;
}

SpectrumReport radial_power_spectrum(const ImageBuffer& x, int bin_count) {
    return radial_power_spectrum(channel_mean(x), bin_count);
}

// ---------------------------------------------------------------------------

void FourierBasisSpec::validate() const {
    if (i == 0 && j == 0) throw ConfigError("Fourier basis index (0, 0) is the DC term");
    if (!(epsilon >= 0.0)) throw ConfigError("perturbation epsilon must be >= 0");
}

ImageBuffer fourier_basis_image(int i, int j, int width, int height) {
    if (i == 0 && j == 0) throw ConfigError("Fourier basis index (0, 0) is the DC term");
    if (std::abs(i) > height / 2 || std::abs(j) > width / 2)
        throw ConfigError("Fourier basis index (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") exceeds Nyquist for " + std::to_string(width) + "x" + std::to_string(height));
    ImageBuffer out(width, height, 1);
    // Phase reduced modulo the period in integers keeps the argument small and exact.
    double sum_sq = 0.0;
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            const long long num_v = (static_cast<long long>(i) * v) % height;
            const long long num_u = (static_cast<long long>(j) * u) % width;
            const double phase = 2.0 * std::numbers::pi *
                                 (static_cast<double>(num_v) / height + static_cast<double>(num_u) / width);
            const double val = std::cos(phase);
            out.at(u, v, 0) = val;
            sum_sq += val * val;
        }
    }
    const double inv = 1.0 / std::sqrt(sum_sq);
    for (double& val : out.data()) val *= inv;
    return out;
}

ImageBuffer perturb_with_basis(const ImageBuffer& x, const ImageBuffer& basis, const FourierBasisSpec& spec,
                               SeedStream& stream) {
    spec.validate();
    if (basis.width() != x.width() || basis.height() != x.height() || basis.channels() != 1)
        throw ConfigError("basis image does not match the input dimensions");
    const int nc = x.channels();
    std::vector<double> sign(static_cast<std::size_t>(nc));
    if (spec.signs == SignPolicy::global) {
        const double s = stream.coin() ? 1.0 : -1.0;
        std::fill(sign.begin(), sign.end(), s);
    } else {
        for (double& s : sign) s = stream.coin() ? 1.0 : -1.0;
    }
    ImageBuffer out = x;
    auto d = out.data();
    const auto b = basis.data();
    for (std::size_t p = 0; p < b.size(); ++p)
        for (int c = 0; c < nc; ++c) d[p * nc + c] += sign[c] * spec.epsilon * b[p];
    clip_unit(out);
    return out;
}

ImageBuffer perturb(const ImageBuffer& x, const FourierBasisSpec& spec, SeedStream& stream) {
    spec.validate();
    return perturb_with_basis(x, fourier_basis_image(spec.i, spec.j, x.width(), x.height()), spec, stream);
}

}  // namespace moiremix::spectra
