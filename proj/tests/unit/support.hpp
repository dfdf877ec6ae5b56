#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "moiremix/image.hpp"
#include "moiremix/random.hpp"

namespace testsupport {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("moiremix_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// Direct O(N^2) DFT, |F|^2 / N in FFT order.
inline std::vector<double> naive_power(std::span<const double> f, int w, int h) {
    std::vector<double> out(static_cast<std::size_t>(w) * h);
    const double n = static_cast<double>(w) * h;
    for (int ky = 0; ky < h; ++ky)
        for (int kx = 0; kx < w; ++kx) {
            std::complex<double> acc = 0.0;
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const double ang = -2.0 * std::numbers::pi *
                                       (static_cast<double>(kx) * x / w + static_cast<double>(ky) * y / h);
                    acc += f[static_cast<std::size_t>(y) * w + x] * std::polar(1.0, ang);
                }
            out[static_cast<std::size_t>(ky) * w + kx] = std::norm(acc) / n;
        }
    return out;
}

inline moiremix::ImageBuffer random_image(int w, int h, int c, std::uint64_t seed) {
    moiremix::SeedStream s = moiremix::SeedStream::derive(seed, 0xfeed);
    moiremix::ImageBuffer img(w, h, c);
    for (double& v : img.data()) v = s.uniform();
    return img;
}

// Smooth natural-looking test image: gradients plus a few blobs.
inline moiremix::ImageBuffer natural_image(int w, int h, std::uint64_t seed) {
    moiremix::SeedStream s = moiremix::SeedStream::derive(seed, 0xbeef);
    moiremix::ImageBuffer img(w, h, 3);
    const double gx = s.uniform(-0.4, 0.4), gy = s.uniform(-0.4, 0.4);
    const double bx = s.uniform(0, w), by = s.uniform(0, h), br = s.uniform(w / 8.0, w / 3.0);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u)
            for (int c = 0; c < 3; ++c) {
                const double base = 0.5 + gx * (u / double(w) - 0.5) + gy * (v / double(h) - 0.5) + 0.05 * c;
                const double blob = std::hypot(u - bx, v - by) < br ? 0.2 : 0.0;
                img.at(u, v, c) = std::clamp(base + blob, 0.0, 1.0);
            }
    return img;
}

}  // namespace testsupport
