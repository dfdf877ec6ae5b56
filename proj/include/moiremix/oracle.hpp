#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "moiremix/image.hpp"

namespace moiremix::spectra {

/// Raised when a classifier cannot produce a usable answer (timeout, crash,
/// malformed or incomplete response).
class OracleError : public Error {
public:
    using Error::Error;
};

/// Anything that maps a batch of images to predicted labels, one per image.
class ClassifierOracle {
public:
    virtual ~ClassifierOracle() = default;
    virtual std::vector<std::string> classify(const std::vector<ImageBuffer>& batch) = 0;
};

/// Always answers the same label.
class ConstantOracle final : public ClassifierOracle {
public:
    explicit ConstantOracle(std::string label) : label_(std::move(label)) {}
    std::vector<std::string> classify(const std::vector<ImageBuffer>& batch) override;

private:
    std::string label_;
};

/// "1" when the mean intensity exceeds the threshold, else "0".
class MeanIntensityOracle final : public ClassifierOracle {
public:
    explicit MeanIntensityOracle(double threshold = 0.5) : threshold_(threshold) {}
    std::vector<std::string> classify(const std::vector<ImageBuffer>& batch) override;
    static std::string label_for(const ImageBuffer& img, double threshold);

private:
    double threshold_;
};

/**
 * External classifier behind a file protocol. For each batch the harness
 * writes PNGs plus a request manifest (`request_id,image_path`) into a fresh
 * directory under work_dir, runs `<command> <request.csv> <response.csv>`
 * through /bin/sh, and reads back `image_path,predicted_label`.
 */
class SubprocessOracle final : public ClassifierOracle {
public:
    SubprocessOracle(std::string command, std::filesystem::path work_dir,
                     std::chrono::milliseconds timeout = std::chrono::seconds(60), bool keep_batches = false);
    std::vector<std::string> classify(const std::vector<ImageBuffer>& batch) override;

private:
    std::string command_;
    std::filesystem::path work_dir_;
    std::chrono::milliseconds timeout_;
    bool keep_batches_;
    std::atomic<std::uint64_t> next_batch_{0};
};

/// Runs `/bin/sh -c command` and waits up to `timeout`; returns the exit status.
/// Throws OracleError on timeout (the process group is killed) or spawn failure.
int run_command(const std::string& command, std::chrono::milliseconds timeout);

/// Single-quotes a string for /bin/sh.
std::string shell_quote(const std::string& s);

}  // namespace moiremix::spectra
