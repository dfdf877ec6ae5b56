#include "moiremix/oracle.hpp"

#include <csignal>
#include <fstream>
#include <numeric>
#include <thread>
#include <unordered_map>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "moiremix/csv.hpp"
#include "moiremix/image_io.hpp"

namespace moiremix::spectra {

namespace fs = std::filesystem;

std::vector<std::string> ConstantOracle::classify(const std::vector<ImageBuffer>& batch) {
    return std::vector<std::string>(batch.size(), label_);
}

std::string MeanIntensityOracle::label_for(const ImageBuffer& img, double threshold) {
    const auto d = img.data();
    const double mean = d.empty() ? 0.0 : std::accumulate(d.begin(), d.end(), 0.0) / d.size();
    return mean > threshold ? "1" : "0";
}

std::vector<std::string> MeanIntensityOracle::classify(const std::vector<ImageBuffer>& batch) {
    std::vector<std::string> out;
    out.reserve(batch.size());
    for (const auto& img : batch) out.push_back(label_for(img, threshold_));
    return out;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += '\'';
    return out;
}

int run_command(const std::string& command, std::chrono::milliseconds timeout) {
    const pid_t pid = fork();
    if (pid < 0) throw OracleError("fork failed while starting oracle command");
    if (pid == 0) {
        setpgid(0, 0);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    int status = 0;
    auto wait_ms = std::chrono::milliseconds(1);
    for (;;) {
        const pid_t r = waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0) throw OracleError("waitpid failed for oracle command");
        if (std::chrono::steady_clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            throw OracleError("oracle command timed out after " + std::to_string(timeout.count()) + " ms");
        }
        std::this_thread::sleep_for(wait_ms);
        wait_ms = std::min(wait_ms * 2, std::chrono::milliseconds(50));
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

SubprocessOracle::SubprocessOracle(std::string command, fs::path work_dir, std::chrono::milliseconds timeout,
                                   bool keep_batches)
    : command_(std::move(command)), work_dir_(std::move(work_dir)), timeout_(timeout), keep_batches_(keep_batches) {}

std::vector<std::string> SubprocessOracle::classify(const std::vector<ImageBuffer>& batch) {
    const fs::path dir = work_dir_ / ("batch_" + std::to_string(next_batch_.fetch_add(1)));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw OracleError(dir.string() + ": cannot create batch directory");

    const fs::path request = dir / "request.csv";
    const fs::path response = dir / "response.csv";
    std::vector<std::string> paths;
    {
        std::ofstream out(request);
        if (!out) throw OracleError(request.string() + ": cannot write request manifest");
        out << "request_id,image_path\n";
        for (std::size_t k = 0; k < batch.size(); ++k) {
            const fs::path img_path = dir / ("img_" + std::to_string(k) + ".png");
            save_image(batch[k], img_path, ImageFormat::png);
            paths.push_back(img_path.string());
            out << k << ',' << csv::escape(paths.back()) << '\n';
        }
    }

    const int status =
        run_command(command_ + " " + shell_quote(request.string()) + " " + shell_quote(response.string()), timeout_);
    if (status != 0) throw OracleError("oracle command exited with status " + std::to_string(status));

    std::unordered_map<std::string, std::string> answers;
    try {
        const csv::Table table = csv::read(response);
        const std::size_t pc = table.column("image_path");
        const std::size_t lc = table.column("predicted_label");
        for (const auto& row : table.rows) {
            if (row.size() <= std::max(pc, lc)) throw OracleError("short row in oracle response");
            answers[row[pc]] = row[lc];
        }
    } catch (const OracleError&) {
        throw;
    } catch (const Error& e) {
        throw OracleError(std::string("malformed oracle response: ") + e.what());
    }
    std::vector<std::string> labels;
    labels.reserve(paths.size());
    for (const auto& p : paths) {
        auto it = answers.find(p);
        if (it == answers.end()) throw OracleError("oracle response is missing " + p);
        labels.push_back(it->second);
    }
    if (!keep_batches_) fs::remove_all(dir, ec);
    return labels;
}

}  // namespace moiremix::spectra
