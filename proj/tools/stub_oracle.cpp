// Reference classifier for the heatmap oracle protocol.
//
// usage: moiremix-stub-oracle [--mode mean|constant] [--label L] [--threshold T]
//                             <request.csv> <response.csv>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "moiremix/csv.hpp"
#include "moiremix/image_io.hpp"
#include "moiremix/oracle.hpp"

using namespace moiremix;

int main(int argc, char** argv) {
    CLI::App app{"Stub classifier: labels images by mean intensity or answers a constant"};
    std::string mode = "mean";
    std::string label = "0";
    double threshold = 0.5;
    std::string request;
    std::string response;
    app.add_option("--mode", mode, "mean or constant")->check(CLI::IsMember({"mean", "constant"}))->capture_default_str();
    app.add_option("--label", label, "Answer in constant mode")->capture_default_str();
    app.add_option("--threshold", threshold, "Mean-intensity threshold in mean mode")->capture_default_str();
    app.add_option("request", request, "Request manifest (request_id,image_path)")->required();
    app.add_option("response", response, "Response CSV to write (image_path,predicted_label)")->required();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const csv::Table table = csv::read(request);
        const std::size_t pc = table.column("image_path");
        std::ofstream out(response, std::ios::trunc);
        if (!out) throw IoError(response + ": cannot open for writing");
        out << "image_path,predicted_label\n";
        for (const auto& row : table.rows) {
            const std::string& path = row.at(pc);
            const std::string answer =
                mode == "constant" ? label : spectra::MeanIntensityOracle::label_for(load_image(path), threshold);
            out << csv::escape(path) << ',' << csv::escape(answer) << '\n';
        }
        if (!out) throw IoError(response + ": write failed");
    } catch (const std::exception& e) {
        std::cerr << "stub oracle: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
