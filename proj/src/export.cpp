#include <cstdio>
#include <fstream>

#include "moiremix/csv.hpp"
#include "moiremix/image_io.hpp"
#include "moiremix/mixer.hpp"
#include "moiremix/parallel.hpp"

namespace moiremix::mix {

std::string texture_file_name(std::uint64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06llu.png", static_cast<unsigned long long>(index));
    return buf;
}

Manifest export_dataset(std::uint64_t count, const texgen::GeneratorConfig& cfg,
                        const std::filesystem::path& out_dir, std::uint64_t root_seed, int workers) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError(out_dir.string() + ": cannot create directory (" + ec.message() + ")");

    Manifest manifest;
    manifest.rows.resize(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t i) {
        SeedStream stream = SeedStream::derive(root_seed, i);
        const texgen::TextureParams params = texgen::sample_params(stream, cfg);
        const ImageBuffer img = texgen::render(params, cfg.width, cfg.height);
        ManifestRow& row = manifest.rows[i];
        row.index = i;
        row.seed = root_seed;
        row.generator = std::string(texgen::to_string(cfg.kind));
        row.params_json = texgen::params_json(params, cfg);
        row.file = texture_file_name(i);
        save_image(img, out_dir / row.file, ImageFormat::png);
    });

    const auto manifest_path = out_dir / "manifest.csv";
    std::ofstream out(manifest_path, std::ios::trunc);
    if (!out) throw IoError(manifest_path.string() + ": cannot open for writing");
    out << kManifestHeader << '\n';
    for (const ManifestRow& r : manifest.rows)
        out << csv::join({std::to_string(r.index), std::to_string(r.seed), r.generator, r.params_json}) << '\n';
    if (!out) throw IoError(manifest_path.string() + ": write failed");
    return manifest;
}

}  // namespace moiremix::mix
