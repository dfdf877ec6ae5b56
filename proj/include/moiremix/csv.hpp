#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace moiremix::csv {

using Row = std::vector<std::string>;

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);
std::string join(const Row& fields);

/// RFC 4180 subset: quoted fields with doubled quotes; no embedded newlines.
Row split_line(std::string_view line);

struct Table {
    Row header;
    std::vector<Row> rows;

    /// Column index by name; throws moiremix::Error when absent.
    std::size_t column(std::string_view name) const;
};

/// Reads a CSV with a header row; blank lines and lines starting with '#' are skipped.
Table read(const std::filesystem::path& path);

}  // namespace moiremix::csv
