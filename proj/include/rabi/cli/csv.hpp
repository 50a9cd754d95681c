// csv.hpp: CSV output with `#` metadata lines ahead of the header row.
// Reals are written with 17 significant digits so re-runs are byte-identical
// and values round-trip exactly.
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace rabi::cli {

using Cell = std::variant<double, long, std::string>;

std::string format_real(double v);

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);

    // Metadata must precede the header.
    void meta(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<Cell>& cells);

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_ = 0;
};

}  // namespace rabi::cli
