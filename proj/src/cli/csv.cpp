#include "rabi/cli/csv.hpp"

#include "rabi/error.hpp"

#include <cmath>
#include <cstdio>

namespace rabi::cli {
namespace {

std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : path_(path), out_(path) {
    if (!out_) throw Error(ErrorKind::validation, "cannot write '" + path.string() + "'");
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
    if (columns_ != 0) throw Error(ErrorKind::usage, "CSV metadata must precede the header");
    std::string v = value;
    for (char& c : v)
        if (c == '\n') c = ' ';
    out_ << "# " << key << " = " << v << '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    if (columns_ != 0) throw Error(ErrorKind::usage, "CSV header written twice");
    if (columns.empty()) throw Error(ErrorKind::usage, "CSV header needs at least one column");
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << escape(columns[i]);
    out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_)
        throw Error(ErrorKind::usage, "CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                          std::to_string(columns_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, double>) out_ << format_real(c);
                else if constexpr (std::is_same_v<T, long>) out_ << c;
                else out_ << escape(c);
            },
            cells[i]);
    }
    out_ << '\n';
    if (!out_) throw Error(ErrorKind::numeric, "write to '" + path_.string() + "' failed");
}

}  // namespace rabi::cli
