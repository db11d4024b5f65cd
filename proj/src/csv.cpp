#include "baoii/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "baoii/errors.hpp"

namespace baoii {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    // %.17g round-trips every double; try the shorter forms first
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

std::string csv_quote(const std::string& field) {
    const bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_quote(cells[i]);
    }
    return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw input_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw input_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw input_error("rename failed for " + target.string() + ": " + ec.message());
}

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& labels) {
    std::ostringstream out;
    std::vector<std::string> header;
    header.emplace_back("state");
    for (int j = 0; j < m.cols(); ++j) header.push_back(labels[static_cast<std::size_t>(j)]);
    out << csv_row(header) << "\n";
    for (int i = 0; i < m.rows(); ++i) {
        std::vector<std::string> cells;
        cells.push_back(labels[static_cast<std::size_t>(i)]);
        for (int j = 0; j < m.cols(); ++j) cells.push_back(format_double(m(i, j)));
        out << csv_row(cells) << "\n";
    }
    return out.str();
}

std::string vector_csv(const std::vector<double>& v, const std::vector<std::string>& labels) {
    std::ostringstream out;
    out << csv_row(labels) << "\n";
    std::vector<std::string> cells;
    for (double x : v) cells.push_back(format_double(x));
    out << csv_row(cells) << "\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace baoii
