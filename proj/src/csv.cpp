#include "arc/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace arc {

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    if (x == std::floor(x) && std::abs(x) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", x);
        return buf;
    }
    // Otherwise find the shortest precision that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) {
            return buf;
        }
    }
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : n_cols_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) {
            buf_ += ',';
        }
        buf_ += columns[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != n_cols_) {
        throw std::invalid_argument("CsvWriter: field count does not match header");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            buf_ += ',';
        }
        buf_ += fields[i];
    }
    buf_ += '\n';
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const auto dir = path.parent_path();
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
    }
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("atomic_write: cannot open " + tmp);
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error("atomic_write: short write to " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace arc
