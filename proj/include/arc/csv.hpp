#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace arc {

/// Shortest round-trip decimal form of a double ("%.17g" trimmed),
/// "inf"/"-inf"/"nan" for non-finite values. Deterministic, so identical
/// runs produce byte-identical files.
std::string format_double(double x);

/// Minimal CSV assembly: a header row plus value rows.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> columns);

    void row(const std::vector<std::string>& fields);
    const std::string& str() const { return buf_; }

  private:
    std::size_t n_cols_;
    std::string buf_;
};

/// Writes content to path atomically (temp file in the same directory,
/// then rename). Creates parent directories as needed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

} // namespace arc
