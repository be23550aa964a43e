#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qmod {

/// 17 significant digits, "nan"/"inf" for non-finite values.
std::string format_double(double v);

/// Builds a CSV document in memory: '#' comment lines, one header row, then
/// numeric rows. Output depends only on what was written.
class CsvTable {
public:
    void comment(std::string_view line);
    void header(std::vector<std::string> columns);
    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

    std::size_t columns() const { return columns_.size(); }
    std::size_t rows() const { return rows_; }
    std::string str() const { return text_; }

    /// Writes to `path`, creating parent directories. Throws IoError.
    void save(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

/// Writes text to a file, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace qmod
