#include "qmod/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qmod/errors.hpp"

namespace qmod {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0"; // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvTable::comment(std::string_view line)
{
    text_ += "# ";
    text_ += line;
    text_ += '\n';
}

void CsvTable::header(std::vector<std::string> columns)
{
    if (!columns_.empty())
        throw std::logic_error("CsvTable: header written twice");
    columns_ = std::move(columns);
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns_[i];
    }
    text_ += '\n';
}

void CsvTable::row(std::span<const double> values)
{
    if (values.size() != columns_.size())
        throw std::logic_error("CsvTable: row width " + std::to_string(values.size()) + " != header width " +
                               std::to_string(columns_.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_double(values[i]);
    }
    text_ += '\n';
    ++rows_;
}

void CsvTable::save(const std::filesystem::path& path) const { write_text_file(path, text_); }

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
        throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace qmod
