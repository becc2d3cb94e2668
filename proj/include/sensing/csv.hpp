#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace sensing {

/// Shortest round-trip decimal form, '.' separator, locale independent.
std::string format_number(double value);

/// Comma-separated writer: one header row, LF line endings, no quoting
/// (fields are identifiers or numbers).
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    CsvWriter& field(std::string_view text);
    CsvWriter& field(double value);
    CsvWriter& field(long long value);
    void end_row();

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t pending_{0};
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws std::out_of_range if absent.
    std::size_t column(std::string_view name) const;
};

/// Strict reader for files produced by CsvWriter. Throws std::runtime_error
/// on a missing file or ragged rows.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace sensing
