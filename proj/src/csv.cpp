#include "sensing/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sensing {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto& name : header) field(name);
    end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
    if (pending_ > 0) out_ << ',';
    out_ << text;
    ++pending_;
    return *this;
}

CsvWriter& CsvWriter::field(double value) { return field(format_number(value)); }

CsvWriter& CsvWriter::field(long long value) { return field(std::to_string(value)); }

void CsvWriter::end_row() {
    if (pending_ != columns_)
        throw std::logic_error("csv row in " + path_.string() + " has " + std::to_string(pending_) +
                               " fields, header has " + std::to_string(columns_));
    out_ << '\n';
    pending_ = 0;
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("csv has no column " + std::string(name));
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + " is empty");
    table.header = split(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto cells = split(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(table.header.size()) + " fields");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

}  // namespace sensing
