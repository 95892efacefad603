#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kelvin {

/// 15 significant digits, '.' decimal point, independent of the C locale.
std::string format_number(double value);

/// Minimal CSV builder: a header row plus numeric or pre-formatted cells.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(const std::vector<std::string>& cells);
    CsvTable& row(const std::vector<double>& values);

    std::size_t rows() const noexcept { return rows_; }
    const std::string& str() const noexcept { return text_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

/// Writes via a temporary sibling file and rename, so readers never see a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace kelvin
