#pragma once

#include <string>
#include <vector>

namespace mtb {

/// Fixed-precision decimal used in every CSV output ("%.10g").
std::string csv_number(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws std::invalid_argument if absent.
    std::size_t column(const std::string& name) const;
    std::string to_string() const;
    /// Plain comma-separated text without quoting; throws
    /// std::invalid_argument on ragged rows or an empty input.
    static CsvTable parse(const std::string& text);
};

/// Whole-file helpers; both throw IoError on failure. Writes go through a
/// temporary file renamed into place.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace mtb
