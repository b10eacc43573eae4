// Output plumbing shared by the CLI and tests: fixed-precision numeric
// formatting, CSV assembly, grid-flag parsing, and a small file checksum.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace marginvote {

// Formats a double with 12 significant digits ("%.12g").
std::string format_number(double value);

// Snaps a double to the value its 12-digit decimal form parses back to, so
// derived columns computed from snapped inputs reproduce the file exactly.
double round12(double value);

// "start:stop:step" -> inclusive grid (stop included when it lands within
// half a step). Also accepts a single number or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);
std::vector<long long> parse_integer_list(const std::string& text);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    void begin_row();
    void add(const std::string& value);
    void add(long long value);
    void add(int value);
    void add(double value); // snapped to 12 significant digits

    std::string str() const;
    void write_file(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::string body_;
    std::size_t row_fields_ = 0;
    bool in_row_ = false;
};

// FNV-1a 64-bit over a file's bytes, rendered as 16 hex digits.
std::string file_checksum(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace marginvote
