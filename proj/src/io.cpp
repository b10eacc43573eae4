#include "marginvote/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "marginvote/core.hpp"

namespace marginvote {

std::string format_number(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

double round12(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

namespace {

double parse_double(const std::string& text) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("cannot parse number '" + text + "'");
    }
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
    const auto first_colon = text.find(':');
    if (first_colon == std::string::npos) {
        std::vector<double> values;
        std::istringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) values.push_back(parse_double(field));
        if (values.empty()) throw ValidationError("empty grid specification");
        return values;
    }
    const auto second_colon = text.find(':', first_colon + 1);
    if (second_colon == std::string::npos)
        throw ValidationError("grid must be start:stop:step, got '" + text + "'");
    const double start = parse_double(text.substr(0, first_colon));
    const double stop = parse_double(text.substr(first_colon + 1, second_colon - first_colon - 1));
    const double step = parse_double(text.substr(second_colon + 1));
    if (!(step > 0.0)) throw ValidationError("grid step must be positive");
    if (stop < start) throw ValidationError("grid stop must be >= start");
    std::vector<double> values;
    for (long long i = 0;; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > stop + step * 0.5) break;
        values.push_back(std::min(v, stop));
    }
    return values;
}

std::vector<long long> parse_integer_list(const std::string& text) {
    std::vector<long long> values;
    for (const double v : parse_grid(text)) {
        if (std::floor(v) != v)
            throw ValidationError("expected integers, got '" + text + "'");
        values.push_back(static_cast<long long>(v));
    }
    return values;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::begin_row() {
    if (in_row_ && row_fields_ != columns_.size())
        throw ValidationError("csv row has wrong field count");
    if (in_row_) body_ += '\n';
    in_row_ = true;
    row_fields_ = 0;
}

void CsvTable::add(const std::string& value) {
    if (!in_row_) throw ValidationError("csv value added outside a row");
    if (row_fields_ > 0) body_ += ',';
    body_ += value;
    ++row_fields_;
}

void CsvTable::add(long long value) { add(std::to_string(value)); }
void CsvTable::add(int value) { add(std::to_string(value)); }
void CsvTable::add(double value) { add(format_number(round12(value))); }

std::string CsvTable::str() const {
    std::string out;
    for (size_t i = 0; i < columns_.size(); ++i) {
        if (i > 0) out += ',';
        out += columns_[i];
    }
    out += '\n';
    out += body_;
    if (!body_.empty()) out += '\n';
    return out;
}

void CsvTable::write_file(const std::string& path) const { marginvote::write_file(path, str()); }

std::string file_checksum(const std::string& path) {
    const std::string bytes = read_file(path);
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

} // namespace marginvote
