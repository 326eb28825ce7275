#include "levlab/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "levlab/errors.hpp"

namespace levlab {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::manifest(const std::string& key, const std::string& value) {
    manifest_.emplace_back(key, value);
}

void Table::manifest(const std::string& key, double value) {
    manifest_.emplace_back(key, format_number(value));
}

Table& Table::begin_row() {
    rows_.emplace_back();
    rows_.back().reserve(columns_.size());
    return *this;
}

Table& Table::num(double value) {
    rows_.back().push_back({format_number(value), !std::isfinite(value)});
    return *this;
}

Table& Table::integer(long long value) {
    rows_.back().push_back({std::to_string(value), false});
    return *this;
}

Table& Table::text(const std::string& value) {
    rows_.back().push_back({value, true});
    return *this;
}

void Table::write_csv(std::ostream& out) const {
    for (const auto& [k, v] : manifest_) out << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c)
        out << columns_[c] << (c + 1 < columns_.size() ? "," : "\n");
    for (const auto& row : rows_)
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c].value << (c + 1 < row.size() ? "," : "\n");
}

namespace {
void json_string(std::ostream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out << '\\';
        out << c;
    }
    out << '"';
}
}  // namespace

void Table::write_json(std::ostream& out) const {
    out << "{\n  \"manifest\": {";
    for (std::size_t i = 0; i < manifest_.size(); ++i) {
        out << (i ? ", " : "");
        json_string(out, manifest_[i].first);
        out << ": ";
        json_string(out, manifest_[i].second);
    }
    out << "},\n  \"rows\": [\n";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        out << "    {";
        const auto& row = rows_[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? ", " : "");
            json_string(out, columns_[c]);
            out << ": ";
            if (row[c].quoted)
                json_string(out, row[c].value);
            else
                out << row[c].value;
        }
        out << (r + 1 < rows_.size() ? "},\n" : "}\n");
    }
    out << "  ]\n}\n";
}

void Table::write(std::ostream& out, TableFormat format) const {
    if (format == TableFormat::csv)
        write_csv(out);
    else
        write_json(out);
}

void Table::write_file(const std::string& path, TableFormat format) const {
    if (path == "-" || path.empty()) {
        write(std::cout, format);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    write(out, format);
}

}  // namespace levlab
