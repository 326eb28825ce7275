#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace levlab {

/// Fixed 10-significant-digit rendering used for every analysis output, so
/// reruns diff byte-identically. Non-finite values render as inf/-inf/nan.
std::string format_number(double value);

/// FNV-1a 64-bit over raw bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

std::string read_file(const std::string& path);  // throws DataError

enum class TableFormat { csv, json };

/// Row-oriented output table with a reproducibility manifest. Cells are
/// formatted on insertion (numbers via format_number), so CSV and JSON
/// renderings of the same table carry identical digits. The manifest holds
/// the command's parameters and input checksums; it renders as leading
/// '# key=value' comment lines in CSV and a "manifest" object in JSON.
class Table {
  public:
    explicit Table(std::vector<std::string> columns);

    void manifest(const std::string& key, const std::string& value);
    void manifest(const std::string& key, double value);

    Table& begin_row();
    Table& num(double value);
    Table& integer(long long value);
    Table& text(const std::string& value);

    void write(std::ostream& out, TableFormat format) const;
    void write_file(const std::string& path, TableFormat format) const;  // "-" = stdout

  private:
    struct Cell {
        std::string value;
        bool quoted;  // JSON: emit as string
    };
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> manifest_;
    std::vector<std::vector<Cell>> rows_;
    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;
};

}  // namespace levlab
