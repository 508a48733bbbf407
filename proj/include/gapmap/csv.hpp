#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gapmap {

// Minimal RFC-4180-style CSV. Quoted fields may contain commas, newlines
// and doubled quotes. Lines starting with '#' outside a quoted field are
// treated as comments (stage outputs carry a "# config_digest=..." line).
class CsvReader {
  public:
    explicit CsvReader(std::istream& in);

    // Reads the next row. Returns false at end of input.
    bool next(std::vector<std::string>& row);

    // 1-based line number where the last row started.
    long line_number() const { return row_line_; }

  private:
    std::istream& in_;
    long line_ = 0;
    long row_line_ = 0;
};

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& row);

// Header-aware view: resolves column names to indices once.
class CsvTable {
  public:
    // Throws std::runtime_error when the stream has no header row.
    explicit CsvTable(std::istream& in);

    const std::vector<std::string>& header() const { return header_; }
    std::optional<int> column(const std::string& name) const;

    bool next(std::vector<std::string>& row) { return reader_.next(row); }
    long line_number() const { return reader_.line_number(); }

  private:
    CsvReader reader_;
    std::vector<std::string> header_;
};

// Fixed six-decimal formatting used by every exported table.
std::string format_fixed6(double v);

}  // namespace gapmap
