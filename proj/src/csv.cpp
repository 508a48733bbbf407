#include "gapmap/csv.hpp"

#include <cstdio>
#include <istream>
#include <stdexcept>

namespace gapmap {

CsvReader::CsvReader(std::istream& in) : in_(in) {}

bool CsvReader::next(std::vector<std::string>& row) {
    row.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    bool row_started = false;
    int c;
    while ((c = in_.get()) != EOF) {
        if (!row_started) {
            ++line_;
            row_line_ = line_;
            row_started = true;
            // Comment line: skip to end of line and restart.
            if (c == '#') {
                while (c != EOF && c != '\n') c = in_.get();
                row_started = false;
                continue;
            }
        }
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    field.push_back('"');
                    in_.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_;
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                break;
            case '\r':
                break;
            case '\n':
                row.push_back(std::move(field));
                return true;
            default:
                field.push_back(static_cast<char>(c));
        }
    }
    if (!any) return false;
    row.push_back(std::move(field));
    return true;
}

std::string csv_escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs && !(field.size() && field[0] == '#')) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string csv_join(const std::vector<std::string>& row) {
    std::string out;
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_escape(row[i]);
    }
    out.push_back('\n');
    return out;
}

CsvTable::CsvTable(std::istream& in) : reader_(in) {
    if (!reader_.next(header_)) {
        throw std::runtime_error("csv: missing header row");
    }
}

std::optional<int> CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
}

std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace gapmap
