#include "stocksent/csv.hpp"

#include <fstream>
#include <sstream>

#include "stocksent/errors.hpp"

namespace stocksent {

std::vector<CsvRecord> parse_csv(const std::string& content) {
    std::vector<CsvRecord> records;
    std::vector<std::string> fields;
    std::string field;
    long line = 1;
    long record_line = 1;
    bool in_quotes = false;
    bool field_started = false;  // distinguishes "" (one empty field) from a blank line
    bool record_has_data = false;

    auto end_field = [&]() {
        fields.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&]() {
        end_field();
        records.push_back(CsvRecord{std::move(fields), record_line});
        fields = {};
        record_has_data = false;
    };

    const std::size_t n = content.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty() && !field_started) {
                    in_quotes = true;
                    field_started = true;
                    record_has_data = true;
                } else {
                    // Bare quote inside an unquoted field: keep it literally.
                    field += c;
                }
                break;
            case ',':
                end_field();
                record_has_data = true;
                break;
            case '\r':
                if (i + 1 < n && content[i + 1] == '\n') break;  // handled at the LF
                [[fallthrough]];
            case '\n':
                ++line;
                if (record_has_data || field_started || !field.empty() || !fields.empty()) {
                    end_record();
                }
                record_line = line;
                break;
            default:
                field += c;
                field_started = true;
                record_has_data = true;
                break;
        }
    }
    if (in_quotes) {
        throw ParseError("unterminated quoted field", record_line);
    }
    if (record_has_data || !fields.empty() || !field.empty()) {
        end_record();
    }
    return records;
}

std::vector<CsvRecord> read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::string csv_escape(const std::string& field) {
    bool needs_quotes = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << '\n';
}

void write_csv_file(const std::string& path, const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    for (const auto& row : rows) write_csv_row(out, row);
}

}  // namespace stocksent
