#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stocksent {

// One parsed CSV record plus the 1-based physical line it started on,
// so loaders can report row errors against the original file.
struct CsvRecord {
    std::vector<std::string> fields;
    long line = 0;
};

// RFC 4180 reader: quoted fields may contain commas, doubled quotes, and
// newlines; accepts LF and CRLF; a missing final newline is fine. Empty
// lines between records are skipped. Field text is preserved byte-exactly.
std::vector<CsvRecord> parse_csv(const std::string& content);
std::vector<CsvRecord> read_csv_file(const std::string& path);

// RFC 4180 writer: quotes a field iff it contains comma, quote, CR, or LF;
// embedded quotes are doubled. Rows end with "\n".
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
void write_csv_file(const std::string& path, const std::vector<std::vector<std::string>>& rows);

}  // namespace stocksent
