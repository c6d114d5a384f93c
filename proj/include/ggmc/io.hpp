#pragma once

#include <string>
#include <vector>

#include "ggmc/types.hpp"

// Locale-free numeric CSV: comma separated, '.' decimal point, one
// observation per row. Parse failures throw ParseError with a 1-based
// line/column position.

namespace ggmc {

struct CsvMatrix {
  Matrix values;
  std::vector<std::string> header;  // empty when has_header = false
};

CsvMatrix read_csv_matrix(const std::string& path, bool has_header);

void write_csv_matrix(const std::string& path, const Matrix& values,
                      const std::vector<std::string>& header = {});

// Generic row writer for small report tables.
void write_csv_rows(const std::string& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Shortest decimal digits that round-trip a double exactly.
std::string format_double(double v);

}  // namespace ggmc
