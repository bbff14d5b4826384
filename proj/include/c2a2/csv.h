#ifndef C2A2_CSV_H_
#define C2A2_CSV_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace c2a2 {

struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

// Comma-separated with RFC 4180 double-quote escaping. A UTF-8 BOM and
// trailing CR are stripped; blank lines are skipped. Throws kParseError.
CsvTable ParseCsv(std::string_view text);

std::string ReadTextFile(const std::filesystem::path& path);   // kIoError
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Full-field decimal parse (surrounding spaces allowed); kParseError with
// the line and column named on failure.
double ParseDouble(std::string_view field, std::size_t line,
                   std::string_view column);

}  // namespace c2a2

#endif  // C2A2_CSV_H_
