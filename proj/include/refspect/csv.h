#ifndef REFSPECT_CSV_H_
#define REFSPECT_CSV_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace refspect {

// Streaming RFC-4180 reader. Quoted fields may contain separators, doubled
// quotes and line breaks. Both LF and CRLF record terminators are accepted.
class CsvReader {
 public:
  struct Row {
    std::vector<std::string> fields;
    std::size_t line = 0;         // 1-based line the row starts on
    std::size_t byte_offset = 0;  // offset of the row's first byte
  };

  explicit CsvReader(std::istream& in) : in_(in) {}

  // Returns nullopt at end of input. A row with an unterminated quote is
  // returned with `unterminated_quote()` set.
  std::optional<Row> Next();

  bool unterminated_quote() const { return unterminated_quote_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t offset_ = 0;
  bool unterminated_quote_ = false;
};

// Writes one field, quoting only when it contains `,`, `"`, CR or LF.
void WriteCsvField(std::ostream& out, std::string_view field);

// Writes fields joined by commas and terminated by "\n".
void WriteCsvRow(std::ostream& out, std::span<const std::string> fields);

}  // namespace refspect

#endif  // REFSPECT_CSV_H_
