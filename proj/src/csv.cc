#include "refspect/csv.h"

namespace refspect {

std::optional<CsvReader::Row> CsvReader::Next() {
  unterminated_quote_ = false;
  using Traits = std::char_traits<char>;
  std::streambuf* buf = in_.rdbuf();
  if (buf == nullptr || Traits::eq_int_type(buf->sgetc(), Traits::eof())) {
    return std::nullopt;
  }

  Row row;
  row.line = line_;
  row.byte_offset = offset_;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  int c;
  while (!Traits::eq_int_type(c = buf->sbumpc(), Traits::eof())) {
    ++offset_;
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (buf->sgetc() == '"') {
          buf->sbumpc();
          ++offset_;
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (ch == ',') {
      row.fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (ch == '\r' && buf->sgetc() == '\n') {
      // CRLF; the LF ends the row on the next iteration.
    } else if (ch == '\n') {
      ++line_;
      row.fields.push_back(std::move(field));
      return row;
    } else {
      field.push_back(ch);
    }
  }
  unterminated_quote_ = in_quotes;
  row.fields.push_back(std::move(field));
  return row;
}

void WriteCsvField(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char ch : field) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

void WriteCsvRow(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    WriteCsvField(out, fields[i]);
  }
  out << '\n';
}

}  // namespace refspect
