#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colocq::csv {

// Minimal RFC 4180 reader: comma separated, double-quoted fields with "" as
// an escaped quote, LF or CRLF line ends. Blank lines are skipped.
class Reader {
 public:
  Reader(std::istream& in, std::string source_name);

  // Reads the header row; throws InputError if the stream is empty.
  const std::vector<std::string>& read_header();
  const std::vector<std::string>& header() const { return header_; }
  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;

  // Next data row, or false at end of input. Rows are counted from 1.
  bool next(std::vector<std::string>& fields);
  std::size_t row() const { return row_; }
  std::size_t line() const { return line_; }
  const std::string& source() const { return source_; }

  // Parses a finite double; throws InputError naming row and field otherwise.
  double number(const std::vector<std::string>& fields, std::size_t col) const;
  long long integer(const std::vector<std::string>& fields, std::size_t col) const;
  const std::string& field(const std::vector<std::string>& fields, std::size_t col) const;

 private:
  bool read_record(std::vector<std::string>& fields);
  [[noreturn]] void fail(std::size_t col, const std::string& what) const;

  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::size_t row_ = 0;
  std::size_t line_ = 0;
};

// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

// Shortest representation that round-trips to the same double.
std::string format_number(double value);

}  // namespace colocq::csv
