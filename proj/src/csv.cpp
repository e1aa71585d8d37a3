#include "colocq/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <system_error>

#include "colocq/error.hpp"

namespace colocq::csv {

Reader::Reader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {}

const std::vector<std::string>& Reader::read_header() {
  if (!read_record(header_)) throw InputError(source_ + ": empty input, header row expected");
  for (auto& name : header_) {
    // Tolerate a UTF-8 byte order mark and surrounding blanks in names.
    if (name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);
    auto first = name.find_first_not_of(" \t");
    auto last = name.find_last_not_of(" \t");
    name = first == std::string::npos ? std::string{} : name.substr(first, last - first + 1);
  }
  return header_;
}

std::optional<std::size_t> Reader::column(std::string_view name) const {
  auto it = std::find(header_.begin(), header_.end(), name);
  if (it == header_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header_.begin());
}

std::size_t Reader::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw InputError(source_ + ": missing required column '" + std::string(name) + "'");
}

bool Reader::next(std::vector<std::string>& fields) {
  if (!read_record(fields)) return false;
  ++row_;
  if (fields.size() != header_.size()) {
    throw InputError(source_ + ": row " + std::to_string(row_) + " (line " +
                     std::to_string(line_) + "): expected " + std::to_string(header_.size()) +
                     " fields, found " + std::to_string(fields.size()));
  }
  return true;
}

bool Reader::read_record(std::vector<std::string>& fields) {
  fields.clear();
  std::string line;
  while (true) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) break;
  }

  std::string current;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!quoted) break;
      // Quoted field spans a line break.
      std::string more;
      if (!std::getline(in_, more)) {
        throw InputError(source_ + ": line " + std::to_string(line_) + ": unterminated quote");
      }
      ++line_;
      if (!more.empty() && more.back() == '\r') more.pop_back();
      current.push_back('\n');
      line = std::move(more);
      i = 0;
      continue;
    }
    char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return true;
}

void Reader::fail(std::size_t col, const std::string& what) const {
  throw InputError(source_ + ": row " + std::to_string(row_) + " (line " + std::to_string(line_) +
                   "): field '" + header_.at(col) + "': " + what);
}

const std::string& Reader::field(const std::vector<std::string>& fields, std::size_t col) const {
  return fields.at(col);
}

double Reader::number(const std::vector<std::string>& fields, std::size_t col) const {
  std::string_view text = fields.at(col);
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(col, "not a number: '" + fields[col] + "'");
  }
  if (!std::isfinite(value)) fail(col, "not finite: '" + fields[col] + "'");
  return value;
}

long long Reader::integer(const std::vector<std::string>& fields, std::size_t col) const {
  std::string_view text = fields.at(col);
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(col, "not an integer: '" + fields[col] + "'");
  }
  return value;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace colocq::csv
