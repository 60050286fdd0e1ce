#include "citenet/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "citenet/types.hpp"

namespace citenet::csv {

namespace {

// Parses one record starting at `pos`; advances pos past the line ending.
std::vector<std::string> parse_record(std::string_view text, std::size_t& pos, std::size_t& line,
                                      const std::string& source) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  const std::size_t start_line = line;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
          continue;
        }
        quoted = false;
        ++pos;
        continue;
      }
      if (c == '\n') ++line;
      field.push_back(c);
      ++pos;
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      ++pos;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      ++pos;
    } else if (c == '\r') {
      ++pos;
    } else if (c == '\n') {
      ++pos;
      ++line;
      fields.push_back(std::move(field));
      return fields;
    } else {
      field.push_back(c);
      ++pos;
    }
  }
  if (quoted) throw Error(fmt::format("{}:{}: unterminated quoted field", source, start_line));
  fields.push_back(std::move(field));
  ++line;
  return fields;
}

bool blank(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].empty();
}

}  // namespace

Table Table::parse(std::string_view text, std::string source) {
  Table table;
  table.source_ = std::move(source);
  std::size_t pos = 0;
  std::size_t line = 1;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;
  while (pos < text.size()) {
    const std::size_t record_line = line;
    auto fields = parse_record(text, pos, line, table.source_);
    if (blank(fields)) continue;
    if (table.header_.empty()) {
      table.header_ = std::move(fields);
      continue;
    }
    if (fields.size() != table.header_.size()) {
      throw Error(fmt::format("{}:{}: expected {} fields, found {}", table.source_, record_line,
                              table.header_.size(), fields.size()));
    }
    table.rows_.push_back(std::move(fields));
    table.lines_.push_back(record_line);
  }
  if (table.header_.empty()) throw Error(fmt::format("{}: missing header row", table.source_));
  return table;
}

Table Table::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::optional<std::size_t> Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::size_t Table::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw Error(fmt::format("{}:1: missing column '{}'", source_, name));
}

Writer::Writer(std::vector<std::string> header) : columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

void Writer::separator() {
  if (in_row_ > 0) out_.push_back(',');
  ++in_row_;
}

Writer& Writer::cell(std::string_view value) {
  separator();
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) {
    out_.append(value);
    return *this;
  }
  out_.push_back('"');
  for (char c : value) {
    if (c == '"') out_.push_back('"');
    out_.push_back(c);
  }
  out_.push_back('"');
  return *this;
}

Writer& Writer::cell(long long value) {
  separator();
  out_ += fmt::format("{}", value);
  return *this;
}

Writer& Writer::cell(unsigned long long value) {
  separator();
  out_ += fmt::format("{}", value);
  return *this;
}

Writer& Writer::cell(double value) {
  separator();
  out_ += format_double(value);
  return *this;
}

Writer& Writer::cell(const std::optional<double>& value) {
  if (value) return cell(*value);
  separator();
  return *this;
}

void Writer::end_row() {
  if (in_row_ != columns_)
    throw Error(fmt::format("csv writer: row has {} cells, header has {}", in_row_, columns_));
  out_.push_back('\n');
  in_row_ = 0;
}

void Writer::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("{}: cannot write file", path.string()));
  out << out_;
}

std::string format_double(double value) { return fmt::format("{}", value); }

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  if (text.empty()) return parts;
  std::size_t start = 0;
  while (true) {
    auto end = text.find(sep, start);
    auto piece = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    while (!piece.empty() && (piece.front() == ' ' || piece.front() == '\t')) piece.remove_prefix(1);
    while (!piece.empty() && (piece.back() == ' ' || piece.back() == '\t')) piece.remove_suffix(1);
    if (!piece.empty()) parts.emplace_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

}  // namespace citenet::csv
