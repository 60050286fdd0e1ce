#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace citenet::csv {

/// A parsed CSV file with a header row. Fields may be double-quoted with
/// "" as the escaped quote.
class Table {
 public:
  static Table read(const std::filesystem::path& path);
  static Table parse(std::string_view text, std::string source = "<memory>");

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }
  /// 1-based line number of the row in the source text.
  std::size_t line(std::size_t i) const { return lines_[i]; }
  const std::string& source() const { return source_; }

  std::optional<std::size_t> column(std::string_view name) const;
  /// Column index or an Error naming the file and missing column.
  std::size_t require_column(std::string_view name) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

/// Row-oriented writer producing RFC 4180 style output with '\n' endings.
class Writer {
 public:
  explicit Writer(std::vector<std::string> header);

  Writer& cell(std::string_view value);
  Writer& cell(long long value);
  Writer& cell(unsigned long long value);
  Writer& cell(int value) { return cell(static_cast<long long>(value)); }
  Writer& cell(std::size_t value) { return cell(static_cast<unsigned long long>(value)); }
  Writer& cell(double value);
  /// Empty cell for an undefined value.
  Writer& cell(const std::optional<double>& value);
  void end_row();

  const std::string& str() const { return out_; }
  void save(const std::filesystem::path& path) const;

 private:
  void separator();

  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::string out_;
};

/// Shortest round-trip representation of a double.
std::string format_double(double value);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace citenet::csv
