#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace cli {

// Rectangular numeric table with a '#'-prefixed metadata block.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
  void meta(const std::string& key, double value);
  void note(const std::string& text) { meta_.emplace_back("note", text); }

  void add_row(std::vector<double> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  void write(std::FILE* f) const;
  // Writes to path, or stdout when path is empty or "-".
  void save(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<double>> rows_;
};

// %.17g, with "inf"/"-inf" for infinities and "nan" otherwise non-finite.
std::string format_value(double v);

inline constexpr int kHeatmap = -2;

// Gnuplot script plotting every column after the first against the first.
// With group_by set, rows are split by the value of that column; kHeatmap
// draws column 3 as a colour map over columns 1 and 2.
void write_gnuplot(const std::string& csv_path, const Table& t, const std::string& title,
                   int group_by = -1);

}  // namespace cli
