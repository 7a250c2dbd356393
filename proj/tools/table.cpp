#include "table.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "handles.hpp"

namespace cli {

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::meta(const std::string& key, double value) { meta(key, format_value(value)); }

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) throw std::logic_error("table: row width mismatch");
  rows_.push_back(std::move(row));
}

void Table::write(std::FILE* f) const {
  for (const auto& [k, v] : meta_) std::fprintf(f, "# %s = %s\n", k.c_str(), v.c_str());
  for (std::size_t i = 0; i < columns_.size(); ++i)
    std::fprintf(f, "%s%s", i ? "," : "", columns_[i].c_str());
  std::fputc('\n', f);
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      std::fprintf(f, "%s%s", i ? "," : "", format_value(row[i]).c_str());
    std::fputc('\n', f);
  }
}

void Table::save(const std::string& path) const {
  if (path.empty() || path == "-") {
    write(stdout);
    std::fflush(stdout);
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw UsageError("cannot open " + path + " for writing");
  write(f);
  if (std::fclose(f) != 0) throw UsageError("write failed: " + path);
}

void write_gnuplot(const std::string& csv_path, const Table& t, const std::string& title,
                   int group_by) {
  const std::string gp = csv_path + ".gp";
  std::FILE* f = std::fopen(gp.c_str(), "w");
  if (!f) throw UsageError("cannot open " + gp + " for writing");
  const std::string png = csv_path + ".png";
  std::fprintf(f, "set datafile separator ','\nset datafile commentschars '#'\n");
  std::fprintf(f, "set key autotitle columnhead\nset terminal pngcairo size 900,600\n");
  std::fprintf(f, "set output '%s'\nset title '%s'\nset xlabel '%s'\n", png.c_str(),
               title.c_str(), t.columns()[0].c_str());
  if (group_by == kHeatmap) {
    std::fprintf(f, "set ylabel '%s'\nset view map\nset dgrid3d 40,40\n", t.columns()[1].c_str());
    std::fprintf(f, "splot '%s' using 1:2:3 with pm3d title '%s'\n", csv_path.c_str(),
                 t.columns()[2].c_str());
    std::fclose(f);
    return;
  }
  std::fprintf(f, "plot ");
  bool first = true;
  const int ncol = static_cast<int>(t.columns().size());
  if (group_by >= 0) {
    std::set<double> groups;
    for (const auto& r : t.rows()) groups.insert(r[group_by]);
    for (double g : groups)
      for (int c = 1; c < ncol; ++c) {
        if (c == group_by) continue;
        std::fprintf(f, "%s'%s' using 1:($%d==%s?$%d:1/0) with lines title '%s %s=%s'",
                     first ? "" : ", \\\n     ", csv_path.c_str(), group_by + 1,
                     format_value(g).c_str(), c + 1, t.columns()[c].c_str(),
                     t.columns()[group_by].c_str(), format_value(g).c_str());
        first = false;
      }
  } else {
    for (int c = 1; c < ncol; ++c) {
      std::fprintf(f, "%s'%s' using 1:%d with lines", first ? "" : ", \\\n     ",
                   csv_path.c_str(), c + 1);
      first = false;
    }
  }
  std::fputc('\n', f);
  std::fclose(f);
}

}  // namespace cli
