#include "curvecomp/report.hpp"

#include "curvecomp/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace curvecomp {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  // Integers (counts, seeds) are written exactly.
  if (x == std::floor(x) && std::abs(x) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", x);
  } else {
    std::snprintf(buf, sizeof buf, "%.12g", x);
  }
  return buf;
}

std::string write_table(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c > 0) out += ',';
    out += table.header[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format12(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Table parse_table(std::string_view text) {
  Table table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw InvalidArgument("table line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(table.header.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* stop = nullptr;
      const double v = std::strtod(f.c_str(), &stop);
      if (f.empty() || stop != f.c_str() + f.size()) {
        throw InvalidArgument("table line " + std::to_string(line_no) + ": '" + f + "' is not a number");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw InvalidArgument("table has no header row");
  return table;
}

Table criterion_curve_table(const CriterionReport& report) {
  Table t{{"t", "phi_n", "lower_bound"}, {}};
  t.rows.reserve(report.curve.size());
  for (const auto& p : report.curve) t.rows.push_back({p.t, p.phi, p.lower_bound});
  return t;
}

Table band_table(const CoverageResult& result) {
  Table t{{"t", "center", "lower", "upper", "true_diff"}, {}};
  t.rows.reserve(result.grid.size());
  for (std::size_t k = 0; k < result.grid.size(); ++k) {
    t.rows.push_back({result.grid[k], result.center[k], result.lower[k], result.upper[k], result.true_diff[k]});
  }
  return t;
}

Table summary_table(const CoverageResult& result, double alpha, std::uint64_t seed) {
  return {{"coverage", "mean_maxwidth", "replications", "alpha", "seed"},
          {{result.coverage, result.mean_maxwidth, static_cast<double>(result.replications), alpha,
            static_cast<double>(seed)}}};
}

}  // namespace curvecomp
