#include "ubss/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ubss/error.hpp"

namespace ubss {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Header plus rows of numbers, all rows of the header's width.
struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

NumericTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  NumericTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(f);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw IoError(path.string() + ": row " + std::to_string(line_no) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(table.header.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], row[i])) {
        throw IoError(path.string() + ": row " + std::to_string(line_no) + ", column " +
                      std::to_string(i + 1) + ": not a number: '" + std::string(fields[i]) + "'");
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw IoError(path.string() + ": missing header row");
  return table;
}

}  // namespace

std::string format_full(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_signal_csv(const std::filesystem::path& path, const SignalMatrix& m,
                      const std::string& column_prefix) {
  auto out = open_out(path);
  for (std::size_t k = 0; k < m.cols(); ++k) {
    out << (k ? "," : "") << column_prefix << (k + 1);
  }
  out << '\n';
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t k = 0; k < m.cols(); ++k) out << (k ? "," : "") << format_full(m(t, k));
    out << '\n';
  }
  finish(out, path);
}

SignalMatrix read_signal_csv(const std::filesystem::path& path) {
  NumericTable table = read_table(path);
  if (table.rows.empty()) throw IoError(path.string() + ": no samples");
  std::vector<double> data;
  data.reserve(table.rows.size() * table.header.size());
  for (const auto& r : table.rows) data.insert(data.end(), r.begin(), r.end());
  SignalMatrix m(table.rows.size(), table.header.size(), std::move(data));
  try {
    m.require_finite();
  } catch (const NumericError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return m;
}

void write_estimated_matrix_csv(const std::filesystem::path& path, const EstimatedMatrix& est) {
  auto out = open_out(path);
  for (std::size_t k = 0; k < est.n_sources(); ++k) out << (k ? "," : "") << 'a' << (k + 1);
  out << '\n';
  for (std::size_t k = 0; k < est.n_sources(); ++k) out << (k ? "," : "") << 1;
  out << '\n';
  for (std::size_t k = 0; k < est.n_sources(); ++k) {
    out << (k ? "," : "") << format_full(est.ratio(k));
  }
  out << '\n';
  finish(out, path);
}

EstimatedMatrix read_estimated_matrix_csv(const std::filesystem::path& path) {
  const NumericTable table = read_table(path);
  if (table.rows.size() != 2) {
    throw IoError(path.string() + ": expected 2 matrix rows, found " +
                  std::to_string(table.rows.size()));
  }
  for (double v : table.rows[0]) {
    if (v != 1.0) throw IoError(path.string() + ": first matrix row must be all ones");
  }
  try {
    return EstimatedMatrix(table.rows[1]);
  } catch (const NumericError& e) {
    throw NumericError(path.string() + ": " + e.what());
  }
}

void write_report_csv(const std::filesystem::path& path, const SeparationReport& report) {
  auto out = open_out(path);
  out << "estimate_idx,true_idx,correlation\n";
  for (const auto& m : report.matches) {
    out << (m.estimate_idx + 1) << ',' << (m.true_idx + 1) << ',' << format_full(m.correlation)
        << '\n';
  }
  finish(out, path);
}

}  // namespace ubss
