#include "qfcm/errors.hpp"
#include "qfcm/harness.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace qfcm {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell.push_back(ch);
    }
  }
  out.push_back(cell);
  for (auto& c : out) {
    const auto b = c.find_first_not_of(" \t");
    const auto e = c.find_last_not_of(" \t");
    c = b == std::string::npos ? std::string() : c.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace

CsvData load_csv(const std::string& path, const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const std::vector<std::string> header = split_line(line);

  std::optional<std::size_t> label_col;
  if (label_column) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == *label_column) label_col = c;
    }
    if (!label_col) throw ConfigError(path + ": no label column named '" + *label_column + "'");
  }

  CsvData out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) out.feature_names.push_back(header[c]);
  }
  if (out.feature_names.empty()) throw ParseError(path + ": no feature columns");

  std::vector<std::vector<double>> rows;
  Labels labels;
  std::map<std::string, Index> label_ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " cells, found " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_col) {
        auto [it, inserted] = label_ids.emplace(cells[c], out.label_names.size());
        if (inserted) out.label_names.push_back(cells[c]);
        labels.push_back(it->second);
        continue;
      }
      double v = 0.0;
      const char* first = cells[c].data();
      const char* last = first + cells[c].size();
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (cells[c].empty() || ec != std::errc() || ptr != last) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": column '" + header[c] +
                         "' holds non-numeric value '" + cells[c] + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no data rows");

  Matrix points(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(out.feature_names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
  }
  out.data = Dataset(std::move(points));
  if (label_col) out.labels = std::move(labels);
  return out;
}

void write_csv(const std::string& path, const Dataset& data, const Labels* labels) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  for (Index c = 0; c < data.d(); ++c) out << (c ? "," : "") << "x" << c;
  if (labels) out << ",label";
  out << '\n' << std::setprecision(17);
  for (Index i = 0; i < data.n(); ++i) {
    for (Index c = 0; c < data.d(); ++c) {
      out << (c ? "," : "")
          << data.points()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
    if (labels) out << ',' << (*labels)[i];
    out << '\n';
  }
}

}  // namespace qfcm
