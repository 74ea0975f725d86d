#include "massmc/dataset.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <vector>

#include "massmc/errors.hpp"
#include "massmc/rng.hpp"

namespace massmc {

Dataset generate_gaussian_data(long n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_gaussian_data: n must be >= 1");
  RngStream rng(seed);
  Dataset data;
  data.features.resize(n, 1);
  for (long i = 0; i < n; ++i) data.features(i, 0) = rng.normal();
  return data;
}

Dataset generate_mixture_lr_data(long n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_mixture_lr_data: n must be >= 1");
  RngStream rng(seed);
  Dataset data;
  data.features.resize(n, 2);
  Eigen::VectorXd labels(n);
  for (long i = 0; i < n; ++i) {
    const bool first = rng.uniform01() < 0.5;
    const double m0 = first ? 1.0 : -1.0;
    const double m1 = first ? -1.0 : 1.0;
    const double x0 = m0 + rng.normal();
    const double x1 = m1 + rng.normal();
    data.features(i, 0) = x0;
    data.features(i, 1) = x1;
    labels[i] = (x0 - x1 > 0.0) ? 1.0 : 0.0;
  }
  data.labels = std::move(labels);
  return data;
}

namespace {

bool parse_double(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
  if (begin == end) return false;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

Dataset load_csv_dataset(const std::string& path, int label_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path, 0, 0);

  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  std::size_t width = 0;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], row[c])) {
        numeric = false;
        bad_col = c;
        break;
      }
    }
    if (!numeric) {
      if (first_content_row) {
        first_content_row = false;  // header row
        continue;
      }
      throw ParseError("non-numeric cell", line_no, static_cast<long>(bad_col) + 1);
    }
    if (width == 0) {
      width = row.size();
      if (label_column < 0 || static_cast<std::size_t>(label_column) >= width) {
        throw ParseError("label column out of range", line_no, label_column + 1);
      }
    } else if (row.size() != width) {
      throw ParseError("ragged row", line_no, static_cast<long>(row.size()));
    }
    first_content_row = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows", line_no, 0);

  const long n = static_cast<long>(rows.size());
  const long d = static_cast<long>(width) - 1;
  Dataset data;
  data.features.resize(n, d);
  Eigen::VectorXd labels(n);
  for (long i = 0; i < n; ++i) {
    long f = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<int>(c) == label_column) {
        const double v = rows[i][c];
        if (v != 0.0 && v != 1.0) {
          throw LabelDomainError("label value " + std::to_string(v) + " is not in {0,1} (row " +
                                 std::to_string(i + 1) + ")");
        }
        labels[i] = v;
      } else {
        data.features(i, f++) = rows[i][c];
      }
    }
  }
  data.labels = std::move(labels);
  return data;
}

void standardize_features(Dataset& data) {
  const long n = data.n();
  if (n < 2) return;
  for (long c = 0; c < data.feature_dim(); ++c) {
    const double mean = data.features.col(c).mean();
    const double var = (data.features.col(c).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      data.features.col(c) = (data.features.col(c).array() - mean) / sd;
    }
  }
}

}  // namespace massmc
