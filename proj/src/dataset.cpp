#include "dcc/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "dcc/errors.hpp"

namespace dcc {

Dataset Dataset::validate(const std::vector<std::vector<double>>& points,
                          std::optional<std::vector<double>> timestamps) {
  if (points.empty()) throw invalid_input("EmptyData: dataset has no points");
  const std::size_t d = points.front().size();
  if (d == 0) throw invalid_input("EmptyData: zero-dimensional points");
  std::vector<double> flat;
  flat.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.size() != d)
      throw invalid_input("RaggedDimensions: points differ in dimension");
    for (double v : p) {
      if (!std::isfinite(v))
        throw invalid_input("NonFiniteValue: data contains NaN or infinity");
      flat.push_back(v);
    }
  }
  if (timestamps) {
    if (timestamps->size() != points.size())
      throw invalid_input("NonIncreasingTimestamps: timestamp count mismatch");
    for (std::size_t i = 0; i < timestamps->size(); ++i) {
      if (!std::isfinite((*timestamps)[i]))
        throw invalid_input("NonFiniteValue: timestamp not finite");
      if (i > 0 && (*timestamps)[i] <= (*timestamps)[i - 1])
        throw invalid_input("NonIncreasingTimestamps: must strictly increase");
    }
  }
  Dataset ds;
  ds.flat_ = std::move(flat);
  ds.n_ = static_cast<int>(points.size());
  ds.d_ = static_cast<int>(d);
  ds.timestamps_ = std::move(timestamps);
  return ds;
}

Dataset Dataset::from_scalars(const std::vector<double>& values) {
  std::vector<std::vector<double>> pts;
  pts.reserve(values.size());
  for (double v : values) pts.push_back({v});
  return validate(pts);
}

Dataset Dataset::from_flat(std::vector<double> flat, int n, int d,
                           std::optional<std::vector<double>> timestamps) {
  if (n < 1 || d < 1 || flat.size() != static_cast<std::size_t>(n) * d)
    throw invalid_input("EmptyData: bad flat dataset shape");
  Dataset ds;
  ds.flat_ = std::move(flat);
  ds.n_ = n;
  ds.d_ = d;
  ds.timestamps_ = std::move(timestamps);
  return ds;
}

double Dataset::scalar(int i) const {
  if (d_ != 1) throw invalid_input("scalar access requires d=1");
  return flat_[i];
}

std::vector<double> Dataset::scalars() const {
  if (d_ != 1) throw invalid_input("scalar access requires d=1");
  return flat_;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw invalid_input("NonFiniteValue: cannot parse '" + s + "' as a number");
  return v;
}

// Shortest representation that round-trips bit-exactly.
void print_double(std::ostream& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, ptr - buf);
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw invalid_input("EmptyData: empty CSV");
  auto header = split_csv_line(line);
  bool has_time = !header.empty() && header.front() == "t";
  const std::size_t data_cols = header.size() - (has_time ? 1 : 0);
  if (data_cols == 0) throw invalid_input("EmptyData: CSV has no data columns");

  std::vector<std::vector<double>> points;
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw invalid_input("RaggedDimensions: CSV row width mismatch");
    std::size_t j = 0;
    if (has_time) times.push_back(parse_double(fields[j++]));
    std::vector<double> p;
    p.reserve(data_cols);
    for (; j < fields.size(); ++j) p.push_back(parse_double(fields[j]));
    points.push_back(std::move(p));
  }
  std::optional<std::vector<double>> ts;
  if (has_time) ts = std::move(times);
  return Dataset::validate(points, std::move(ts));
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open dataset file: " + path);
  return read_csv(in);
}

void write_csv(const Dataset& data, std::ostream& out) {
  if (data.has_timestamps()) out << "t,";
  for (int j = 0; j < data.dim(); ++j) {
    if (j > 0) out << ',';
    out << 'y' << (j + 1);
  }
  out << '\n';
  for (int i = 0; i < data.n(); ++i) {
    if (data.has_timestamps()) {
      print_double(out, data.timestamp(i));
      out << ',';
    }
    for (int j = 0; j < data.dim(); ++j) {
      if (j > 0) out << ',';
      print_double(out, data.value(i, j));
    }
    out << '\n';
  }
}

}  // namespace dcc
