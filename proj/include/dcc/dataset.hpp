#ifndef DCC_DATASET_HPP
#define DCC_DATASET_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dcc {

// An ordered sequence of n real data points of common dimension d, with
// optional strictly increasing timestamps. Immutable after construction.
class Dataset {
 public:
  // Validates and builds a dataset. Throws InvalidInput on empty input,
  // ragged dimensions, non-finite values, or non-increasing timestamps.
  static Dataset validate(const std::vector<std::vector<double>>& points,
                          std::optional<std::vector<double>> timestamps = {});

  // Convenience constructor for scalar (d=1) series.
  static Dataset from_scalars(const std::vector<double>& values);

  // Flat row-major storage, used internally by models.
  static Dataset from_flat(std::vector<double> flat, int n, int d,
                           std::optional<std::vector<double>> timestamps = {});

  int n() const { return n_; }
  int dim() const { return d_; }

  std::span<const double> point(int i) const {
    return {flat_.data() + static_cast<std::size_t>(i) * d_,
            static_cast<std::size_t>(d_)};
  }
  double value(int i, int j) const {
    return flat_[static_cast<std::size_t>(i) * d_ + j];
  }
  // Scalar access; requires d=1.
  double scalar(int i) const;
  std::vector<double> scalars() const;

  bool has_timestamps() const { return timestamps_.has_value(); }
  double timestamp(int i) const { return (*timestamps_)[i]; }
  const std::vector<double>& timestamps() const { return *timestamps_; }

  const std::vector<double>& flat() const { return flat_; }

 private:
  Dataset() = default;
  std::vector<double> flat_;
  int n_ = 0;
  int d_ = 0;
  std::optional<std::vector<double>> timestamps_;
};

// CSV format: UTF-8 with a header row; optional first column `t`, data
// columns `y1..yd`. Round-trips finite doubles bit-exactly.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);
void write_csv(const Dataset& data, std::ostream& out);

}  // namespace dcc

#endif  // DCC_DATASET_HPP
