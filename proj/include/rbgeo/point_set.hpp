#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rbgeo {

using Point = std::vector<double>;

// N points of dimension K stored row-major, with optional integer labels.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> coords,
           std::vector<int> labels = {});

  static PointSet from_rows(const std::vector<Point>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return size() == 0; }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> row(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

  void push_back(std::span<const double> p);
  void push_back(std::span<const double> p, int label);

  const std::vector<double>& coords() const noexcept { return coords_; }
  std::vector<double>& coords() noexcept { return coords_; }

  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<int> labels);

  std::vector<Point> rows() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<int> labels_;
};

// Number of pairwise distinct rows under exact coordinate equality.
std::size_t count_distinct_rows(const PointSet& points);

}  // namespace rbgeo
