#include "rbgeo/point_set.hpp"

#include <algorithm>
#include <numeric>

#include "rbgeo/errors.hpp"

namespace rbgeo {

PointSet::PointSet(std::size_t dim, std::vector<double> coords,
                   std::vector<int> labels)
    : dim_(dim), coords_(std::move(coords)), labels_(std::move(labels)) {
  if (dim_ == 0) {
    if (!coords_.empty()) throw InvalidArgument("point dimension must be positive");
    return;
  }
  if (coords_.size() % dim_ != 0) {
    throw InvalidArgument("coordinate buffer is not a multiple of the dimension");
  }
  if (!labels_.empty() && labels_.size() != size()) {
    throw InvalidArgument("label count does not match point count");
  }
}

PointSet PointSet::from_rows(const std::vector<Point>& rows) {
  if (rows.empty()) return PointSet();
  PointSet out(rows.front().size());
  for (const auto& r : rows) out.push_back(r);
  return out;
}

void PointSet::push_back(std::span<const double> p) {
  if (dim_ == 0) dim_ = p.size();
  if (p.size() != dim_ || dim_ == 0) {
    throw InvalidArgument("point dimension mismatch");
  }
  if (has_labels()) throw InvalidArgument("labelled point set requires a label");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

void PointSet::push_back(std::span<const double> p, int label) {
  if (dim_ == 0) dim_ = p.size();
  if (p.size() != dim_ || dim_ == 0) {
    throw InvalidArgument("point dimension mismatch");
  }
  if (!has_labels() && !coords_.empty()) {
    throw InvalidArgument("unlabelled point set cannot take a label");
  }
  coords_.insert(coords_.end(), p.begin(), p.end());
  labels_.push_back(label);
}

void PointSet::set_labels(std::vector<int> labels) {
  if (!labels.empty() && labels.size() != size()) {
    throw InvalidArgument("label count does not match point count");
  }
  labels_ = std::move(labels);
}

std::vector<Point> PointSet::rows() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto r = (*this)[i];
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

std::size_t count_distinct_rows(const PointSet& points) {
  const std::size_t n = points.size();
  if (n == 0) return 0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    const auto ra = points[a];
    const auto rb = points[b];
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const auto ra = points[order[i - 1]];
    const auto rb = points[order[i]];
    if (!std::equal(ra.begin(), ra.end(), rb.begin())) ++distinct;
  }
  return distinct;
}

}  // namespace rbgeo
