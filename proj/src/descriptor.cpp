#include "outfit/descriptor.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace outfit {

bool is_valid_descriptor(const PartDescriptor& d, double tol) {
  if (d.empty()) return false;
  double sum = 0.0;
  for (double v : d.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

void require_valid_descriptor(const PartDescriptor& d, const std::string& what,
                              double tol) {
  if (!is_valid_descriptor(d, tol)) {
    throw std::invalid_argument(what + ": not a nonnegative unit-mass descriptor");
  }
}

PartDescriptor normalized(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("normalized: empty vector");
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  if (sum <= 0.0) {
    const double u = 1.0 / static_cast<double>(values.size());
    for (double& v : values) v = u;
  } else {
    for (double& v : values) v /= sum;
  }
  return PartDescriptor(std::move(values));
}

std::vector<std::size_t> HolisticDescriptor::visible_parts() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < visible.size(); ++j)
    if (visible[j]) out.push_back(j);
  return out;
}

std::vector<std::size_t> HolisticDescriptor::hidden_parts() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < visible.size(); ++j)
    if (!visible[j]) out.push_back(j);
  return out;
}

std::size_t HolisticDescriptor::sole_hidden_part() const {
  if (visible.size() != parts.size())
    throw std::invalid_argument("holistic descriptor: mask/part count mismatch");
  const auto hidden = hidden_parts();
  if (hidden.size() != 1)
    throw std::invalid_argument("query must have exactly one hidden part, has " +
                                std::to_string(hidden.size()));
  return hidden.front();
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double squared_l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("squared_l2_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace outfit
