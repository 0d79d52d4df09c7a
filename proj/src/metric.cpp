#include "outfit/metric.hpp"

#include <cmath>
#include <stdexcept>

#include "outfit/descriptor.hpp"

namespace outfit {

namespace {

double smoothed_symmetric_kl(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("kl: dimension mismatch");
  const double n = static_cast<double>(a.size());
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += a[i];
    sb += b[i];
  }
  sa += n * kKlEpsilon;
  sb += n * kKlEpsilon;
  // 0.5 * [KL(p||q) + KL(q||p)] = 0.5 * sum (p - q)(ln p - ln q); every term is >= 0.
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = (a[i] + kKlEpsilon) / sa;
    const double q = (b[i] + kKlEpsilon) / sb;
    total += (p - q) * (std::log(p) - std::log(q));
  }
  return 0.5 * total;
}

}  // namespace

double distance(Metric m, std::span<const double> a, std::span<const double> b) {
  switch (m) {
    case Metric::L1:
      return l1_distance(a, b);
    case Metric::L2:
      return std::sqrt(squared_l2_distance(a, b));
    case Metric::KL:
      return smoothed_symmetric_kl(a, b);
  }
  throw std::invalid_argument("unknown metric");
}

Metric parse_metric(const std::string& name) {
  if (name == "l1") return Metric::L1;
  if (name == "l2") return Metric::L2;
  if (name == "kl") return Metric::KL;
  throw std::invalid_argument("unknown metric '" + name + "' (expected l1, l2 or kl)");
}

std::string to_string(Metric m) {
  switch (m) {
    case Metric::L1:
      return "l1";
    case Metric::L2:
      return "l2";
    case Metric::KL:
      return "kl";
  }
  return "?";
}

}  // namespace outfit
