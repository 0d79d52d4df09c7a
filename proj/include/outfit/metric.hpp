#pragma once

#include <span>
#include <string>

namespace outfit {

enum class Metric { L1, L2, KL };

inline constexpr double kKlEpsilon = 1e-8;

/// L1, Euclidean, or symmetric KL after adding kKlEpsilon to every bin and
/// renormalising both arguments.
double distance(Metric m, std::span<const double> a, std::span<const double> b);

Metric parse_metric(const std::string& name);  // "l1" | "l2" | "kl"
std::string to_string(Metric m);

}  // namespace outfit
