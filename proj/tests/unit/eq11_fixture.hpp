#pragma once

// Four queries, five raters, five algorithms. Expected values were computed
// by hand (gamma, median threshold 14.5, confidences 1/5, 4/5, 0, 1).

#include <string>
#include <vector>

#include "outfit/eval.hpp"

namespace fixture {

inline std::vector<outfit::RatingRecord> eq11_records(std::size_t queries = 4) {
  const std::vector<std::vector<std::vector<int>>> q{
      {{2, 1, 0, -1, 1}, {2, 1, 0, -1, 2}, {1, 1, 0, -1, 1}, {-1, 2, 2, 2, -1}, {2, 0, 0, -1, 1}},
      {{0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 1}, {2, 2, 2, 2, 2}, {0, 1, 0, 0, 0}},
      {{1, 2, -1, 0, 2}, {-1, -1, 2, 2, -1}, {2, -1, 1, -1, 0}, {0, 2, 2, -1, 1}, {1, 0, -1, 2, -1}},
      {{1, 1, 1, 1, 1}, {1, 1, 1, 1, 2}, {1, 1, 1, 2, 1}, {1, 2, 1, 1, 1}, {2, 1, 1, 1, 1}},
  };
  std::vector<outfit::RatingRecord> out;
  for (std::size_t i = 0; i < queries; ++i)
    for (std::size_t r = 0; r < 5; ++r)
      out.push_back({"q" + std::to_string(i + 1), "f" + std::to_string(r + 1), q[i][r], std::nullopt});
  return out;
}

inline const std::vector<std::vector<double>> kGamma{
    {14, 17, 15, 45, 17}, {12, 12, 13, 38, 13}, {35, 36, 32, 33, 32}, {4, 7, 7, 7, 7}};
inline constexpr double kThreshold = 14.5;
inline const std::vector<double> kConfidence{0.2, 0.8, 0.0, 1.0};
inline const std::vector<double> kRawScore{1.6, 1.6, 1.0, 1.0, 1.6};
inline const std::vector<double> kNormalized{0.6, 0.6, 0.5, 0.5, 0.6};

}  // namespace fixture
