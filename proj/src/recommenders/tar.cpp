#include "outfit/recommenders/tar.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace outfit {

PartDescriptor tar_transform(std::size_t dims, std::uint64_t seed, TarMode mode) {
  if (dims < 1) throw std::invalid_argument("tar: dimension must be positive");
  std::mt19937_64 rng(seed);
  if (mode == TarMode::Peaked) {
    if (dims != kHsvDims)
      throw std::invalid_argument("tar: peaked mode needs the " + std::to_string(kHsvDims) +
                                  "-dim HSV layout");
    std::uniform_int_distribution<std::size_t> hue(0, kHueBins - 1);
    std::vector<double> out(kHsvDims, 0.0);
    out[hue(rng)] = 1.0 / 3.0;
    out[kSatOffset + kSatBins - 1] = 1.0 / 3.0;
    out[kValOffset + kValBins - 1] = 1.0 / 3.0;
    return PartDescriptor(std::move(out));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(dims);
  for (double& v : out) v = unit(rng);
  return normalized(std::move(out));
}

TarMode parse_tar_mode(const std::string& name) {
  if (name == "uniform") return TarMode::Uniform;
  if (name == "peaked") return TarMode::Peaked;
  throw std::invalid_argument("unknown TAR mode '" + name + "' (expected uniform or peaked)");
}

std::string to_string(TarMode m) { return m == TarMode::Uniform ? "uniform" : "peaked"; }

double hue_concentration(const PartDescriptor& d) {
  if (d.empty()) throw std::invalid_argument("classify: empty descriptor");
  const auto first = d.values.begin();
  const auto last = d.size() == kHsvDims ? first + kHueBins : d.values.end();
  double total = 0.0;
  for (auto it = first; it != last; ++it) total += *it;
  if (!(total > 0.0)) return 0.0;
  return *std::max_element(first, last) / total;
}

PatternClass solid_pattern_classify(const PartDescriptor& d, double threshold) {
  return hue_concentration(d) >= threshold ? PatternClass::Solid : PatternClass::Patterned;
}

std::string to_string(PatternClass c) { return c == PatternClass::Solid ? "solid" : "patterned"; }

}  // namespace outfit
