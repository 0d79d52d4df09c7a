#include "outfit/cli/image_io.hpp"

#include <stdexcept>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace outfit::cli {

HsvImage load_hsv_image(const std::filesystem::path& path) {
  const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw std::runtime_error("cannot decode image: " + path.string());
  cv::Mat unit, hsv;
  bgr.convertTo(unit, CV_32FC3, 1.0 / 255.0);
  cv::cvtColor(unit, hsv, cv::COLOR_BGR2HSV);  // float input: H in [0,360), S,V in [0,1]

  HsvImage out(hsv.cols, hsv.rows);
  for (int y = 0; y < hsv.rows; ++y) {
    const auto* row = hsv.ptr<cv::Vec3f>(y);
    for (int x = 0; x < hsv.cols; ++x) {
      double h = row[x][0];
      if (h >= 360.0) h -= 360.0;
      out.at(x, y) = {h, row[x][1], row[x][2]};
    }
  }
  return out;
}

}  // namespace outfit::cli
