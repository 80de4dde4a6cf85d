#include "vibench/core/image_io.hpp"

#include <algorithm>
#include <cstdio>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace vibench {
namespace {

cv::Mat wrap(const RgbFrame& frame) {
  return cv::Mat(frame.height(), frame.width(), CV_8UC3, const_cast<std::uint8_t*>(frame.data()));
}

RgbFrame from_rgb_mat(const cv::Mat& rgb) {
  RgbFrame out(rgb.cols, rgb.rows);
  cv::Mat dst(rgb.rows, rgb.cols, CV_8UC3, out.data());
  rgb.copyTo(dst);
  return out;
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".png" || ext == ".jpg" || ext == ".jpeg")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::string frame_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%05d.png", index);
  return buf;
}

RgbFrame read_rgb(const fs::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw Error("cannot read image " + path.string());
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  return from_rgb_mat(rgb);
}

void write_rgb(const RgbFrame& frame, const fs::path& path) {
  cv::Mat bgr;
  cv::cvtColor(wrap(frame), bgr, cv::COLOR_RGB2BGR);
  if (!cv::imwrite(path.string(), bgr)) throw Error("cannot write image " + path.string());
}

MaskFrame read_mask_frame(const fs::path& path) {
  cv::Mat gray = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (gray.empty()) throw Error("cannot read mask " + path.string());
  MaskFrame out(gray.rows, gray.cols);
  for (int y = 0; y < gray.rows; ++y) {
    const auto* row = gray.ptr<std::uint8_t>(y);
    for (int x = 0; x < gray.cols; ++x) out(y, x) = row[x] > 0 ? 1 : 0;
  }
  return out;
}

void write_mask_frame(const MaskFrame& frame, const fs::path& path) {
  cv::Mat gray(static_cast<int>(frame.rows()), static_cast<int>(frame.cols()), CV_8UC1);
  for (int y = 0; y < gray.rows; ++y) {
    auto* row = gray.ptr<std::uint8_t>(y);
    for (int x = 0; x < gray.cols; ++x) row[x] = frame(y, x) ? 255 : 0;
  }
  // Bilevel PNG keeps the files small and lossless.
  const std::vector<int> params{cv::IMWRITE_PNG_BILEVEL, 1};
  if (!cv::imwrite(path.string(), gray, params)) throw Error("cannot write mask " + path.string());
}

std::vector<RgbFrame> read_frame_dir(const fs::path& dir) {
  std::vector<RgbFrame> frames;
  for (const auto& p : list_images(dir)) frames.push_back(read_rgb(p));
  return frames;
}

void write_frame_dir(const std::vector<RgbFrame>& frames, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_rgb(frames[i], dir / frame_filename(static_cast<int>(i)));
  }
}

std::vector<MaskFrame> read_mask_dir(const fs::path& dir) {
  std::vector<MaskFrame> frames;
  for (const auto& p : list_images(dir)) frames.push_back(read_mask_frame(p));
  return frames;
}

void write_mask_dir(const std::vector<MaskFrame>& frames, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_mask_frame(frames[i], dir / frame_filename(static_cast<int>(i)));
  }
}

RgbFrame resize_bilinear(const RgbFrame& frame, int width, int height) {
  if (frame.width() == width && frame.height() == height) return frame;
  cv::Mat out;
  cv::resize(wrap(frame), out, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  return from_rgb_mat(out);
}

MaskFrame resize_mask_nearest(const MaskFrame& frame, int width, int height) {
  if (frame.cols() == width && frame.rows() == height) return frame;
  cv::Mat src(static_cast<int>(frame.rows()), static_cast<int>(frame.cols()), CV_8UC1,
              const_cast<std::uint8_t*>(frame.data()));
  cv::Mat out;
  cv::resize(src, out, cv::Size(width, height), 0, 0, cv::INTER_NEAREST);
  MaskFrame result(height, width);
  for (int y = 0; y < height; ++y) {
    const auto* row = out.ptr<std::uint8_t>(y);
    for (int x = 0; x < width; ++x) result(y, x) = row[x] > 0 ? 1 : 0;
  }
  return result;
}

Plane<std::uint8_t> to_gray(const RgbFrame& frame) {
  cv::Mat gray;
  cv::cvtColor(wrap(frame), gray, cv::COLOR_RGB2GRAY);
  Plane<std::uint8_t> out(gray.rows, gray.cols);
  for (int y = 0; y < gray.rows; ++y) {
    std::copy_n(gray.ptr<std::uint8_t>(y), gray.cols, out.row(y).data());
  }
  return out;
}

}  // namespace vibench
