#include "gesture/frame.hpp"

#include <string>

#include "gesture/error.hpp"

namespace gesture {

Frame::Frame(int rows, int cols, std::uint8_t fill) {
  if (rows < 1 || cols < 1) {
    throw ArgumentError("frame dimensions must be positive, got " + std::to_string(rows) +
                        "x" + std::to_string(cols));
  }
  rows_ = rows;
  cols_ = cols;
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

Frame::Frame(int rows, int cols, std::vector<std::uint8_t> data) {
  if (rows < 1 || cols < 1) {
    throw ArgumentError("frame dimensions must be positive, got " + std::to_string(rows) +
                        "x" + std::to_string(cols));
  }
  if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw IntegrityError("frame data length " + std::to_string(data.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  rows_ = rows;
  cols_ = cols;
  data_ = std::move(data);
}

void check_uniform_shape(const Video& video) {
  for (std::size_t i = 1; i < video.frames.size(); ++i) {
    if (!video.frames[i].same_shape(video.frames.front())) {
      throw IntegrityError("frame " + std::to_string(i) + " is " +
                           std::to_string(video.frames[i].rows()) + "x" +
                           std::to_string(video.frames[i].cols()) + ", expected " +
                           std::to_string(video.rows()) + "x" + std::to_string(video.cols()));
    }
  }
}

Video select_frames(const Video& video, std::span<const int> indices) {
  Video out;
  out.modality = video.modality;
  out.fps = video.fps;
  out.frames.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= video.frames.size()) {
      throw ArgumentError("frame index " + std::to_string(i) + " out of range");
    }
    out.frames.push_back(video.frames[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace gesture
