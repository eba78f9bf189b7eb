#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gesture {

/// Single-channel 8-bit image stored row-major. For depth frames a value of 0
/// means the sensor returned nothing for that pixel.
class Frame {
 public:
  Frame() = default;
  Frame(int rows, int cols, std::uint8_t fill = 0);
  Frame(int rows, int cols, std::vector<std::uint8_t> data);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t operator()(int r, int c) const { return data_[index(r, c)]; }
  std::uint8_t& operator()(int r, int c) { return data_[index(r, c)]; }

  std::span<const std::uint8_t> pixels() const noexcept { return data_; }
  std::span<std::uint8_t> pixels() noexcept { return data_; }

  bool same_shape(const Frame& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> data_;
};

enum class Modality { Depth, Gray };

struct Video {
  std::vector<Frame> frames;
  Modality modality = Modality::Depth;
  double fps = 10.0;

  std::size_t size() const noexcept { return frames.size(); }
  int rows() const noexcept { return frames.empty() ? 0 : frames.front().rows(); }
  int cols() const noexcept { return frames.empty() ? 0 : frames.front().cols(); }

  friend bool operator==(const Video&, const Video&) = default;
};

// Throws IntegrityError unless every frame has the same shape.
void check_uniform_shape(const Video& video);

// Frames of `video` at the given (strictly increasing) indices.
Video select_frames(const Video& video, std::span<const int> indices);

}  // namespace gesture
