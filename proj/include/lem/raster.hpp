#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace lem {

/// Flat cell address within a raster: cell (x,y) lives at y*width + x.
using CellIndex = std::uint32_t;

/// Sentinel for "this cell has no receiver". Maximum representable index,
/// which is never a valid cell address.
inline constexpr CellIndex kNoFlow = std::numeric_limits<CellIndex>::max();

/// Row-major 2D scalar field. The smallest usable raster is 3x3 so that an
/// interior exists.
template <typename T>
class Raster {
 public:
  Raster() = default;

  Raster(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {
    assert(width >= 3 && height >= 3);
  }

  Raster(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    assert(width >= 3 && height >= 3);
    assert(data_.size() == static_cast<std::size_t>(width) * height);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  T& operator[](CellIndex c) {
    assert(c < data_.size());
    return data_[c];
  }
  const T& operator[](CellIndex c) const {
    assert(c < data_.size());
    return data_[c];
  }

  T& at(int x, int y) { return data_[index_of(x, y)]; }
  const T& at(int x, int y) const { return data_[index_of(x, y)]; }

  CellIndex index_of(int x, int y) const {
    assert(0 <= x && x < width_);
    assert(0 <= y && y < height_);
    return static_cast<CellIndex>(y) * width_ + x;
  }

  int x_of(CellIndex c) const { return static_cast<int>(c % width_); }
  int y_of(CellIndex c) const { return static_cast<int>(c / width_); }

  /// True iff the cell lies on the outermost ring of the raster. Perimeter
  /// cells form the fixed base level: they neither erode nor transfer flow.
  bool is_perimeter(CellIndex c) const {
    const int x = x_of(c);
    const int y = y_of(c);
    return x == 0 || x == width_ - 1 || y == 0 || y == height_ - 1;
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  friend bool operator==(const Raster& a, const Raster& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.data_ == b.data_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Free-function form of the addressing rule, usable without a Raster.
inline CellIndex index_of(int x, int y, int width) {
  assert(x >= 0 && x < width);
  assert(y >= 0);
  return static_cast<CellIndex>(y) * width + x;
}

inline bool is_perimeter(CellIndex c, int width, int height) {
  const int x = static_cast<int>(c % width);
  const int y = static_cast<int>(c / width);
  return x == 0 || x == width - 1 || y == 0 || y == height - 1;
}

}  // namespace lem
