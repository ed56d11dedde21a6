#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace volmark {

struct Dims3 {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;

  constexpr std::size_t count() const noexcept { return x * y * z; }
  constexpr bool operator==(const Dims3&) const = default;
};

struct Index3 {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;

  constexpr bool operator==(const Index3&) const = default;
};

// Dense 3D array in x-fastest raster order (x, then y, then z).
template <typename Scalar>
class Grid3 {
 public:
  using value_type = Scalar;

  Grid3() = default;
  explicit Grid3(Dims3 dims, Scalar fill = Scalar{}) : dims_(dims), values_(dims.count(), fill) {}
  Grid3(Dims3 dims, std::vector<Scalar> values) : dims_(dims), values_(std::move(values)) {}

  const Dims3& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const noexcept {
    return (z * dims_.y + y) * dims_.x + x;
  }

  Scalar& operator()(std::size_t x, std::size_t y, std::size_t z) noexcept {
    return values_[index(x, y, z)];
  }
  const Scalar& operator()(std::size_t x, std::size_t y, std::size_t z) const noexcept {
    return values_[index(x, y, z)];
  }

  Scalar& operator[](std::size_t i) noexcept { return values_[i]; }
  const Scalar& operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<Scalar> values() noexcept { return values_; }
  std::span<const Scalar> values() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool operator==(const Grid3&) const = default;

 private:
  Dims3 dims_{};
  std::vector<Scalar> values_;
};

template <typename To, typename From>
Grid3<To> cast(const Grid3<From>& g) {
  Grid3<To> out(g.dims());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = static_cast<To>(g[i]);
  return out;
}

}  // namespace volmark
