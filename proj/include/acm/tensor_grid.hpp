#ifndef ACM_TENSOR_GRID_HPP
#define ACM_TENSOR_GRID_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace acm {

/// Index valence of one tensor slot.
///
/// frame_*: adapted frame indices a = 0..n-2 (e_a / dx^a).
/// full_*:  frame indices extended by the ξ/η slot at position n-1.
/// coord_*: plain coordinate indices i = 0..n-1 (∂_i / dx^i).
enum class Slot { frame_lower, frame_upper, full_lower, full_upper, coord_lower, coord_upper };

const char* slot_name(Slot s);

/// Dense multi-index array of components at one point, row-major in slot order.
class TensorGrid {
 public:
  TensorGrid() = default;
  TensorGrid(int dim, std::vector<Slot> slots);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(slots_.size()); }
  int extent(int slot) const;
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  double& operator()(I... idx) {
    const std::array<int, sizeof...(I)> ix{static_cast<int>(idx)...};
    return data_[offset(ix)];
  }
  template <class... I>
  double operator()(I... idx) const {
    const std::array<int, sizeof...(I)> ix{static_cast<int>(idx)...};
    return data_[offset(ix)];
  }

  double& at(std::span<const int> idx) { return data_[offset(idx)]; }
  double at(std::span<const int> idx) const { return data_[offset(idx)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::vector<int> unravel(std::size_t flat) const;
  double max_abs() const;

  /// True when every component with an index on a ξ/η slot is within `tol` of zero.
  bool is_admissible(double tol = 0.0) const;

 private:
  std::size_t offset(std::span<const int> idx) const;

  int dim_ = 0;
  std::vector<Slot> slots_;
  std::vector<double> data_;
};

/// ‖a − b‖∞; grids must have equal slots.
double max_abs_diff(const TensorGrid& a, const TensorGrid& b);

}  // namespace acm

#endif  // ACM_TENSOR_GRID_HPP
