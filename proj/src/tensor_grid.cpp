#include "acm/tensor_grid.hpp"

#include <algorithm>
#include <cmath>

#include "acm/error.hpp"

namespace acm {

namespace {

bool is_frame(Slot s) { return s == Slot::frame_lower || s == Slot::frame_upper; }
bool is_full(Slot s) { return s == Slot::full_lower || s == Slot::full_upper; }

}  // namespace

const char* slot_name(Slot s) {
  switch (s) {
    case Slot::frame_lower: return "frame_lower";
    case Slot::frame_upper: return "frame_upper";
    case Slot::full_lower: return "full_lower";
    case Slot::full_upper: return "full_upper";
    case Slot::coord_lower: return "coord_lower";
    case Slot::coord_upper: return "coord_upper";
  }
  return "?";
}

TensorGrid::TensorGrid(int dim, std::vector<Slot> slots) : dim_(dim), slots_(std::move(slots)) {
  std::size_t total = 1;
  for (int s = 0; s < rank(); ++s) total *= static_cast<std::size_t>(extent(s));
  data_.assign(total, 0.0);
}

int TensorGrid::extent(int slot) const { return is_frame(slots_[slot]) ? dim_ - 1 : dim_; }

std::size_t TensorGrid::offset(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw Error("tensor index count does not match rank");
  std::size_t flat = 0;
  for (int s = 0; s < rank(); ++s) {
    const int e = extent(s);
    if (idx[s] < 0 || idx[s] >= e) throw Error("tensor index out of range");
    flat = flat * static_cast<std::size_t>(e) + static_cast<std::size_t>(idx[s]);
  }
  return flat;
}

std::vector<int> TensorGrid::unravel(std::size_t flat) const {
  std::vector<int> idx(slots_.size());
  for (int s = rank() - 1; s >= 0; --s) {
    const auto e = static_cast<std::size_t>(extent(s));
    idx[s] = static_cast<int>(flat % e);
    flat /= e;
  }
  return idx;
}

double TensorGrid::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool TensorGrid::is_admissible(double tol) const {
  for (std::size_t k = 0; k < data_.size(); ++k) {
    const auto idx = unravel(k);
    for (int s = 0; s < rank(); ++s) {
      if (is_full(slots_[s]) && idx[s] == dim_ - 1 && std::abs(data_[k]) > tol) return false;
    }
  }
  return true;
}

double max_abs_diff(const TensorGrid& a, const TensorGrid& b) {
  if (a.slots() != b.slots() || a.dim() != b.dim()) throw Error("tensor grids of different shape");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

}  // namespace acm
