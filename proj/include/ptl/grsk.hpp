#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ptl/numerics.hpp"
#include "ptl/rational.hpp"

namespace ptl {

// 1-based lattice cell.
struct Cell {
  int row = 1;
  int col = 1;
  auto operator<=>(const Cell&) const = default;
};

// Downward-closed (Young-diagram shaped) set of cells, stored as row lengths.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<int> row_lengths);

  static IndexSet rectangle(int rows, int cols);
  // {(i,j) : i + j <= size + 1}
  static IndexSet staircase(int size);

  int rows() const { return static_cast<int>(lengths_.size()); }
  int row_length(int i) const;
  int col_length(int j) const;
  std::span<const int> row_lengths() const { return lengths_; }
  bool empty() const { return lengths_.empty(); }
  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.back(); }
  bool contains(int i, int j) const;
  bool contains(Cell c) const { return contains(c.row, c.col); }
  std::size_t offset(int i, int j) const;

  std::vector<Cell> cells() const;
  bool is_border(int i, int j) const;
  bool is_outer(int i, int j) const;
  std::vector<Cell> outer_indices() const;
  IndexSet interior() const;  // I minus its outer indices
  IndexSet transposed() const;

  bool operator==(const IndexSet& other) const { return lengths_ == other.lengths_; }

 private:
  std::vector<int> lengths_;
  std::vector<std::size_t> offsets_;
};

std::vector<Cell> outer_indices(const IndexSet& s);

template <class T>
class PolygonalArray {
 public:
  using value_type = T;

  PolygonalArray() = default;
  PolygonalArray(IndexSet shape, std::vector<T> entries);
  PolygonalArray(IndexSet shape, const T& fill);

  const IndexSet& shape() const { return shape_; }
  std::span<const T> entries() const { return entries_; }

  const T& operator()(int i, int j) const;
  T& operator()(int i, int j);
  const T& at(Cell c) const { return (*this)(c.row, c.col); }
  // zero outside the index set
  T value_or_zero(int i, int j) const;

  bool operator==(const PolygonalArray& other) const {
    return shape_ == other.shape_ && entries_ == other.entries_;
  }

 private:
  IndexSet shape_;
  std::vector<T> entries_;
};

template <class T>
PolygonalArray<T> local_move_a(const PolygonalArray<T>& w, int i, int j);
template <class T>
PolygonalArray<T> local_move_b(const PolygonalArray<T>& w, int i, int j);
template <class T>
PolygonalArray<T> rho(const PolygonalArray<T>& w, int i, int j);

using OuterOrder = std::function<void(std::vector<Cell>&)>;

template <class T>
PolygonalArray<T> grsk(const PolygonalArray<T>& w, const OuterOrder& order = {});

template <class T>
T energy(const PolygonalArray<T>& t);
template <class T>
T diagonal_product(const PolygonalArray<T>& t, int k);
template <class T>
PolygonalArray<T> transpose(const PolygonalArray<T>& w);

// d log t / d log w by central differences; rows index outputs, columns
// inputs, both in the row-major cell order of the shape.
Matrix<double> grsk_log_jacobian(const PolygonalArray<double>& w, double step = 1e-6);
// Same for a symmetric array, restricted to the coordinates with i <= j.
Matrix<double> grsk_symmetric_log_jacobian(const PolygonalArray<double>& w, double step = 1e-6);

}  // namespace ptl
