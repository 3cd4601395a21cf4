#include "ptl/grsk.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ptl {

namespace {

std::string cell_text(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

IndexSet::IndexSet(std::vector<int> row_lengths) : lengths_(std::move(row_lengths)) {
  offsets_.assign(1, 0);
  for (std::size_t r = 0; r < lengths_.size(); ++r) {
    if (lengths_[r] <= 0) throw std::invalid_argument("IndexSet: row lengths must be positive");
    if (r > 0 && lengths_[r] > lengths_[r - 1]) {
      throw std::invalid_argument("IndexSet: row lengths must be non-increasing");
    }
    offsets_.push_back(offsets_.back() + static_cast<std::size_t>(lengths_[r]));
  }
}

IndexSet IndexSet::rectangle(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("IndexSet::rectangle: empty side");
  return IndexSet(std::vector<int>(static_cast<std::size_t>(rows), cols));
}

IndexSet IndexSet::staircase(int size) {
  if (size < 1) throw std::invalid_argument("IndexSet::staircase: size must be positive");
  std::vector<int> len;
  for (int i = 1; i <= size; ++i) len.push_back(size + 1 - i);
  return IndexSet(std::move(len));
}

int IndexSet::row_length(int i) const {
  if (i < 1 || i > rows()) return 0;
  return lengths_[static_cast<std::size_t>(i - 1)];
}

int IndexSet::col_length(int j) const {
  int n = 0;
  while (n < rows() && lengths_[static_cast<std::size_t>(n)] >= j) ++n;
  return n;
}

bool IndexSet::contains(int i, int j) const { return j >= 1 && j <= row_length(i); }

std::size_t IndexSet::offset(int i, int j) const {
  if (!contains(i, j)) throw std::out_of_range("cell " + cell_text(i, j) + " not in index set");
  return offsets_[static_cast<std::size_t>(i - 1)] + static_cast<std::size_t>(j - 1);
}

std::vector<Cell> IndexSet::cells() const {
  std::vector<Cell> out;
  out.reserve(size());
  for (int i = 1; i <= rows(); ++i)
    for (int j = 1; j <= row_length(i); ++j) out.push_back({i, j});
  return out;
}

bool IndexSet::is_border(int i, int j) const { return contains(i, j) && !contains(i + 1, j + 1); }

bool IndexSet::is_outer(int i, int j) const {
  return contains(i, j) && !contains(i, j + 1) && !contains(i + 1, j);
}

std::vector<Cell> IndexSet::outer_indices() const {
  std::vector<Cell> out;
  for (int i = 1; i <= rows(); ++i) {
    int j = row_length(i);
    if (is_outer(i, j)) out.push_back({i, j});
  }
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (std::size_t b = a + 1; b < out.size(); ++b) {
      int da = out[a].col - out[a].row, db = out[b].col - out[b].row;
      if (std::abs(da - db) < 2) throw std::logic_error("outer indices on adjacent diagonals");
    }
  }
  return out;
}

IndexSet IndexSet::interior() const {
  std::vector<int> len(lengths_);
  for (Cell c : outer_indices()) --len[static_cast<std::size_t>(c.row - 1)];
  while (!len.empty() && len.back() == 0) len.pop_back();
  return IndexSet(std::move(len));
}

IndexSet IndexSet::transposed() const {
  std::vector<int> len;
  for (int j = 1; j <= row_length(1); ++j) len.push_back(col_length(j));
  return IndexSet(std::move(len));
}

std::vector<Cell> outer_indices(const IndexSet& s) { return s.outer_indices(); }

template <class T>
PolygonalArray<T>::PolygonalArray(IndexSet shape, std::vector<T> entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
  if (entries_.size() != shape_.size()) {
    throw std::invalid_argument("PolygonalArray: entry count does not match index set");
  }
  for (const T& v : entries_) {
    if (!(v > T(0))) throw std::invalid_argument("PolygonalArray: entries must be positive");
  }
}

template <class T>
PolygonalArray<T>::PolygonalArray(IndexSet shape, const T& fill)
    : PolygonalArray(shape, std::vector<T>(shape.size(), fill)) {}

template <class T>
const T& PolygonalArray<T>::operator()(int i, int j) const {
  return entries_[shape_.offset(i, j)];
}

template <class T>
T& PolygonalArray<T>::operator()(int i, int j) {
  return entries_[shape_.offset(i, j)];
}

template <class T>
T PolygonalArray<T>::value_or_zero(int i, int j) const {
  return shape_.contains(i, j) ? (*this)(i, j) : T(0);
}

namespace {

template <class T>
T incoming(const PolygonalArray<T>& w, int i, int j) {
  if (i == 1 && j == 1) return T(1);
  return w.value_or_zero(i - 1, j) + w.value_or_zero(i, j - 1);
}

template <class T>
void apply_a(PolygonalArray<T>& w, int i, int j) {
  T f = incoming(w, i, j);
  w(i, j) *= f;
}

template <class T>
void apply_b(PolygonalArray<T>& w, int i, int j) {
  const T& down = w(i + 1, j);
  const T& right = w(i, j + 1);
  T value = incoming(w, i, j) * down * right / (w(i, j) * (down + right));
  w(i, j) = value;
}

template <class T>
void apply_rho(PolygonalArray<T>& w, int i, int j) {
  apply_a(w, i, j);
  for (int k = 1; i - k >= 1 && j - k >= 1; ++k) apply_b(w, i - k, j - k);
}

void require_cell(const IndexSet& s, int i, int j) {
  if (!s.contains(i, j)) throw std::out_of_range("cell " + cell_text(i, j) + " not in index set");
}

}  // namespace

template <class T>
PolygonalArray<T> local_move_a(const PolygonalArray<T>& w, int i, int j) {
  require_cell(w.shape(), i, j);
  PolygonalArray<T> out = w;
  apply_a(out, i, j);
  return out;
}

template <class T>
PolygonalArray<T> local_move_b(const PolygonalArray<T>& w, int i, int j) {
  require_cell(w.shape(), i, j);
  if (w.shape().is_border(i, j)) {
    throw std::invalid_argument("local_move_b: " + cell_text(i, j) + " is a border index");
  }
  PolygonalArray<T> out = w;
  apply_b(out, i, j);
  return out;
}

template <class T>
PolygonalArray<T> rho(const PolygonalArray<T>& w, int i, int j) {
  require_cell(w.shape(), i, j);
  PolygonalArray<T> out = w;
  apply_rho(out, i, j);
  return out;
}

template <class T>
PolygonalArray<T> grsk(const PolygonalArray<T>& w, const OuterOrder& order) {
  std::vector<IndexSet> chain{w.shape()};
  while (!chain.back().empty()) chain.push_back(chain.back().interior());
  PolygonalArray<T> t = w;
  // innermost first; cells outside the current set still hold their inputs
  for (auto it = chain.rbegin() + 1; it != chain.rend(); ++it) {
    std::vector<Cell> outer = it->outer_indices();
    if (order) order(outer);
    for (Cell c : outer) apply_rho(t, c.row, c.col);
  }
  return t;
}

template <class T>
T energy(const PolygonalArray<T>& t) {
  T e = T(1) / t(1, 1);
  for (Cell c : t.shape().cells()) {
    if (c.row == 1 && c.col == 1) continue;
    e += (t.value_or_zero(c.row - 1, c.col) + t.value_or_zero(c.row, c.col - 1)) / t.at(c);
  }
  return e;
}

template <class T>
T diagonal_product(const PolygonalArray<T>& t, int k) {
  T p = T(1);
  for (Cell c : t.shape().cells())
    if (c.col - c.row == k) p *= t.at(c);
  return p;
}

template <class T>
PolygonalArray<T> transpose(const PolygonalArray<T>& w) {
  IndexSet s = w.shape().transposed();
  std::vector<T> entries;
  entries.reserve(s.size());
  for (Cell c : s.cells()) entries.push_back(w(c.col, c.row));
  return PolygonalArray<T>(std::move(s), std::move(entries));
}

Matrix<double> grsk_log_jacobian(const PolygonalArray<double>& w, double step) {
  const std::vector<Cell> cells = w.shape().cells();
  const std::size_t n = cells.size();
  Matrix<double> jac(n, n);
  std::vector<double> base(w.entries().begin(), w.entries().end());
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> up = base, down = base;
    up[c] *= std::exp(step);
    down[c] *= std::exp(-step);
    PolygonalArray<double> tu = grsk(PolygonalArray<double>(w.shape(), up));
    PolygonalArray<double> td = grsk(PolygonalArray<double>(w.shape(), down));
    for (std::size_t r = 0; r < n; ++r) {
      jac(r, c) = (std::log(tu.entries()[r]) - std::log(td.entries()[r])) / (2.0 * step);
    }
  }
  return jac;
}

Matrix<double> grsk_symmetric_log_jacobian(const PolygonalArray<double>& w, double step) {
  if (!(w.shape() == w.shape().transposed())) {
    throw std::invalid_argument("grsk_symmetric_log_jacobian: shape is not symmetric");
  }
  std::vector<Cell> upper;
  for (Cell c : w.shape().cells())
    if (c.row <= c.col) upper.push_back(c);
  const std::size_t n = upper.size();
  Matrix<double> jac(n, n);
  auto perturbed = [&](Cell c, double s) {
    PolygonalArray<double> v = w;
    v(c.row, c.col) *= std::exp(s);
    if (c.row != c.col) v(c.col, c.row) *= std::exp(s);
    return grsk(v);
  };
  for (std::size_t k = 0; k < n; ++k) {
    PolygonalArray<double> tu = perturbed(upper[k], step);
    PolygonalArray<double> td = perturbed(upper[k], -step);
    for (std::size_t r = 0; r < n; ++r) {
      Cell o = upper[r];
      jac(r, k) = (std::log(tu.at(o)) - std::log(td.at(o))) / (2.0 * step);
    }
  }
  return jac;
}

#define PTL_INSTANTIATE_GRSK(T)                                                  \
  template class PolygonalArray<T>;                                              \
  template PolygonalArray<T> local_move_a(const PolygonalArray<T>&, int, int);   \
  template PolygonalArray<T> local_move_b(const PolygonalArray<T>&, int, int);   \
  template PolygonalArray<T> rho(const PolygonalArray<T>&, int, int);            \
  template PolygonalArray<T> grsk(const PolygonalArray<T>&, const OuterOrder&);  \
  template T energy(const PolygonalArray<T>&);                                   \
  template T diagonal_product(const PolygonalArray<T>&, int);                    \
  template PolygonalArray<T> transpose(const PolygonalArray<T>&);

PTL_INSTANTIATE_GRSK(double)
PTL_INSTANTIATE_GRSK(Rational)

}  // namespace ptl
