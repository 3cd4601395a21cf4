#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace ptl {

template <class T>
inline constexpr bool kHasMagnitude = std::is_floating_point_v<T>;
template <class T>
inline constexpr bool kHasMagnitude<std::complex<T>> = true;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

// Gaussian elimination; partial pivoting on magnitude for real and complex types,
// first nonzero pivot for exact types.
template <class T>
T determinant(Matrix<T> a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = a.rows();
  T det = T(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    if constexpr (kHasMagnitude<T>) {
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    } else {
      while (piv < n && a(piv, k) == T(0)) ++piv;
      if (piv == n) return T(0);
    }
    if (a(piv, k) == T(0)) return T(0);
    if (piv != k) {
      a.swap_rows(piv, k);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == T(0)) continue;
      T f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points (cached per n).
const GaussRule& gauss_legendre(int n);

// Compensated (Neumaier) accumulator.
template <class T>
class CompensatedSum {
 public:
  void add(const T& v) {
    T t = sum_ + v;
    if constexpr (std::is_floating_point_v<T>) {
      if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
      else comp_ += (v - t) + sum_;
    } else {
      comp_ += (sum_ - t) + v;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{}, comp_{};
};

}  // namespace ptl
