#pragma once

#include <cstddef>
#include <vector>

#include "graphnli/error.hpp"

namespace graphnli {

// Fixed-dimension real vector; the embedding and feature type throughout.
using Vec = std::vector<double>;

// Dense row-major matrix, just big enough for the desk-scale models here.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vec data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  // y = M x
  Vec matvec(const Vec& x) const {
    if (x.size() != cols) throw Error(Errc::DimMismatch, "matvec: vector length != cols");
    Vec y(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      const double* row = data.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
      y[r] = acc;
    }
    return y;
  }

  // y = M^T x
  Vec matvec_transposed(const Vec& x) const {
    if (x.size() != rows) throw Error(Errc::DimMismatch, "matvec_transposed: vector length != rows");
    Vec y(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* row = data.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) y[c] += row[c] * x[r];
    }
    return y;
  }

  // M += scale * (a outer b), a has rows entries, b has cols entries.
  void add_outer(const Vec& a, const Vec& b, double scale = 1.0) {
    for (std::size_t r = 0; r < rows; ++r) {
      double s = scale * a[r];
      double* row = data.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) row[c] += s * b[c];
    }
  }

  bool operator==(const Matrix& other) const = default;
};

inline void axpy(Vec& y, const Vec& x, double a) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace graphnli
