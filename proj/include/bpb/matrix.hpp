// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bpb/errors.hpp"
#include "bpb/scalar.hpp"

namespace bpb {

// Dense row-major matrix. Rows index domain atoms, columns codomain atoms.
template <Scalar S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const S& fill = S(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<S>>& rows) {
    if (rows.empty()) throw DomainError("matrix needs at least one row");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw DomainError("ragged matrix: row " + std::to_string(i) + " has " +
                          std::to_string(rows[i].size()) + " entries, expected " + std::to_string(m.cols_));
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const S> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<S> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  std::vector<S> column(std::size_t j) const {
    std::vector<S> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <Scalar To, Scalar From>
Matrix<To> scalar_cast(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = scalar_cast<To>(m(i, j));
  return out;
}

}  // namespace bpb
