#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sheafcoh/integer.hpp"

namespace sheafcoh {

using IntVector = std::vector<Integer>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
  static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows);
  static IntMatrix diagonal(std::span<const Integer> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Integer> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Integer> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  IntVector column(std::size_t j) const;
  IntVector row_vector(std::size_t i) const { auto r = row(i); return {r.begin(), r.end()}; }

  void set_column(std::size_t j, std::span<const Integer> v);
  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);

  IntMatrix transpose() const;
  bool is_zero() const;
  bool is_identity() const;

  IntMatrix select_rows(std::span<const std::size_t> idx) const;
  IntMatrix select_cols(std::span<const std::size_t> idx) const;
  IntMatrix row_range(std::size_t begin, std::size_t end) const;
  IntMatrix col_range(std::size_t begin, std::size_t end) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntVector operator*(const IntMatrix& a, std::span<const Integer> x);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  IntMatrix scaled(const Integer& s) const;
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  std::string to_string() const;
  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b);
/// Kronecker product; index (i, k) of a (x) b maps to i * b.rows() + k.
IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b);

bool is_zero_vector(std::span<const Integer> v);
IntVector unit_vector(std::size_t n, std::size_t i);

}  // namespace sheafcoh
