#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bt/field.hpp"

namespace bt {

/// Dense row-major matrix over one FieldModel.
class Matrix {
public:
  Matrix() = default;
  Matrix(const FieldModel& m, std::size_t rows, std::size_t cols);

  static Matrix identity(const FieldModel& m, std::size_t n);
  static Matrix diagonal(const FieldModel& m, const std::vector<FieldElement>& d);
  /// diag(pi^{e_0}, .., pi^{e_{n-1}}).
  static Matrix pi_diagonal(const FieldModel& m, const std::vector<long>& e);

  const FieldModel& model() const { return *model_; }
  const FieldModel* model_ptr() const { return model_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  FieldElement& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const FieldElement& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix transpose() const;
  Matrix scaled(const FieldElement& s) const;
  Matrix column(std::size_t j) const;
  /// Columns of a and b side by side.
  static Matrix hconcat(const Matrix& a, const Matrix& b);
  /// Throws std::domain_error when singular.
  Matrix inverse() const;
  FieldElement det() const;
  std::size_t rank() const;
  /// Minimum entry valuation (kInfiniteValuation for the zero matrix).
  long min_valuation() const;
  bool is_integral() const { return min_valuation() >= 0; }

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

  /// Row-major entries in the element text syntax.
  std::vector<std::vector<std::string>> to_strings() const;

private:
  const FieldModel* model_ = nullptr;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<FieldElement> a_;
};

} // namespace bt
