#include "bt/matrix.hpp"

#include <stdexcept>

namespace bt {

Matrix::Matrix(const FieldModel& m, std::size_t rows, std::size_t cols)
    : model_(&m), rows_(rows), cols_(cols), a_(rows * cols, m.zero()) {}

Matrix Matrix::identity(const FieldModel& m, std::size_t n) {
  Matrix r(m, n, n);
  for (std::size_t i = 0; i < n; ++i) r(i, i) = m.one();
  return r;
}

Matrix Matrix::diagonal(const FieldModel& m, const std::vector<FieldElement>& d) {
  Matrix r(m, d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) r(i, i) = d[i];
  return r;
}

Matrix Matrix::pi_diagonal(const FieldModel& m, const std::vector<long>& e) {
  Matrix r(m, e.size(), e.size());
  for (std::size_t i = 0; i < e.size(); ++i) r(i, i) = m.pi_pow(e[i]);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(*model_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::scaled(const FieldElement& s) const {
  Matrix r = *this;
  for (auto& x : r.a_) x = x * s;
  return r;
}

Matrix Matrix::column(std::size_t j) const {
  Matrix r(*model_, rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) r(i, 0) = (*this)(i, j);
  return r;
}

Matrix Matrix::hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) throw std::invalid_argument("hconcat: row count mismatch");
  Matrix r(*a.model_, a.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) r(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols_; ++j) r(i, a.cols_ + j) = b(i, j);
  }
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  if (a.model_ != b.model_) throw std::invalid_argument("matrix product: model mismatch");
  Matrix r(*a.model_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const auto& x = a(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  Matrix r = a;
  for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += b.a_[k];
  return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.model_ == b.model_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of a non-square matrix");
  std::size_t n = rows_;
  Matrix a = *this, inv = identity(*model_, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).is_zero()) ++piv;
    if (piv == n) throw std::domain_error("singular matrix");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    FieldElement s = a(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * s;
      inv(col, j) = inv(col, j) * s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      FieldElement f = a(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        if (!a(col, j).is_zero()) a(r, j) -= f * a(col, j);
        if (!inv(col, j).is_zero()) inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

FieldElement Matrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of a non-square matrix");
  std::size_t n = rows_;
  Matrix a = *this;
  FieldElement d = model_->one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col).is_zero()) ++piv;
    if (piv == n) return model_->zero();
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      d = -d;
    }
    d = d * a(col, col);
    FieldElement s = a(col, col).inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a(r, col).is_zero()) continue;
      FieldElement f = a(r, col) * s;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return d;
}

std::size_t Matrix::rank() const {
  Matrix a = *this;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
    std::size_t piv = rank;
    while (piv < rows_ && a(piv, col).is_zero()) ++piv;
    if (piv == rows_) continue;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(a(piv, j), a(rank, j));
    FieldElement s = a(rank, col).inverse();
    for (std::size_t r = rank + 1; r < rows_; ++r) {
      if (a(r, col).is_zero()) continue;
      FieldElement f = a(r, col) * s;
      for (std::size_t j = col; j < cols_; ++j) a(r, j) -= f * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

long Matrix::min_valuation() const {
  long m = kInfiniteValuation;
  for (const auto& x : a_) m = std::min(m, x.valuation());
  return m;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
  std::vector<std::vector<std::string>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i].push_back((*this)(i, j).to_string());
  return out;
}

} // namespace bt
