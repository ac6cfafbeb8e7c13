#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace inexact {

/// Raised when an arithmetic result or an input contains NaN or Inf.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on mismatched dimensions; always a caller bug.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Dense real vector whose entries are finite.
 *
 * Construction from external data and every public arithmetic operation
 * verify finiteness and throw NonFiniteError otherwise. Mutable element
 * access is provided for solvers that update in place; they are expected
 * to call require_finite() on results they hand back.
 */
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double value = 0.0);
  Vector(std::initializer_list<double> values);
  explicit Vector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> span() const { return values_; }
  std::span<double> span() { return values_; }
  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }
  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }

  const std::vector<double>& values() const { return values_; }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double scale);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> values_;
};

bool all_finite(std::span<const double> values);
void require_finite(std::span<const double> values, const char* what);
void require_same_size(std::size_t a, std::size_t b, const char* what);

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(Vector a);
Vector operator*(double s, Vector a);
Vector operator*(Vector a, double s);
Vector operator/(Vector a, double s);

// Reductions sum strictly left to right.
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double norm_squared(std::span<const double> a);
double norm1(std::span<const double> a);
double norm_inf(std::span<const double> a);

inline double dot(const Vector& a, const Vector& b) { return dot(a.span(), b.span()); }
inline double norm(const Vector& a) { return norm(a.span()); }
inline double norm_squared(const Vector& a) { return norm_squared(a.span()); }
inline double norm1(const Vector& a) { return norm1(a.span()); }
inline double norm_inf(const Vector& a) { return norm_inf(a.span()); }

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

/// Concatenation and splitting, used for stacked variables.
Vector concat(const Vector& a, const Vector& b);
Vector slice(const Vector& v, std::size_t offset, std::size_t count);

/// Abstract linear map R^cols -> R^rows with its adjoint.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  /// out = A x; out has length rows().
  virtual void apply(std::span<const double> x, std::span<double> out) const = 0;
  /// out = A^T y; out has length cols().
  virtual void apply_adjoint(std::span<const double> y, std::span<double> out) const = 0;
};

Vector apply(const LinearOperator& op, const Vector& x);
Vector apply_adjoint(const LinearOperator& op, const Vector& y);

/**
 * Row-major dense matrix. A transposed copy is kept so that both A x and
 * A^T y run as column sweeps; every output entry is still accumulated in
 * index order, so results do not depend on the storage choice.
 */
class DenseMatrix final : public LinearOperator {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const Vector& d);

  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row_major() const { return data_; }

  void apply(std::span<const double> x, std::span<double> out) const override;
  void apply_adjoint(std::span<const double> y, std::span<double> out) const override;

  DenseMatrix transposed() const;

 private:
  void build_transpose();

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;        // row-major A
  std::vector<double> transposed_;  // row-major A^T
};

/// Exact dense product A x.
Vector matvec(const DenseMatrix& a, const Vector& x);

/**
 * Largest singular value estimate via power iteration on A^T A, multiplied
 * by a 1.01 safety factor. Returns 0 for an all-zero operator.
 */
double operator_norm(const LinearOperator& a, int iters = 1000, double tol = 1e-12);

}  // namespace inexact
