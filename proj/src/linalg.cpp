#include "inexact/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "inexact/rng.hpp"

namespace inexact {

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_finite(std::span<const double> values, const char* what) {
  if (!all_finite(values)) {
    throw NonFiniteError(std::string("non-finite entry in ") + what);
  }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

Vector::Vector(std::size_t n, double value) : values_(n, value) {
  require_finite(values_, "Vector");
}

Vector::Vector(std::initializer_list<double> values) : values_(values) {
  require_finite(values_, "Vector");
}

Vector::Vector(std::vector<double> values) : values_(std::move(values)) {
  require_finite(values_, "Vector");
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "Vector +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  require_finite(values_, "Vector +=");
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "Vector -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  require_finite(values_, "Vector -=");
  return *this;
}

Vector& Vector::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  require_finite(values_, "Vector *=");
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(Vector a) { return a *= -1.0; }
Vector operator*(double s, Vector a) { return a *= s; }
Vector operator*(Vector a, double s) { return a *= s; }

Vector operator/(Vector a, double s) {
  for (double& v : a) v /= s;
  require_finite(a.span(), "Vector /");
  return a;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm_squared(std::span<const double> a) {
  double sum = 0.0;
  for (double v : a) sum += v * v;
  return sum;
}

double norm(std::span<const double> a) { return std::sqrt(norm_squared(a)); }

double norm1(std::span<const double> a) {
  double sum = 0.0;
  for (double v : a) sum += std::abs(v);
  return sum;
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require_same_size(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vector concat(const Vector& a, const Vector& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return Vector(std::move(out));
}

Vector slice(const Vector& v, std::size_t offset, std::size_t count) {
  if (offset + count > v.size()) throw DimensionError("slice out of range");
  return Vector(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(offset),
                                    v.begin() + static_cast<std::ptrdiff_t>(offset + count)));
}

Vector apply(const LinearOperator& op, const Vector& x) {
  require_same_size(x.size(), op.cols(), "apply");
  Vector out(op.rows());
  op.apply(x.span(), out.span());
  require_finite(out.span(), "apply");
  return out;
}

Vector apply_adjoint(const LinearOperator& op, const Vector& y) {
  require_same_size(y.size(), op.rows(), "apply_adjoint");
  Vector out(op.cols());
  op.apply_adjoint(y.span(), out.span());
  require_finite(out.span(), "apply_adjoint");
  return out;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0), transposed_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require_same_size(data_.size(), rows * cols, "DenseMatrix");
  require_finite(data_, "DenseMatrix");
  build_transpose();
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& r : rows) {
    require_same_size(r.size(), cols_, "DenseMatrix row");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_, "DenseMatrix");
  build_transpose();
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 1.0;
  return DenseMatrix(n, n, std::move(d));
}

DenseMatrix DenseMatrix::diagonal(const Vector& diag) {
  const std::size_t n = diag.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = diag[i];
  return DenseMatrix(n, n, std::move(d));
}

void DenseMatrix::build_transpose() {
  transposed_.assign(rows_ * cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) transposed_[j * rows_ + i] = data_[i * cols_ + j];
}

namespace {

// o[i] += sum_j cols[j][i] * w[j] for j = 0..count-1, accumulated in j order.
// Four columns per pass keep o in registers; the per-entry addition order is
// the same as one column at a time, so results are bit-identical.
void column_sweep(const double* cols, std::size_t stride, std::size_t count, const double* w,
                  double* o, std::size_t len) {
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const double w0 = w[j], w1 = w[j + 1], w2 = w[j + 2], w3 = w[j + 3];
    const double* c0 = cols + j * stride;
    const double* c1 = c0 + stride;
    const double* c2 = c1 + stride;
    const double* c3 = c2 + stride;
    for (std::size_t i = 0; i < len; ++i) {
      double acc = o[i];
      acc += c0[i] * w0;
      acc += c1[i] * w1;
      acc += c2[i] * w2;
      acc += c3[i] * w3;
      o[i] = acc;
    }
  }
  for (; j < count; ++j) {
    const double wj = w[j];
    const double* c = cols + j * stride;
    for (std::size_t i = 0; i < len; ++i) o[i] += c[i] * wj;
  }
}

}  // namespace

// out[i] = sum_j A(i,j) x[j], accumulated for j = 0, 1, ... in order.
void DenseMatrix::apply(std::span<const double> x, std::span<double> out) const {
  require_same_size(x.size(), cols_, "DenseMatrix::apply");
  require_same_size(out.size(), rows_, "DenseMatrix::apply output");
  std::fill(out.begin(), out.end(), 0.0);
  column_sweep(transposed_.data(), rows_, cols_, x.data(), out.data(), rows_);
}

// out[j] = sum_i A(i,j) y[i], accumulated for i = 0, 1, ... in order.
void DenseMatrix::apply_adjoint(std::span<const double> y, std::span<double> out) const {
  require_same_size(y.size(), rows_, "DenseMatrix::apply_adjoint");
  require_same_size(out.size(), cols_, "DenseMatrix::apply_adjoint output");
  std::fill(out.begin(), out.end(), 0.0);
  column_sweep(data_.data(), cols_, rows_, y.data(), out.data(), cols_);
}

DenseMatrix DenseMatrix::transposed() const { return DenseMatrix(cols_, rows_, transposed_); }

Vector matvec(const DenseMatrix& a, const Vector& x) { return apply(a, x); }

double operator_norm(const LinearOperator& a, int iters, double tol) {
  if (iters < 1) throw std::invalid_argument("operator_norm: iters must be >= 1");
  const std::size_t n = a.cols();
  if (n == 0 || a.rows() == 0) return 0.0;

  // Fixed-seed start so the estimate is reproducible.
  Rng rng(0x9e3779b97f4a7c15ULL);
  Vector v = rng.unit_vector(n);
  Vector av(a.rows());
  Vector w(n);
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    a.apply(v.span(), av.span());
    const double current = norm(av);  // Rayleigh quotient sqrt(v^T A^T A v) <= sigma_max
    a.apply_adjoint(av.span(), w.span());
    const double wn = norm(w);
    if (wn == 0.0) {
      if (current == 0.0 && estimate == 0.0) {
        // Start vector may lie in the null space; retry with a fresh direction once.
        if (it == 0) {
          v = rng.unit_vector(n);
          continue;
        }
        return 0.0;
      }
      estimate = std::max(estimate, current);
      break;
    }
    for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / wn;
    const bool converged = std::abs(current - estimate) <= tol * std::max(current, 1e-300);
    estimate = std::max(estimate, current);
    if (converged && it > 2) break;
  }
  return 1.01 * estimate;
}

}  // namespace inexact
