#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace kinrel {

/// Largest local system dimension: 4 stages x 3 conserved components.
inline constexpr int kMaxLocalDim = 12;

/// Fixed-capacity dense square matrix, row-major, dimension known at runtime.
/// Sized for the tiny per-point systems of the solver; never heap-allocates.
template <typename T, int Cap = kMaxLocalDim>
class SquareMat {
  static_assert(Cap >= 1);

 public:
  SquareMat() = default;
  explicit SquareMat(int n) : n_(n) {
    if (n < 0 || n > Cap) throw std::length_error("SquareMat: dimension exceeds capacity");
  }

  static SquareMat identity(int n) {
    SquareMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int dim() const { return n_; }

  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  SquareMat operator*(const SquareMat& o) const {
    SquareMat r(n_);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const T aik = (*this)(i, k);
        for (int j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

  SquareMat& operator+=(const SquareMat& o) {
    for (int i = 0; i < n_ * n_; ++i) a_[i] += o.a_[i];
    return *this;
  }

  SquareMat& operator*=(T s) {
    for (int i = 0; i < n_ * n_; ++i) a_[i] *= s;
    return *this;
  }

  void matvec(std::span<const T> x, std::span<T> y) const {
    for (int i = 0; i < n_; ++i) {
      T acc{};
      for (int j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
  }

 private:
  int n_ = 0;
  std::array<T, static_cast<std::size_t>(Cap) * Cap> a_{};
};

namespace detail {
inline double abs_of(double x) { return std::abs(x); }
inline double abs_of(const std::complex<double>& x) { return std::abs(x); }
}  // namespace detail

/// LU factorization with partial pivoting, kept in place.
template <typename T, int Cap = kMaxLocalDim>
class LuFactor {
 public:
  explicit LuFactor(SquareMat<T, Cap> m) : lu_(std::move(m)) {
    const int n = lu_.dim();
    for (int i = 0; i < n; ++i) piv_[i] = i;
    for (int col = 0; col < n; ++col) {
      int best = col;
      double best_abs = detail::abs_of(lu_(col, col));
      for (int r = col + 1; r < n; ++r) {
        const double v = detail::abs_of(lu_(r, col));
        if (v > best_abs) {
          best = r;
          best_abs = v;
        }
      }
      if (best_abs == 0.0) {
        singular_ = true;
        return;
      }
      if (best != col) {
        std::swap(piv_[col], piv_[best]);
        for (int j = 0; j < n; ++j) std::swap(lu_(col, j), lu_(best, j));
      }
      const T inv_pivot = T(1) / lu_(col, col);
      for (int r = col + 1; r < n; ++r) {
        const T f = lu_(r, col) * inv_pivot;
        lu_(r, col) = f;
        for (int j = col + 1; j < n; ++j) lu_(r, j) -= f * lu_(col, j);
      }
    }
  }

  bool singular() const { return singular_; }

  /// Solves A x = b; b is permuted and overwritten with the solution.
  void solve(std::span<T> b) const {
    const int n = lu_.dim();
    std::array<T, Cap> y;
    for (int i = 0; i < n; ++i) y[i] = b[piv_[i]];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) y[i] -= lu_(i, j) * y[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) y[i] -= lu_(i, j) * y[j];
      y[i] /= lu_(i, i);
    }
    for (int i = 0; i < n; ++i) b[i] = y[i];
  }

 private:
  SquareMat<T, Cap> lu_;
  std::array<int, Cap> piv_{};
  bool singular_ = false;
};

/// Inverse through LU; throws on singular input.
template <typename T, int Cap>
SquareMat<T, Cap> inverse(const SquareMat<T, Cap>& m) {
  const int n = m.dim();
  LuFactor<T, Cap> lu(m);
  if (lu.singular()) throw std::domain_error("inverse: singular matrix");
  SquareMat<T, Cap> inv(n);
  std::array<T, Cap> col;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) col[i] = (i == j) ? T(1) : T(0);
    lu.solve(std::span<T>(col.data(), n));
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

}  // namespace kinrel
