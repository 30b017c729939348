#pragma once

#include <optional>
#include <vector>

#include "tqt/errors.hpp"
#include "tqt/matrix.hpp"

namespace tqt {

template <class T>
struct Echelon {
  Matrix<T> rref;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row, increasing
};

/// Reduced row echelon form. Exact mode pivots on the first nonzero entry of each
/// column, so the pivot columns of the input are selected in order. Float mode uses
/// partial pivoting against the session tolerance (scaled by the matrix norm).
template <class T>
Echelon<T> row_reduce(Matrix<T> m, const Session& session) {
  const double scale = std::max(1.0, m.max_abs());
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t best = m.rows();
    if constexpr (is_exact_v<T>) {
      for (std::size_t r = row; r < m.rows(); ++r) {
        if (!ScalarTraits<T>::is_zero(m(r, col))) {
          best = r;
          break;
        }
      }
    } else {
      double best_mag = session.tolerance * scale;
      for (std::size_t r = row; r < m.rows(); ++r) {
        if (magnitude(m(r, col)) > best_mag) {
          best_mag = magnitude(m(r, col));
          best = r;
        }
      }
    }
    if (best == m.rows()) continue;
    if (best != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(best, c));
    }
    const T inv = T(1) / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      const T factor = m(r, col);
      if (ScalarTraits<T>::is_zero(factor)) continue;
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
      if constexpr (!is_exact_v<T>) m(r, col) = T(0);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <class T>
std::size_t rank(const Matrix<T>& m, const Session& session) {
  return row_reduce(m, session).pivots.size();
}

/// Columns form a basis of ker m; one vector per free column, in column order.
template <class T>
Matrix<T> nullspace(const Matrix<T>& m, const Session& session) {
  const auto ech = row_reduce(m, session);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  std::vector<std::vector<T>> cols;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> x(m.cols(), T(0));
    x[f] = T(1);
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) x[ech.pivots[r]] = -ech.rref(r, f);
    cols.push_back(std::move(x));
  }
  return Matrix<T>::from_columns(m.cols(), cols);
}

/// Solves a x = b; nullopt when inconsistent. Free variables are set to zero.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, std::span<const T> b, const Session& session) {
  Matrix<T> aug(a.rows(), a.cols() + 1);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < a.rows(); ++i) aug(i, a.cols()) = b[i];
  const auto ech = row_reduce(aug, session);
  std::vector<T> x(a.cols(), T(0));
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
    if (ech.pivots[r] == a.cols()) return std::nullopt;
    x[ech.pivots[r]] = ech.rref(r, a.cols());
  }
  if constexpr (!is_exact_v<T>) {
    // residual check: rank decisions in float can hide inconsistency
    auto ax = a.apply(x);
    double res = 0.0, nb = 1.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      res = std::max(res, magnitude(ax[i] - b[i]));
      nb = std::max(nb, magnitude(b[i]));
    }
    if (res > session.tolerance * nb * kAmbiguityBand) return std::nullopt;
  }
  return x;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a, const Session& session) {
  if (a.rows() != a.cols()) throw ShapeError("inverse of non-square matrix");
  const std::size_t n = a.rows();
  const auto ech = row_reduce(hconcat(a, Matrix<T>::identity(n)), session);
  if (ech.pivots.size() < n || (n > 0 && ech.pivots[n - 1] >= n)) {
    throw StructuralError("inverse: matrix is singular");
  }
  return ech.rref.block(0, n, n, n);
}

/// Columns of `candidates` (in order) that extend the span of `basis`, chosen greedily.
template <class T>
Matrix<T> greedy_extend(const Matrix<T>& basis, const Matrix<T>& candidates, const Session& session) {
  const std::size_t n = candidates.rows();
  Matrix<T> current = basis.cols() == 0 ? Matrix<T>(n, 0) : basis;
  std::size_t r = rank(current, session);
  std::vector<std::vector<T>> added;
  for (std::size_t c = 0; c < candidates.cols() && r < n; ++c) {
    auto trial = hconcat(current, candidates.block(0, c, n, 1));
    const std::size_t rt = rank(trial, session);
    if (rt > r) {
      current = std::move(trial);
      added.push_back(candidates.column(c));
      r = rt;
    }
  }
  return Matrix<T>::from_columns(n, added);
}

}  // namespace tqt
