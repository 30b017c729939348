#pragma once

#include <Eigen/Dense>

#include "tqt/matrix.hpp"

namespace tqt::detail {

using EMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

inline EMatrix to_eigen(const Matrix<Complex>& m) {
  EMatrix out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return out;
}

inline Matrix<Complex> from_eigen(const EMatrix& m) {
  Matrix<Complex> out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

}  // namespace tqt::detail
