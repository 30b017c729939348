#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqt/scalar.hpp"

namespace tqt {

/// Tensor-product Gauss–Legendre over [0,1]^dim with dyadic adaptive refinement.
struct QuadratureSpec {
  double tolerance = 1e-10;   // stop when error ≤ tolerance · (1 + max|value|)
  long budget = 1'000'000;    // integrand evaluations
  bool parallel = true;       // OpenMP over cells; results are bitwise identical either way
};

struct QuadratureResult {
  std::vector<Complex> value;
  double error = 0.0;
  long evaluations = 0;
  std::size_t cells = 0;
};

/// Raised when the budget is exhausted before the tolerance is met; carries the
/// best estimate so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

/// Vector-valued integrand; must be safe to call concurrently.
using Integrand = std::function<std::vector<Complex>(std::span<const double>)>;

/// Per-axis order 16 with an order-8 error estimate on every cell; the cells with
/// the largest estimated error are halved along every axis.
QuadratureResult integrate_cube(const Integrand& f, int dim, std::size_t out_size, const QuadratureSpec& spec);

/// Gauss–Legendre nodes and weights on [0, 1], ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_rule(int order);

}  // namespace tqt
