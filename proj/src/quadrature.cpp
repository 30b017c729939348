#include "tqt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <boost/math/quadrature/gauss.hpp>

namespace tqt {

namespace {

template <unsigned N>
GaussRule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    pts.push_back({x[i], w[i]});
    if (x[i] != 0.0) pts.push_back({-x[i], w[i]});
  }
  std::sort(pts.begin(), pts.end());
  GaussRule r;
  for (const auto& [xi, wi] : pts) {
    r.nodes.push_back(0.5 * (xi + 1.0));
    r.weights.push_back(0.5 * wi);
  }
  return r;
}

struct Cell {
  std::vector<double> lo, hi;
  std::vector<Complex> value;
  double error = 0.0;
};

/// Tensor rule of one order on one cell.
void apply_rule(const Integrand& f, const GaussRule& rule, const Cell& cell, std::size_t out_size,
                std::vector<Complex>& acc) {
  const int dim = static_cast<int>(cell.lo.size());
  const std::size_t m = rule.nodes.size();
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> x(dim);
  acc.assign(out_size, Complex(0.0, 0.0));
  double volume = 1.0;
  for (int d = 0; d < dim; ++d) volume *= cell.hi[d] - cell.lo[d];
  while (true) {
    double w = volume;
    for (int d = 0; d < dim; ++d) {
      x[d] = cell.lo[d] + (cell.hi[d] - cell.lo[d]) * rule.nodes[idx[d]];
      w *= rule.weights[idx[d]];
    }
    const auto v = f(x);
    for (std::size_t i = 0; i < out_size; ++i) acc[i] += w * v[i];
    int d = 0;
    while (d < dim && ++idx[d] == m) idx[d++] = 0;
    if (d == dim) break;
  }
}

void evaluate_cell(const Integrand& f, Cell& cell, std::size_t out_size) {
  std::vector<Complex> low;
  apply_rule(f, gauss_rule(16), cell, out_size, cell.value);
  apply_rule(f, gauss_rule(8), cell, out_size, low);
  cell.error = 0.0;
  for (std::size_t i = 0; i < out_size; ++i) cell.error = std::max(cell.error, std::abs(cell.value[i] - low[i]));
}

void evaluate_cells(const Integrand& f, std::vector<Cell>& cells, std::size_t begin, std::size_t out_size,
                    bool parallel) {
  const auto n = static_cast<long>(cells.size() - begin);
  if (!parallel) {
    for (long i = 0; i < n; ++i) evaluate_cell(f, cells[begin + i], out_size);
    return;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      evaluate_cell(f, cells[begin + i], out_size);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  static const GaussRule r8 = make_rule<8>();
  static const GaussRule r16 = make_rule<16>();
  if (order == 8) return r8;
  if (order == 16) return r16;
  throw std::invalid_argument("gauss_rule: only orders 8 and 16 are tabulated");
}

QuadratureResult integrate_cube(const Integrand& f, int dim, std::size_t out_size, const QuadratureSpec& spec) {
  if (dim < 1) throw std::invalid_argument("integrate_cube: dimension must be positive");
  const long per_cell = static_cast<long>(std::pow(16.0, dim) + std::pow(8.0, dim));
  std::vector<Cell> cells(1);
  cells[0].lo.assign(dim, 0.0);
  cells[0].hi.assign(dim, 1.0);
  QuadratureResult result;
  evaluate_cells(f, cells, 0, out_size, spec.parallel);
  result.evaluations = per_cell;

  while (true) {
    // fixed-order reduction over the cell list
    result.value.assign(out_size, Complex(0.0, 0.0));
    result.error = 0.0;
    for (const auto& c : cells) {
      for (std::size_t i = 0; i < out_size; ++i) result.value[i] += c.value[i];
      result.error += c.error;
    }
    result.cells = cells.size();
    double size = 0.0;
    for (const auto& v : result.value) size = std::max(size, std::abs(v));
    const double target = spec.tolerance * (1.0 + size);
    if (result.error <= target) return result;

    // refine every cell above its fair share of the target, and at least the worst
    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cells[a].error > cells[b].error; });
    const double share = target / static_cast<double>(cells.size());
    std::vector<std::size_t> refine;
    for (std::size_t i : order)
      if (refine.empty() || cells[i].error > share) refine.push_back(i);
    const long children = static_cast<long>(refine.size()) << dim;
    if (result.evaluations + children * per_cell > spec.budget) {
      // spend what is left on the worst cells only
      const long affordable = (spec.budget - result.evaluations) / (per_cell << dim);
      if (affordable <= 0) {
        throw QuadratureError("quadrature budget of " + std::to_string(spec.budget) +
                                  " evaluations exhausted at error " + std::to_string(result.error),
                              result);
      }
      refine.resize(static_cast<std::size_t>(affordable));
    }
    std::sort(refine.begin(), refine.end());

    std::vector<Cell> next;
    next.reserve(cells.size() + refine.size() * ((1u << dim) - 1));
    std::size_t r = 0;
    std::vector<Cell> fresh;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (r < refine.size() && refine[r] == i) {
        ++r;
        const Cell& p = cells[i];
        for (unsigned mask = 0; mask < (1u << dim); ++mask) {
          Cell c;
          c.lo = p.lo;
          c.hi = p.hi;
          for (int d = 0; d < dim; ++d) {
            const double mid = 0.5 * (p.lo[d] + p.hi[d]);
            if (mask & (1u << d)) c.lo[d] = mid;
            else c.hi[d] = mid;
          }
          fresh.push_back(std::move(c));
        }
      } else {
        next.push_back(std::move(cells[i]));
      }
    }
    const std::size_t begin = next.size();
    for (auto& c : fresh) next.push_back(std::move(c));
    evaluate_cells(f, next, begin, out_size, spec.parallel);
    result.evaluations += static_cast<long>(fresh.size()) * per_cell;
    cells = std::move(next);
  }
}

}  // namespace tqt
