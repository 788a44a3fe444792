#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

namespace plp::numerics {

struct NelderMeadOptions
{
  int max_iterations = 2000;
  //! Relative spread of objective values across the simplex.
  double f_tol = 1e-10;
  //! Simplex diameter relative to (1 + |x_best|).
  double x_tol = 1e-9;
  //! Number of times the simplex is rebuilt around the incumbent after
  //! convergence, to catch premature collapse.
  int restarts = 3;
};

template <std::size_t N>
struct NelderMeadResult
{
  std::array<double, N> x{};
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

namespace detail {

template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead_run(F& f,
                                    const std::array<double, N>& start,
                                    const std::array<double, N>& step,
                                    const NelderMeadOptions& opts)
{
  constexpr double reflect = 1.0;
  constexpr double expand = 2.0;
  constexpr double contract = 0.5;
  constexpr double shrink = 0.5;

  auto eval = [&f](const std::array<double, N>& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::array<std::array<double, N>, N + 1> simplex{};
  std::array<double, N + 1> values{};
  simplex[0] = start;
  values[0] = eval(start);
  for (std::size_t i = 0; i < N; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step[i];
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::array<std::size_t, N + 1> order{};
  NelderMeadResult<N> out;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[N - 1];
    out.iterations = iter;

    double diameter = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i <= N; ++i) {
      for (std::size_t k = 0; k < N; ++k) {
        diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[best][k]));
        scale = std::max(scale, 1.0 + std::abs(simplex[best][k]));
      }
    }
    const double spread = values[worst] - values[best];
    if (std::isfinite(values[worst]) &&
        spread <= opts.f_tol * (std::abs(values[best]) + opts.f_tol) &&
        diameter <= opts.x_tol * scale) {
      out.converged = true;
      break;
    }

    std::array<double, N> centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) {
        continue;
      }
      for (std::size_t k = 0; k < N; ++k) {
        centroid[k] += simplex[i][k] / static_cast<double>(N);
      }
    }
    auto along = [&](double coeff) {
      std::array<double, N> x{};
      for (std::size_t k = 0; k < N; ++k) {
        x[k] = centroid[k] + coeff * (simplex[worst][k] - centroid[k]);
      }
      return x;
    };

    const auto reflected = along(-reflect);
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      const auto expanded = along(-expand);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const auto contracted = along(outside ? -contract : contract);
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) {
        continue;
      }
      for (std::size_t k = 0; k < N; ++k) {
        simplex[i][k] = simplex[best][k] + shrink * (simplex[i][k] - simplex[best][k]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_index = static_cast<std::size_t>(best_it - values.begin());
  out.x = simplex[best_index];
  out.value = values[best_index];
  return out;
}

} // namespace detail

//! Derivative-free minimisation of f: R^N -> R (non-finite values count as
//! +inf). Standard reflection/expansion/contraction/shrink coefficients.
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& f,
                                const std::array<double, N>& start,
                                const std::array<double, N>& step,
                                const NelderMeadOptions& opts = {})
{
  auto result = detail::nelder_mead_run<N>(f, start, step, opts);
  int total = result.iterations;
  std::array<double, N> restart_step = step;
  for (int r = 0; r < opts.restarts; ++r) {
    for (auto& s : restart_step) {
      s *= 0.1;
    }
    auto again = detail::nelder_mead_run<N>(f, result.x, restart_step, opts);
    total += again.iterations;
    const bool improved =
      again.value < result.value - opts.f_tol * (std::abs(result.value) + opts.f_tol);
    if (again.value <= result.value) {
      result = again;
    }
    if (!improved) {
      break;
    }
  }
  result.iterations = total;
  return result;
}

} // namespace plp::numerics
