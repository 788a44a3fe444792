#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace plp::numerics {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1]. Gauss nodes are the odd
// entries of kronrod_nodes (indices 1, 3, 5, 7).
inline constexpr std::array<double, 8> kronrod_nodes = {
  0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
  0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> kronrod_weights = {
  0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
  0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
inline constexpr std::array<double, 4> gauss_weights = {
  0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
  0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct QuadratureOptions
{
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  //! An interval produced by this many bisections is never split again.
  int max_depth = 30;
  std::size_t max_intervals = 1u << 15;
};

template <std::size_t N>
struct QuadratureResult
{
  std::array<double, N> value{};
  std::array<double, N> error{};
  std::size_t intervals = 0;
  bool converged = false;
};

namespace detail {

template <std::size_t N>
struct Panel
{
  double a;
  double b;
  int depth;
  std::array<double, N> value;
  std::array<double, N> error;
};

template <std::size_t N, class F>
Panel<N> gauss_kronrod_panel(F& f, double a, double b, int depth)
{
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, N> kronrod{};
  std::array<double, N> gauss{};

  const std::array<double, N> fc = f(centre);
  for (std::size_t j = 0; j < N; ++j) {
    kronrod[j] = kronrod_weights[7] * fc[j];
    gauss[j] = gauss_weights[3] * fc[j];
  }
  for (std::size_t k = 0; k < 7; ++k) {
    const double dx = half * kronrod_nodes[k];
    const std::array<double, N> lo = f(centre - dx);
    const std::array<double, N> hi = f(centre + dx);
    for (std::size_t j = 0; j < N; ++j) {
      const double pair = lo[j] + hi[j];
      kronrod[j] += kronrod_weights[k] * pair;
      if (k % 2 == 1) {
        gauss[j] += gauss_weights[k / 2] * pair;
      }
    }
  }
  Panel<N> panel{a, b, depth, {}, {}};
  for (std::size_t j = 0; j < N; ++j) {
    panel.value[j] = kronrod[j] * half;
    panel.error[j] = std::abs((kronrod[j] - gauss[j]) * half);
  }
  return panel;
}

} // namespace detail

//! Globally adaptive Gauss-Kronrod integration of a vector-valued integrand
//! over [breaks.front(), breaks.back()], starting from the given partition.
//! The panel with the largest tolerance-normalised error is bisected until
//! every component satisfies |err| <= max(abs_tol, rel_tol * |value|), or no
//! panel may be refined further (converged = false).
template <std::size_t N, class F>
QuadratureResult<N> integrate(F&& f, std::span<const double> breaks, const QuadratureOptions& opts)
{
  QuadratureResult<N> out;
  if (breaks.size() < 2) {
    return out;
  }
  std::vector<detail::Panel<N>> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i]) {
      panels.push_back(detail::gauss_kronrod_panel<N>(f, breaks[i], breaks[i + 1], 0));
    }
  }

  while (true) {
    std::array<double, N> total{};
    std::array<double, N> total_err{};
    for (const auto& p : panels) {
      for (std::size_t j = 0; j < N; ++j) {
        total[j] += p.value[j];
        total_err[j] += p.error[j];
      }
    }
    std::array<double, N> tol{};
    bool done = true;
    for (std::size_t j = 0; j < N; ++j) {
      tol[j] = std::max(opts.abs_tol, opts.rel_tol * std::abs(total[j]));
      if (!(total_err[j] <= tol[j])) {
        done = false;
      }
    }
    out.value = total;
    out.error = total_err;
    out.intervals = panels.size();
    if (done) {
      out.converged = true;
      return out;
    }
    if (panels.size() >= opts.max_intervals) {
      return out;
    }

    std::size_t worst = panels.size();
    double worst_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (panels[i].depth >= opts.max_depth) {
        continue;
      }
      double score = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        const double scale = tol[j] > 0.0 ? tol[j] : std::numeric_limits<double>::min();
        score = std::max(score, panels[i].error[j] / scale);
      }
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    if (worst == panels.size() || !std::isfinite(worst_score)) {
      return out;
    }
    const auto parent = panels[worst];
    const double mid = 0.5 * (parent.a + parent.b);
    if (!(mid > parent.a && mid < parent.b)) {
      panels[worst].depth = opts.max_depth;
      continue;
    }
    panels[worst] = detail::gauss_kronrod_panel<N>(f, parent.a, mid, parent.depth + 1);
    panels.push_back(detail::gauss_kronrod_panel<N>(f, mid, parent.b, parent.depth + 1));
  }
}

//! Scalar integral of f over [a, b].
template <class F>
QuadratureResult<1> integrate(F&& f, double a, double b, const QuadratureOptions& opts = {})
{
  const std::array<double, 2> breaks{a, b};
  auto wrapped = [&f](double x) { return std::array<double, 1>{f(x)}; };
  return integrate<1>(wrapped, breaks, opts);
}

//! Scalar integral of f over [a, inf) via x = a + scale * s / (1 - s).
//! `scale` should be the width over which f varies.
template <class F>
QuadratureResult<1> integrate_to_infinity(F&& f, double a, double scale, const QuadratureOptions& opts = {})
{
  auto mapped = [&f, a, scale](double s) {
    const double one_minus = 1.0 - s;
    const double x = a + scale * s / one_minus;
    const double v = scale * f(x) / (one_minus * one_minus);
    return std::array<double, 1>{std::isfinite(v) ? v : 0.0};
  };
  const std::array<double, 3> breaks{0.0, 0.5, 1.0};
  return integrate<1>(mapped, breaks, opts);
}

//! Scalar integral of f over the whole real line.
template <class F>
QuadratureResult<1> integrate_real_line(F&& f, double scale = 1.0, const QuadratureOptions& opts = {})
{
  auto folded = [&f](double x) { return f(x) + f(-x); };
  return integrate_to_infinity(folded, 0.0, scale, opts);
}

} // namespace plp::numerics
