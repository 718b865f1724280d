#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace topicnet {

struct ObliminOptions {
  double gamma = 0.0;  // 0 is quartimin
  int max_iterations = 1000;
  double gradient_tolerance = 1e-5;
  double improvement_tolerance = 1e-8;
  int random_starts = 10;  // extra runs from random oblique T, best kept
  std::uint64_t seed = 20;
};

template <typename Scalar>
struct ObliminResult {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix loadings;   // A * rotation
  Matrix rotation;   // R = T^{-T}
  Matrix transform;  // T, unit-length columns
  Scalar criterion{};
  Scalar initial_criterion{};  // at T = I
  std::vector<Scalar> trace;   // criterion after each accepted step of the kept run, from its start
  int iterations = 0;
  bool converged = false;
};

namespace detail {

template <typename Scalar>
struct ObliminValue {
  Scalar f;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gradient;  // dQ/dL
};

template <typename Derived>
ObliminValue<typename Derived::Scalar> oblimin_value(const Eigen::MatrixBase<Derived>& loadings, double gamma) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index p = loadings.rows(), m = loadings.cols();
  const Matrix sq = loadings.array().square().matrix();
  Matrix off = Matrix::Ones(m, m) - Matrix::Identity(m, m);
  Matrix x = sq * off;
  if (gamma != 0.0) {
    const Matrix centering = Matrix::Identity(p, p) - Matrix::Constant(p, p, Scalar(gamma) / Scalar(p));
    x = centering * x;
  }
  return {(sq.array() * x.array()).sum() / Scalar(4), (loadings.array() * x.array()).matrix()};
}

}  // namespace detail

/// Oblimin criterion sum(L^2 .* ((I - gamma/p) L^2 (11' - I))) / 4.
template <typename Derived>
typename Derived::Scalar oblimin_criterion(const Eigen::MatrixBase<Derived>& loadings, double gamma = 0.0) {
  return detail::oblimin_value(loadings, gamma).f;
}

namespace detail {

// Oblique gradient projection (Jennrich 2002) from the unit-column start `t`.
// Steps that fail the Armijo test after 11 halvings are rejected, so the
// trace never increases.
template <typename Scalar>
ObliminResult<Scalar> gpf_oblique(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& base,
                                  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> t,
                                  const ObliminOptions& options) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  auto gradient_in_t = [&](const Matrix& loadings, const Matrix& grad_q, const Matrix& t_inv) -> Matrix {
    return -(loadings.transpose() * grad_q * t_inv).transpose();
  };

  Matrix t_inv = t.inverse();
  Matrix loadings = base * t_inv.transpose();
  auto value = detail::oblimin_value(loadings, options.gamma);
  Matrix g = gradient_in_t(loadings, value.gradient, t_inv);

  ObliminResult<Scalar> out;
  out.initial_criterion = value.f;
  out.trace.push_back(value.f);

  Scalar step(1);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // Project the gradient onto the tangent space of the unit-column constraint.
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> col_dots = (t.array() * g.array()).colwise().sum();
    const Matrix gp = g - t * col_dots.asDiagonal();
    const Scalar s = gp.norm();
    if (s < options.gradient_tolerance) {
      out.converged = true;
      break;
    }

    step *= Scalar(2);
    bool accepted = false;
    Matrix t_new, t_new_inv, loadings_new;
    detail::ObliminValue<Scalar> value_new;
    Scalar improvement(0);
    for (int halving = 0; halving <= 10; ++halving) {
      const Matrix x = t - step * gp;
      const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> inv_norms = x.colwise().norm().cwiseInverse();
      t_new = x * inv_norms.asDiagonal();
      t_new_inv = t_new.inverse();
      loadings_new = base * t_new_inv.transpose();
      value_new = detail::oblimin_value(loadings_new, options.gamma);
      improvement = value.f - value_new.f;
      if (improvement > Scalar(0.5) * s * s * step) {
        accepted = true;
        break;
      }
      step /= Scalar(2);
    }
    // Line search exhausted: keep the best iterate, reported as not converged.
    if (!accepted) break;

    t = std::move(t_new);
    t_inv = std::move(t_new_inv);
    loadings = std::move(loadings_new);
    value = std::move(value_new);
    g = gradient_in_t(loadings, value.gradient, t_inv);
    out.trace.push_back(value.f);
    out.iterations = iter + 1;
    if (improvement < Scalar(options.improvement_tolerance)) {
      out.converged = true;
      break;
    }
  }

  out.loadings = loadings;
  out.transform = t;
  out.rotation = t_inv.transpose();
  out.criterion = value.f;
  return out;
}

}  // namespace detail

/// Oblimin rotation by oblique gradient projection. Loadings are A * T^{-T}
/// with T keeping unit-length columns. The first run starts at T = I; each of
/// `random_starts` further runs starts at a random unit-column T drawn from
/// `seed`, and the run with the lowest criterion is returned (the earliest on
/// ties). `initial_criterion` is always the value at T = I.
template <typename Derived>
ObliminResult<typename Derived::Scalar> oblimin_rotate(const Eigen::MatrixBase<Derived>& a,
                                                       const ObliminOptions& options = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = a.cols();
  const Matrix base = a;
  auto best = detail::gpf_oblique<Scalar>(base, Matrix::Identity(m, m), options);
  const Scalar at_identity = best.initial_criterion;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int run_index = 0; run_index < options.random_starts; ++run_index) {
    Matrix draw(m, m);
    for (Eigen::Index i = 0; i < draw.size(); ++i) draw.data()[i] = Scalar(normal(rng));
    const Matrix start = draw * draw.colwise().norm().cwiseInverse().asDiagonal();
    if (std::abs(start.determinant()) < Scalar(1e-3)) continue;
    auto run = detail::gpf_oblique<Scalar>(base, start, options);
    if (run.criterion < best.criterion) best = std::move(run);
  }
  best.initial_criterion = at_identity;
  return best;
}

}  // namespace topicnet
