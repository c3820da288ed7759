#pragma once

#include "ewcert/hermitian.hpp"
#include "ewcert/product_states.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <exception>
#include <queue>
#include <thread>
#include <vector>

namespace ewcert {

/// Knobs of the multistart alternating minimizer over pure product states.
struct SeesawConfig {
  int multistarts = 64;
  int max_sweeps = 200;
  /// A start has converged once a full sweep changes the objective by less than this.
  double convergence_tol = 1e-10;
  /// Minima with |value| <= zero_tol count as zero.
  double zero_tol = 1e-7;
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;

  void validate() const {
    if (multistarts < 1) throw RejectedInput("SeesawConfig: multistarts must be >= 1");
    if (max_sweeps < 1) throw RejectedInput("SeesawConfig: max_sweeps must be >= 1");
    if (!(convergence_tol > 0.0)) throw RejectedInput("SeesawConfig: convergence_tol must be > 0");
    if (!(zero_tol > 0.0)) throw RejectedInput("SeesawConfig: zero_tol must be > 0");
    if (threads < 0) throw RejectedInput("SeesawConfig: threads must be >= 0");
  }
};

/// Outcome of one start.
struct StartRecord {
  std::uint64_t seed = 0;
  PureProductState endpoint;
  double value = 0.0;
  bool converged = false;
  int sweeps = 0;
  /// Largest gradient component (in the refinement coordinates) at the endpoint.
  double gradient_norm = 0.0;
  /// Objective after initialization, after each single-factor update and
  /// after each accepted refinement step. Never increases.
  std::vector<double> history;
};

struct SeesawResult {
  double min_value = 0.0;
  PureProductState argmin;
  std::size_t best_start = 0;
  std::vector<StartRecord> starts;

  int converged_count() const {
    return static_cast<int>(std::count_if(starts.begin(), starts.end(), [](const StartRecord& s) { return s.converged; }));
  }
  double convergence_fraction() const {
    return starts.empty() ? 0.0 : static_cast<double>(converged_count()) / static_cast<double>(starts.size());
  }
  int total_sweeps() const {
    int n = 0;
    for (const auto& s : starts) n += s.sweeps;
    return n;
  }
};

namespace detail {

/// Runs body(i) for i in [0, n) over a small pool. Each index writes only its
/// own output slot, so results do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Orthonormal basis of the orthogonal complement of the unit vector e.
inline Matrix complement_basis(const Vector& e) {
  const Eigen::Index n = e.size();
  Eigen::HouseholderQR<Matrix> qr{Matrix(e)};
  Matrix q = qr.householderQ();
  return q.rightCols(n - 1);
}

}  // namespace detail

/// B^dagger a B, where B = e_1 (x) ... (x) I_{n_skip} (x) ... (x) e_k. The
/// entry at skip in `factors` is ignored. Then <psi|a|psi> = <e|M|e> for the
/// product psi with e placed at position skip.
inline Matrix effective_operator(const HermitianOperator& a, std::span<const Vector> factors, std::size_t skip) {
  const Dims& dims = a.dims();
  std::vector<Matrix> blocks;
  blocks.reserve(dims.count());
  for (std::size_t i = 0; i < dims.count(); ++i) {
    if (i == skip) {
      blocks.push_back(Matrix::Identity(dims[i], dims[i]));
    } else {
      blocks.push_back(Matrix(factors[i]));
    }
  }
  const Matrix b = tensor(blocks);
  Matrix m = b.adjoint() * a.matrix() * b;
  return (m + m.adjoint()) * 0.5;
}

struct RefinedState {
  PureProductState state;
  double gradient_norm = 0.0;
};

/// Second-order refinement of a product state toward a stationary point of
/// <psi|a|psi> on the product of unit spheres. Each factor moves as
/// e_i + B_i z_i (renormalized), with B_i an orthonormal basis of e_i's
/// complement; steps use the exact gradient and Hessian in those real
/// coordinates, restricted to positive-curvature directions, and are accepted
/// only if the objective does not increase.
inline RefinedState refine_product_minimum(const HermitianOperator& a, const PureProductState& p,
                                           std::vector<double>* history = nullptr, int max_steps = 25) {
  const Dims& dims = a.dims();
  const Complex iu(0.0, 1.0);
  const double scale = std::max(1.0, a.max_abs());
  std::vector<Vector> factors = p.factors();
  double value = expectation(a, p);
  double grad_norm = 0.0;

  struct Param {
    std::size_t block;
    Eigen::Index column;
    Complex coeff;
  };

  for (int step = 0; step <= max_steps; ++step) {
    std::vector<Matrix> complements;
    std::vector<Param> params;
    for (std::size_t i = 0; i < dims.count(); ++i) {
      complements.push_back(detail::complement_basis(factors[i]));
      for (Eigen::Index c = 0; c < complements.back().cols(); ++c) {
        params.push_back({i, c, Complex(1.0, 0.0)});
        params.push_back({i, c, iu});
      }
    }
    const std::size_t np = params.size();
    const Vector psi = tensor_vectors(factors);
    const Vector a_psi = a.matrix() * psi;

    auto replaced = [&](std::initializer_list<const Param*> ps) {
      std::vector<Vector> f = factors;
      for (const Param* q : ps) f[q->block] = q->coeff * complements[q->block].col(q->column);
      return tensor_vectors(f);
    };

    std::vector<Vector> d_psi(np);
    std::vector<Vector> a_d_psi(np);
    Eigen::VectorXd grad(np);
    for (std::size_t j = 0; j < np; ++j) {
      d_psi[j] = replaced({&params[j]});
      a_d_psi[j] = a.matrix() * d_psi[j];
      grad(j) = 2.0 * a_psi.dot(d_psi[j]).real();
    }
    grad_norm = np ? grad.cwiseAbs().maxCoeff() : 0.0;
    if (step == max_steps || grad_norm < 1e-14 * scale) break;

    Eigen::MatrixXd hess(np, np);
    for (std::size_t j = 0; j < np; ++j) {
      for (std::size_t l = j; l < np; ++l) {
        double h = 2.0 * d_psi[l].dot(a_d_psi[j]).real();
        if (params[j].block != params[l].block) {
          h += 2.0 * a_psi.dot(replaced({&params[j], &params[l]})).real();
        }
        if (j == l) h -= 2.0 * value;
        hess(j, l) = h;
        hess(l, j) = h;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double cutoff = 1e-10 * std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(np);
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      if (lambda(k) > cutoff) {
        const Eigen::VectorXd v = eig.eigenvectors().col(k);
        dx -= (v.dot(grad) / lambda(k)) * v;
      }
    }
    if (dx.isZero(0.0)) break;

    bool accepted = false;
    for (int halving = 0; halving < 30 && !accepted; ++halving) {
      const double t = std::ldexp(1.0, -halving);
      std::vector<Vector> trial = factors;
      for (std::size_t j = 0; j < np; ++j) {
        trial[params[j].block] += (t * dx(j)) * params[j].coeff * complements[params[j].block].col(params[j].column);
      }
      for (Vector& v : trial) v.normalize();
      const Vector tpsi = tensor_vectors(trial);
      const double tvalue = tpsi.dot(a.matrix() * tpsi).real();
      if (tvalue <= value + 1e-15 * scale) {
        accepted = true;
        const double previous = value;
        factors = std::move(trial);
        value = std::min(tvalue, previous);
        if (history) history->push_back(value);
      }
    }
    if (!accepted) break;
  }
  return {PureProductState(dims, std::move(factors)), grad_norm};
}

/// Endpoints whose refinement gradient is below this (times max(1, max|a_ij|))
/// count as converged even when the sweep criterion was not met.
inline constexpr double kStationaryGradientTol = 1e-9;

/// Single start: alternate exact minimization over one factor at a time
/// (minimal eigenvector of the effective operator), then refine the endpoint.
inline StartRecord seesaw_single_start(const HermitianOperator& a, std::uint64_t seed, const SeesawConfig& config) {
  const Dims& dims = a.dims();
  StartRecord rec{seed, random_product_state(dims, seed), 0.0, false, 0, {}};
  std::vector<Vector> factors = rec.endpoint.factors();
  double value = expectation(a, rec.endpoint);
  rec.history.push_back(value);
  for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
    const double previous = value;
    for (std::size_t i = 0; i < dims.count(); ++i) {
      const Eigenpair ep = min_eigen(effective_operator(a, factors, i));
      factors[i] = ep.vector;
      value = ep.value;
      rec.history.push_back(value);
    }
    rec.sweeps = sweep;
    if (std::abs(previous - value) < config.convergence_tol) {
      rec.converged = true;
      break;
    }
  }
  RefinedState refined = refine_product_minimum(a, PureProductState::normalized(dims, factors), &rec.history);
  rec.endpoint = std::move(refined.state);
  rec.gradient_norm = refined.gradient_norm;
  rec.value = expectation(a, rec.endpoint);
  if (rec.gradient_norm <= kStationaryGradientTol * std::max(1.0, a.max_abs())) rec.converged = true;
  return rec;
}

/// Multistart see-saw minimum of <p|a|p> over pure product states. Start j
/// uses seed config.seed + j; the best start is the stable argmin on
/// (value, start index).
inline SeesawResult seesaw_minimize(const HermitianOperator& a, const SeesawConfig& config) {
  config.validate();
  std::vector<std::optional<StartRecord>> slots(static_cast<std::size_t>(config.multistarts));
  detail::parallel_for(slots.size(), config.threads, [&](std::size_t j) {
    slots[j] = seesaw_single_start(a, config.seed + j, config);
  });
  std::vector<StartRecord> starts;
  starts.reserve(slots.size());
  for (auto& s : slots) starts.push_back(std::move(*s));
  std::size_t best = 0;
  for (std::size_t j = 1; j < starts.size(); ++j) {
    if (starts[j].value < starts[best].value) best = j;
  }
  SeesawResult out{starts[best].value, starts[best].endpoint, best, std::move(starts)};
  return out;
}

// Brute-force grid oracle.

/// Cost guard: total dimension <= 36, at most three subsystems, and at most
/// this many points in the coarse grid.
inline constexpr double kGridOracleMaxPoints = 2.0e6;

namespace detail {

/// The factor handled by exact diagonalization (largest dimension, last on ties).
inline std::size_t grid_eigen_factor(const Dims& dims) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < dims.count(); ++i) {
    if (dims[i] >= dims[best]) best = i;
  }
  return best;
}

/// Unit vector on C^n from n-1 hyperspherical angles in [0, pi/2] and n-1
/// phases in [0, 2 pi).
inline Vector hypersphere_point(int n, std::span<const double> angles) {
  Vector v(n);
  double s = 1.0;
  for (int j = 0; j < n - 1; ++j) {
    v(j) = s * std::cos(angles[j]);
    s *= std::sin(angles[j]);
  }
  v(n - 1) = s;
  for (int j = 1; j < n; ++j) v(j) *= std::polar(1.0, angles[n - 2 + j]);
  return v;
}

struct GridLayout {
  std::size_t eigen_factor = 0;
  std::vector<std::size_t> gridded;  // subsystems scanned on the grid
  std::vector<bool> is_phase;        // per angle
  std::size_t angle_count = 0;
};

inline GridLayout grid_layout(const Dims& dims) {
  GridLayout g;
  g.eigen_factor = grid_eigen_factor(dims);
  for (std::size_t i = 0; i < dims.count(); ++i) {
    if (i == g.eigen_factor) continue;
    g.gridded.push_back(i);
    for (int j = 0; j < dims[i] - 1; ++j) g.is_phase.push_back(false);
    for (int j = 0; j < dims[i] - 1; ++j) g.is_phase.push_back(true);
  }
  g.angle_count = g.is_phase.size();
  return g;
}

inline double grid_objective(const HermitianOperator& a, const GridLayout& layout, std::span<const double> angles) {
  const Dims& dims = a.dims();
  std::vector<Vector> factors(dims.count());
  std::size_t offset = 0;
  for (std::size_t i : layout.gridded) {
    const int n = dims[i];
    factors[i] = hypersphere_point(n, angles.subspan(offset, 2 * (n - 1)));
    offset += 2 * (n - 1);
  }
  factors[layout.eigen_factor] = Vector::Zero(dims[layout.eigen_factor]);
  return min_eigenvalue(effective_operator(a, factors, layout.eigen_factor));
}

}  // namespace detail

/// Number of coarse grid points grid_oracle_min would evaluate.
inline double grid_oracle_points(const Dims& dims, int resolution) {
  return std::pow(static_cast<double>(resolution), static_cast<double>(detail::grid_layout(dims).angle_count));
}

/// Brute-force upper bound on min <p|a|p> over pure product states,
/// independent of the see-saw path. Every subsystem but the largest is
/// scanned on a product grid of `resolution` points per hyperspherical angle
/// (magnitude angles on [0, pi/2] including endpoints, phases on [0, 2 pi));
/// the remaining factor is minimized exactly by diagonalization. The best 16
/// grid points are then polished by a compass search on the same angles.
inline double grid_oracle_min(const HermitianOperator& a, int resolution) {
  const Dims& dims = a.dims();
  if (resolution < 2) throw RejectedInput("grid_oracle_min: resolution must be >= 2");
  if (dims.total() > 36 || dims.count() > 3) {
    throw RejectedInput("grid_oracle_min: cost guard requires total_dim <= 36 and at most 3 subsystems, got " +
                        dims.str());
  }
  const double points = grid_oracle_points(dims, resolution);
  if (points > kGridOracleMaxPoints) {
    throw RejectedInput("grid_oracle_min: grid would need " + std::to_string(static_cast<long long>(points)) +
                        " points, bound is " + std::to_string(static_cast<long long>(kGridOracleMaxPoints)));
  }
  const detail::GridLayout layout = detail::grid_layout(dims);
  const std::size_t g = layout.angle_count;
  if (g == 0) return detail::grid_objective(a, layout, {});

  const double theta_step = (std::numbers::pi / 2.0) / (resolution - 1);
  const double phi_step = 2.0 * std::numbers::pi / resolution;
  auto coordinate = [&](std::size_t axis, int idx) {
    return layout.is_phase[axis] ? idx * phi_step : idx * theta_step;
  };

  constexpr std::size_t kCandidates = 16;
  using Entry = std::pair<double, std::vector<double>>;
  auto worse = [](const Entry& x, const Entry& y) { return x.first < y.first; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> best(worse);

  std::vector<int> idx(g, 0);
  std::vector<double> angles(g);
  const auto total = static_cast<long long>(points);
  for (long long n = 0; n < total; ++n) {
    for (std::size_t ax = 0; ax < g; ++ax) angles[ax] = coordinate(ax, idx[ax]);
    const double v = detail::grid_objective(a, layout, angles);
    if (best.size() < kCandidates) {
      best.emplace(v, angles);
    } else if (v < best.top().first) {
      best.pop();
      best.emplace(v, angles);
    }
    for (std::size_t ax = 0; ax < g; ++ax) {
      if (++idx[ax] < resolution) break;
      idx[ax] = 0;
    }
  }

  double overall = std::numeric_limits<double>::infinity();
  std::vector<int> offsets(g);
  while (!best.empty()) {
    auto [value, center] = best.top();
    best.pop();
    std::vector<double> step(g);
    for (std::size_t ax = 0; ax < g; ++ax) step[ax] = layout.is_phase[ax] ? phi_step : theta_step;
    // Compass search on the full 3^g stencil: move to the best neighbour,
    // halve the stencil when the centre wins.
    for (int iter = 0; iter < 4000 && *std::max_element(step.begin(), step.end()) > 1e-10; ++iter) {
      std::vector<double> best_point = center;
      double best_value = value;
      std::fill(offsets.begin(), offsets.end(), -1);
      const long long stencil = static_cast<long long>(std::pow(3.0, static_cast<double>(g)));
      for (long long s = 0; s < stencil; ++s) {
        std::vector<double> trial = center;
        for (std::size_t ax = 0; ax < g; ++ax) {
          trial[ax] += offsets[ax] * step[ax];
          if (!layout.is_phase[ax]) trial[ax] = std::clamp(trial[ax], 0.0, std::numbers::pi / 2.0);
        }
        const double v = detail::grid_objective(a, layout, trial);
        if (v < best_value) {
          best_value = v;
          best_point = std::move(trial);
        }
        for (std::size_t ax = 0; ax < g; ++ax) {
          if (++offsets[ax] <= 1) break;
          offsets[ax] = -1;
        }
      }
      if (best_value < value) {
        value = best_value;
        center = std::move(best_point);
      } else {
        for (double& s : step) s *= 0.5;
      }
    }
    overall = std::min(overall, value);
  }
  return overall;
}

}  // namespace ewcert
