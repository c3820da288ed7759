#pragma once

#include "ewcert/hermitian.hpp"
#include "ewcert/product_states.hpp"
#include "ewcert/seesaw.hpp"
#include "ewcert/tangent_space.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ewcert {

/// Pure product states on which the observable vanishes.
struct ZeroStateSet {
  std::vector<PureProductState> states;
  /// Whether reduce_independent was applied to `states`.
  bool reduced = false;
  /// Distinct zero states found before the independence reduction.
  std::size_t discovered = 0;
  /// How many of those came from superposition probing.
  std::size_t closure_added = 0;
};

/// Two zero states count as the same when their product fidelity exceeds this.
inline constexpr double kZeroStateDedupTol = 1e-6;
/// Superposition parameters probed per pair of zero states differing in one factor.
inline constexpr int kClosureSamples = 11;
inline constexpr std::size_t kMaxClosurePairs = 64;

namespace detail {

inline bool is_duplicate(const PureProductState& p, const std::vector<PureProductState>& seen) {
  for (const auto& q : seen) {
    if (product_fidelity(p, q) > 1.0 - kZeroStateDedupTol) return true;
  }
  return false;
}

/// Index of the only factor in which p and q differ, if there is exactly one.
inline std::optional<std::size_t> single_differing_factor(const PureProductState& p, const PureProductState& q) {
  std::optional<std::size_t> diff;
  for (std::size_t i = 0; i < p.factors().size(); ++i) {
    const double f = fidelity(p.factor(i), q.factor(i));
    if (f > 1.0 - 1e-9) continue;
    if (f > 1.0 - kZeroStateDedupTol || diff) return std::nullopt;
    diff = i;
  }
  return diff;
}

/// Phase that makes <e|w f> real and non-negative.
inline Complex aligning_phase(const Vector& e, const Vector& f) {
  const Complex overlap = e.dot(f);
  const double m = std::abs(overlap);
  return m > 1e-14 ? std::conj(overlap) / m : Complex(1.0, 0.0);
}

}  // namespace detail

/// Collects the distinct zero states among the see-saw endpoints in `run`,
/// probes superpositions of pairs that differ in a single factor, and
/// optionally reduces the result to states with independent projectors.
/// Requires run.min_value >= -zero_tol.
inline ZeroStateSet find_zero_states(const HermitianOperator& a, const SeesawResult& run, const SeesawConfig& config,
                                     bool reduce = true) {
  if (run.min_value < -config.zero_tol) {
    throw RejectedInput("find_zero_states: the observable reaches " + std::to_string(run.min_value) +
                        " < -zero_tol on a product state");
  }
  ZeroStateSet out;
  std::vector<PureProductState> found;
  for (const StartRecord& s : run.starts) {
    if (std::abs(expectation(a, s.endpoint)) <= config.zero_tol && !detail::is_duplicate(s.endpoint, found)) {
      found.push_back(s.endpoint);
    }
  }

  const std::size_t seeded = found.size();
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < seeded && pairs < kMaxClosurePairs; ++i) {
    for (std::size_t j = i + 1; j < seeded && pairs < kMaxClosurePairs; ++j) {
      const auto diff = detail::single_differing_factor(found[i], found[j]);
      if (!diff) continue;
      ++pairs;
      const Vector& e1 = found[i].factor(*diff);
      const Vector e2 = detail::aligning_phase(e1, found[j].factor(*diff)) * found[j].factor(*diff);
      for (int k = 1; k <= kClosureSamples; ++k) {
        const double t = k * std::numbers::pi / (kClosureSamples + 1);
        Vector g = std::cos(t) * e1 + std::sin(t) * e2;
        if (g.norm() < 1e-8) continue;
        std::vector<Vector> factors = found[i].factors();
        factors[*diff] = g;
        PureProductState candidate = PureProductState::normalized(a.dims(), std::move(factors));
        if (std::abs(expectation(a, candidate)) <= config.zero_tol && !detail::is_duplicate(candidate, found)) {
          found.push_back(std::move(candidate));
          ++out.closure_added;
        }
      }
    }
  }

  out.discovered = found.size();
  if (reduce) {
    out.states = reduce_independent(found);
    out.reduced = true;
  } else {
    out.states = std::move(found);
  }
  return out;
}

inline ZeroStateSet find_zero_states(const HermitianOperator& a, const SeesawConfig& config, bool reduce = true) {
  return find_zero_states(a, seesaw_minimize(a, config), config, reduce);
}

struct SignCheck {
  bool consistent = true;
  /// Indices (ascending) of a sample pair with strictly opposite signs.
  std::optional<std::pair<std::size_t, std::size_t>> offending;
};

/// Refutes positivity on product states: fails iff two samples have
/// expectations of strictly opposite sign beyond zero_tol.
inline SignCheck check_sign_consistency(const HermitianOperator& a, std::span<const PureProductState> samples,
                                        double zero_tol = 1e-7) {
  if (samples.empty()) throw RejectedInput("check_sign_consistency: no samples");
  std::size_t lo = 0;
  std::size_t hi = 0;
  double lo_v = expectation(a, samples[0]);
  double hi_v = lo_v;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double v = expectation(a, samples[i]);
    if (v < lo_v) lo_v = v, lo = i;
    if (v > hi_v) hi_v = v, hi = i;
  }
  SignCheck out;
  if (lo_v < -zero_tol && hi_v > zero_tol) {
    out.consistent = false;
    out.offending = std::minmax(lo, hi);
  }
  return out;
}

enum class Verdict { EntanglementWitness, PositiveOnSeparableButPsd, NotPositiveOnSeparable, Indeterminate };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::EntanglementWitness: return "EW";
    case Verdict::PositiveOnSeparableButPsd: return "POSITIVE_ON_SEPARABLE_BUT_PSD";
    case Verdict::NotPositiveOnSeparable: return "NOT_POSITIVE_ON_SEPARABLE";
    case Verdict::Indeterminate: return "INDETERMINATE";
  }
  return "INDETERMINATE";
}

inline Verdict verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::EntanglementWitness, Verdict::PositiveOnSeparableButPsd, Verdict::NotPositiveOnSeparable,
                    Verdict::Indeterminate}) {
    if (to_string(v) == s) return v;
  }
  throw RejectedInput("unknown verdict '" + std::string(s) + "'");
}

struct CertifierConfig {
  SeesawConfig seesaw;
  double tangent_tol = 1e-8;
  /// Condition 3 holds iff the smallest eigenvalue is below -psd_tol.
  double psd_tol = 1e-10;
  bool reduce_zero_states = true;
  /// Random product states used for condition 1 and the sign falsifier.
  int sign_samples = 200;
  /// Cross-check the see-saw minimum against the grid oracle when affordable.
  bool use_oracle = true;
  int oracle_resolution = 24;

  void validate() const {
    seesaw.validate();
    if (!(tangent_tol > 0.0)) throw RejectedInput("CertifierConfig: tangent_tol must be > 0");
    if (!(psd_tol >= 0.0)) throw RejectedInput("CertifierConfig: psd_tol must be >= 0");
    if (sign_samples < 0) throw RejectedInput("CertifierConfig: sign_samples must be >= 0");
    if (oracle_resolution < 2) throw RejectedInput("CertifierConfig: oracle_resolution must be >= 2");
  }
};

/// Exists p with <p|a|p> > zero_tol.
struct PositivityEvidence {
  bool holds = false;
  double max_value = 0.0;
  PureProductState state;
};

/// Every zero state's tangent space lies in the hyperplane of a.
struct TangentEvidence {
  bool holds = false;
  std::size_t zero_state_count = 0;
  std::size_t zero_states_discovered = 0;
  bool reduced = false;
  double worst_violation = 0.0;
  std::optional<PureProductState> worst_state;
  std::vector<PureProductState> zero_states;
  std::string detail;
};

/// a is not positive semidefinite; the eigenvector is a detected entangled state.
struct NonPsdEvidence {
  bool holds = false;
  double min_eigenvalue = 0.0;
  Vector eigenvector;
  double degeneracy_gap = 0.0;
};

struct OptimizerDiagnostics {
  int starts = 0;
  int converged = 0;
  double convergence_fraction = 0.0;
  int total_sweeps = 0;
  std::optional<double> oracle_min;
  std::optional<double> oracle_gap;
  bool sign_consistent = true;
  std::vector<std::string> notes;
};

struct Certificate {
  Verdict verdict = Verdict::Indeterminate;
  PositivityEvidence condition1;
  TangentEvidence condition2;
  NonPsdEvidence condition3;
  double min_product_expectation = 0.0;
  PureProductState argmin;
  OptimizerDiagnostics diagnostics;
  CertifierConfig config;
};

namespace detail {

/// Bisects along a factor-wise path from a negative to a positive product
/// state for a point where the expectation changes sign.
inline PureProductState locate_sign_change(const HermitianOperator& a, const PureProductState& neg,
                                           const PureProductState& pos) {
  std::vector<Vector> target;
  for (std::size_t i = 0; i < neg.factors().size(); ++i) {
    target.push_back(aligning_phase(neg.factor(i), pos.factor(i)) * pos.factor(i));
  }
  auto at = [&](double t) {
    std::vector<Vector> f;
    for (std::size_t i = 0; i < target.size(); ++i) f.push_back((1.0 - t) * neg.factor(i) + t * target[i]);
    return PureProductState::normalized(a.dims(), std::move(f));
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (expectation(a, at(mid)) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  PureProductState a_lo = at(lo);
  PureProductState a_hi = at(hi);
  return std::abs(expectation(a, a_lo)) < std::abs(expectation(a, a_hi)) ? a_lo : a_hi;
}

inline bool oracle_affordable(const Dims& dims, int resolution) {
  return dims.total() <= 36 && dims.count() <= 3 && grid_oracle_points(dims, resolution) <= kGridOracleMaxPoints;
}

}  // namespace detail

/// Decides the three-condition witness criterion for `a`:
///   1. some pure product state has positive expectation,
///   2. at every pure product zero state the separable tangent space is
///      orthogonal to a,
///   3. a is not positive semidefinite.
/// Conditions 1 and 2 together mean positivity on separable states. The
/// verdict is INDETERMINATE when the optimizer is not trustworthy (fewer than
/// a quarter of starts converged, or the grid oracle disagrees by more than
/// 10 zero_tol) or when a vanishes on every sampled product state.
inline Certificate certify(const HermitianOperator& a, const CertifierConfig& config = {}) {
  config.validate();
  const Dims& dims = a.dims();
  const SeesawConfig& sc = config.seesaw;

  const SeesawResult low = seesaw_minimize(a, sc);
  const SeesawResult high = seesaw_minimize(-a, sc);

  std::vector<PureProductState> samples;
  Rng rng(sc.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int s = 0; s < config.sign_samples; ++s) samples.push_back(random_product_state(dims, rng));
  for (const auto& s : low.starts) samples.push_back(s.endpoint);
  for (const auto& s : high.starts) samples.push_back(s.endpoint);

  // Condition 1.
  PositivityEvidence c1{false, -high.min_value, high.argmin};
  for (const auto& p : samples) {
    const double v = expectation(a, p);
    if (v > c1.max_value) {
      c1.max_value = v;
      c1.state = p;
    }
  }
  c1.holds = c1.max_value > sc.zero_tol;

  // Condition 3.
  const Eigenpair lowest = min_eigen(a);
  NonPsdEvidence c3{lowest.value < -config.psd_tol, lowest.value, lowest.vector, lowest.gap};

  OptimizerDiagnostics diag;
  diag.starts = static_cast<int>(low.starts.size());
  diag.converged = low.converged_count();
  diag.convergence_fraction = low.convergence_fraction();
  diag.total_sweeps = low.total_sweeps();
  diag.sign_consistent = check_sign_consistency(a, samples, sc.zero_tol).consistent;

  // Condition 2.
  TangentEvidence c2;
  if (low.min_value < -sc.zero_tol) {
    c2.holds = false;
    c2.detail = "negative expectation on a product state";
    if (c1.holds) {
      const PureProductState crossing = detail::locate_sign_change(a, low.argmin, c1.state);
      const TangentCheck tc = tangent_condition(a, crossing, config.tangent_tol);
      c2.worst_violation = tc.worst_violation;
      c2.worst_state = crossing;
      c2.zero_state_count = 1;
      c2.zero_states_discovered = 1;
      c2.zero_states.push_back(crossing);
      c2.detail += "; zero state on the connecting path has tangent violation " + std::to_string(tc.worst_violation);
    }
  } else {
    const ZeroStateSet zeros = find_zero_states(a, low, sc, config.reduce_zero_states);
    c2.zero_state_count = zeros.states.size();
    c2.zero_states_discovered = zeros.discovered;
    c2.reduced = zeros.reduced;
    c2.holds = true;
    for (const auto& p : zeros.states) {
      const TangentCheck tc = tangent_condition(a, p, config.tangent_tol);
      if (tc.worst_violation >= c2.worst_violation) {
        c2.worst_violation = tc.worst_violation;
        c2.worst_state = p;
      }
      c2.holds = c2.holds && tc.holds;
    }
    c2.zero_states = zeros.states;
    if (zeros.states.empty()) {
      c2.detail = low.min_value > sc.zero_tol ? "no zero states; minimum is strictly positive"
                                              : "minimum within zero_tol but no endpoint qualified";
    } else {
      c2.detail = c2.holds ? "tangent condition holds at every zero state"
                           : "tangent condition fails at a zero state";
    }
    if (zeros.closure_added > 0) {
      diag.notes.push_back("superposition probing added " + std::to_string(zeros.closure_added) + " zero states");
    }
  }
  if (!diag.sign_consistent && c2.holds) {
    c2.holds = false;
    c2.detail += "; random sampling found expectations of opposite sign";
  }

  bool confident = true;
  if (diag.convergence_fraction < 0.25) {
    confident = false;
    diag.notes.push_back("fewer than 25% of see-saw starts converged");
  }
  if (config.use_oracle && detail::oracle_affordable(dims, config.oracle_resolution)) {
    const double grid = grid_oracle_min(a, config.oracle_resolution);
    diag.oracle_min = grid;
    diag.oracle_gap = std::abs(low.min_value - grid);
    if (*diag.oracle_gap > 10.0 * sc.zero_tol) {
      confident = false;
      diag.notes.push_back("see-saw and grid oracle minima disagree");
    }
  }
  diag.notes.push_back("zero-state exhaustiveness is assumed from " + std::to_string(diag.starts) + " starts");

  Verdict verdict;
  if (!confident) {
    verdict = Verdict::Indeterminate;
  } else if (!c1.holds) {
    if (low.min_value < -sc.zero_tol) {
      verdict = Verdict::NotPositiveOnSeparable;
    } else {
      verdict = Verdict::Indeterminate;
      diag.notes.push_back("observable vanishes on all sampled product states");
    }
  } else if (!c2.holds) {
    verdict = Verdict::NotPositiveOnSeparable;
  } else if (!c3.holds) {
    verdict = Verdict::PositiveOnSeparableButPsd;
  } else {
    verdict = Verdict::EntanglementWitness;
  }

  return Certificate{verdict,        std::move(c1), std::move(c2), std::move(c3), low.min_value, low.argmin,
                     std::move(diag), config};
}

}  // namespace ewcert
