#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "critical_hawkes/params.hpp"
#include "critical_hawkes/rescale.hpp"

namespace critical_hawkes {

/// Input error: an estimator that needs a minimum replica count was handed a
/// smaller ensemble.
struct InsufficientReplicas : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical error: the regression design matrix is numerically singular.
struct IllConditioned : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pointwise ensemble summaries of one coordinate, indexed by grid time.
/// Quantiles use the nearest-rank rule: the q-quantile of R sorted values is
/// the ceil(q * R)-th order statistic.
struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> variance;  ///< unbiased sample variance
    std::vector<double> stderr_;   ///< sample std / sqrt(R)
    std::vector<double> q05;
    std::vector<double> q25;
    std::vector<double> q50;
    std::vector<double> q75;
    std::vector<double> q95;
};

/// Ensemble summaries of a replica set sharing one grid.
struct EnsembleStats {
    std::vector<double> grid;
    SeriesStats pi;
    SeriesStats y;
    SeriesStats z;
    /// Per grid interval [k, k+1]: Pearson correlation across replicas of the
    /// raw increments (pi[k+1]-pi[k], y[k+1]-y[k]).
    std::vector<double> increment_correlation;
    /// Per replica: sup of |z| over grid times >= epsilon.
    std::vector<double> sup_abs_z;
    std::size_t n_replicas{0};
};

/// Summarize an ensemble of paths on a common grid.
/// Throws std::invalid_argument when `paths` is empty or the grids disagree.
[[nodiscard]] EnsembleStats compute_ensemble_stats(std::span<const MacroPath> paths,
                                                   double epsilon = 0.0);

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
/// Arguments are taken by value and sorted internally.
[[nodiscard]] double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sample KS p-value for an observed distance with sample
/// sizes n and m (Kolmogorov series with the small-sample size correction).
[[nodiscard]] double ks_p_value(double distance, std::size_t n, std::size_t m);

/// Distance threshold at significance level alpha for sample sizes n and m:
/// sqrt(-log(alpha/2)/2) * sqrt((n+m)/(n*m)).
[[nodiscard]] double ks_critical_value(double alpha, std::size_t n, std::size_t m);

/// KS distances between the price and volatility marginals of two ensembles
/// at the grid times nearest to t (located on each grid separately).
struct KsPair {
    double pi_distance{0.0};
    double y_distance{0.0};
};

[[nodiscard]] KsPair convergence_metric(std::span<const MacroPath> first,
                                        std::span<const MacroPath> second, double t);

/// One ensemble of the system-size ladder.
struct LadderRung {
    std::size_t n_agents{0};
    std::span<const MacroPath> paths;
};

struct CollapseRow {
    std::size_t n_agents{0};
    /// E[ sup_{t in [epsilon, T and tau_h]} z(t)^2 ].
    double sup_sq_mean{0.0};
    /// sqrt(N) * E[ z(T/2)^4 ] over replicas with tau_h past T/2.
    double fourth_moment_scaled{0.0};
};

/// Collapse verdicts across the ladder. A rung whose statistic is already
/// exactly zero counts as decreased (the collapse is complete there).
struct CollapseDiagnostic {
    std::vector<CollapseRow> rows;
    bool sup_sq_decreasing{false};       ///< strictly decreasing along the ladder
    bool sup_sq_halves{false};           ///< last <= 0.5 * first
    bool fourth_moment_bounded{false};   ///< last <= 2 * first
};

/// Diagnose the vanishing of the z coordinate along an increasing ladder of
/// system sizes, restricted to t <= tau_h with level h.
/// Throws std::invalid_argument unless the ladder has >= 3 rungs with
/// strictly increasing n_agents, epsilon > 0 and h > 0; InsufficientReplicas
/// when any rung has fewer than 100 paths.
[[nodiscard]] CollapseDiagnostic collapse_diagnostic(std::span<const LadderRung> ladder,
                                                     double epsilon, double h);

/// Least-squares fit of pooled conditional increments E[dY | Y=y]/dt on
/// (1, y, y^2), with heteroskedasticity-robust standard errors.
struct DriftRegression {
    std::array<double, 3> coeff{};    ///< c0, c1, c2
    std::array<double, 3> stderr_{};  ///< White (HC0) standard errors
    std::size_t n_samples{0};
    double condition_number{0.0};     ///< 2-norm condition of the design matrix
};

/// Regress y-increments over `n_bins` coarse bins of the grid on (1, y, y^2).
/// Coarse bins tame the martingale noise relative to the drift signal.
/// Throws std::invalid_argument on an empty ensemble or n_bins < 1;
/// IllConditioned when the design condition number exceeds 1e10.
[[nodiscard]] DriftRegression drift_regression(std::span<const MacroPath> paths,
                                               std::size_t n_bins = 128);

/// Correlation between standardized price and volatility increments
/// (d_pi / sqrt(y dt), d_y / sqrt(y dt)), the leverage signature.
struct LeverageEstimate {
    /// Per grid interval: correlation across replicas.
    std::vector<double> series;
    /// Single estimate pooling every (replica, interval) sample.
    double pooled{0.0};
    /// Large-sample standard error (1 - pooled^2) / sqrt(n_samples).
    double pooled_stderr{0.0};
    std::size_t n_samples{0};
};

[[nodiscard]] LeverageEstimate leverage_estimate(std::span<const MacroPath> paths);

/// Scaling exponents A(q): slope of log E|pi(t+h) - pi(t)|^q against log h,
/// pooled over t in the second half of the horizon.
struct MomentScaling {
    std::vector<double> q;
    std::vector<double> exponent;
};

/// Estimate A(q) for each q over the given increment widths (macro time;
/// each is rounded to a whole number of grid steps, minimum one).
/// Throws std::invalid_argument when fewer than two distinct rounded widths
/// survive or the ensemble is empty.
[[nodiscard]] MomentScaling moment_scaling(std::span<const MacroPath> paths,
                                           const std::vector<double>& qs,
                                           const std::vector<double>& hs);

/// One replica of the brute-force discrete-time reference model: per step of
/// length dt_fine, every agent fires a buy with probability rate * dt_fine
/// (independently for the sell side), and the memory states follow the exact
/// exponential decay between steps. Distributionally equivalent to the event
/// engine up to O(dt_fine) bias; a test fixture, not a production simulator.
struct OracleSample {
    std::uint64_t n_events{0};
    /// Micro time of the first event; +infinity when the horizon is silent.
    double first_event_time{0.0};
};

/// Run one replica of the reference model. Requires n_agents <= 4 (the cost
/// is O(n_agents / dt_fine)) and 0 < dt_fine <= 1e-3.
[[nodiscard]] OracleSample oracle_simulate(const ModelConfig& config, double dt_fine,
                                           std::uint64_t seed);

}  // namespace critical_hawkes
