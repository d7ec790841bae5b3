#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "critical_hawkes/event_log.hpp"
#include "critical_hawkes/params.hpp"

namespace critical_hawkes {

/// Runtime error: a path produced more events than the configured budget,
/// which normally indicates a supercritical parameterization.
struct EventBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Runtime error: the sufficient statistics left the finite range.
struct NonFiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Markov state of the aggregated order flow: population means of the two
/// memory processes plus cumulative order counts, anchored at fast time
/// t_micro. Between events the means decay exponentially toward b_N/alpha.
struct SufficientState {
    double m_plus{0.0};
    double m_minus{0.0};
    std::uint64_t count_plus{0};
    std::uint64_t count_minus{0};
    double t_micro{0.0};
};

/// Per-agent own-history accumulators for the self-exciting variant, stored
/// lazily: x_plus/x_minus are the values at fast time last_update and decay
/// exponentially until the agent's next own order.
struct AgentState {
    double x_plus{0.0};
    double x_minus{0.0};
    double last_update{0.0};
};

struct EngineOptions {
    /// Hard cap on accepted events per path.
    std::uint64_t event_budget{500000000};
    /// Keep the individual event records (subject to max_recorded_events).
    bool record_events{true};
    /// Retention cap for the in-memory event list; counting is unaffected.
    std::size_t max_recorded_events{1u << 22};
    /// Self-exciting variant: accepted events between dominating-rate
    /// rebuilds. Larger values amortize the O(N) rebuild at the cost of a
    /// looser bound.
    std::size_t window_event_cap{64};
};

/// Result of one exact path at fixed N.
///
/// All per-grid series are sampled at the fast times sqrt(N) * grid[k] and
/// record left limits, so a jump exactly at a grid time is not yet included.
/// intensity_integral_plus/minus accumulate the population-mean intensities
/// (the compensators of count/N); they are produced for the homogeneous and
/// inhomogeneous variants and left empty for the self-exciting one.
struct HawkesPathRecord {
    ModelConfig config;
    std::vector<double> grid;  ///< macroscopic times k*T/grid_points
    std::vector<double> m_plus;
    std::vector<double> m_minus;
    std::vector<std::int64_t> count_diff;
    std::vector<std::uint64_t> count_sum;
    std::vector<double> intensity_integral_plus;
    std::vector<double> intensity_integral_minus;
    std::uint64_t n_events{0};
    std::uint64_t n_proposals{0};
    std::uint64_t n_accepted{0};
    std::vector<EventRecord> events;
};

/// Zero-jump evolution of a memory mean over dt >= 0:
/// m(t0 + dt) = fixed_point + (m(t0) - fixed_point) * exp(-alpha dt),
/// with fixed_point = (b / N) / alpha, the rest level of the external inflow.
[[nodiscard]] double inter_event_flow(double m_t0, double fixed_point, double alpha, double dt);

/// Per-component jump rates at the given state, in the fixed selection order:
/// buy components for every group first, then sell components. Homogeneous
/// and self-exciting populations aggregate to one group of n_agents; the
/// self-exciting overload additionally needs the per-agent states and returns
/// 2 * n_agents entries.
[[nodiscard]] std::vector<double> component_intensities(const ModelConfig& config,
                                                        const SufficientState& state);
[[nodiscard]] std::vector<double> component_intensities(const ModelConfig& config,
                                                        const SufficientState& state,
                                                        const std::vector<AgentState>& agents);

/// Total rate that dominates the grouped (homogeneous/inhomogeneous) process
/// over a lookahead window starting at `state`: each mean is replaced by the
/// supremum of its zero-jump flow, max(m, fixed point).
[[nodiscard]] double rejection_bound(const ModelConfig& config, const SufficientState& state);

/// Simulate one exact path of the N-agent order flow via thinning.
/// `path_seed` should come from replica_seed(master, replica_index);
/// identical (config, path_seed, options) reproduce identical output.
[[nodiscard]] HawkesPathRecord simulate_path(const ModelConfig& config, std::uint64_t path_seed,
                                             const EngineOptions& options = {});

}  // namespace critical_hawkes
