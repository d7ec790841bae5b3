#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace critical_hawkes {

/// Configuration error: the requested memory rate is not the critical one for
/// the given intensity/population, so no diffusion limit is available.
struct NonCriticalAlpha : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Configuration error: the intensity function lies outside the scope of the
/// scaling-limit map (e.g. no strictly concave saturation).
struct UnsupportedIntensity : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Configuration error: the agent population degenerates the rescaling map
/// (e.g. mean herding weight zero, which removes the price normalization).
struct UnsupportedAgentLaw : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class IntensityKind {
    SaturatingExponential,  ///< f(x) = p * s * (1 - exp(-x/s)) for x >= 0
    LinearReference,        ///< f(x) = p * max(x, 0); for engine cross-checks, never saturates
};

/// Jump-rate nonlinearity applied to the herding signal. Increasing, concave,
/// zero on the negative half-line.
struct IntensityFn {
    IntensityKind kind{IntensityKind::SaturatingExponential};
    double p{1.0};  ///< slope at the origin
    double s{1.0};  ///< saturation scale (SaturatingExponential only)

    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double derivative_at_zero() const;
    [[nodiscard]] double second_derivative_at_zero() const;
    /// Least upper bound of f on [0, inf); +inf for the linear reference ramp.
    [[nodiscard]] double supremum() const;
};

[[nodiscard]] IntensityFn saturating_exponential(double p, double s);
[[nodiscard]] IntensityFn linear_reference(double p);

/// Common exogenous signal felt by every agent: an initial mass a/sqrt(N) and
/// a baseline inflow of b/N per unit of fast time, so the inflow totals b t
/// by rescaled time t. Values here are the macroscopic (N-free) coefficients.
struct ExternalSignal {
    double a_plus{0.0};
    double a_minus{0.0};
    double b_plus{0.0};
    double b_minus{0.0};
};

enum class AgentLawKind { Homogeneous, Inhomogeneous, SelfExciting };

/// One point of support of an inhomogeneous population: reactivity pair
/// (beta, gamma) carried by a fraction `weight` of the agents.
struct AgentAtom {
    double beta{1.0};
    double gamma{1.0};
    double weight{1.0};
};

/// Law of the agent reactivity parameters.
///
/// beta >= 1 weights the impact of sell-side history, gamma in [0, 1] the
/// cross-side herding strength; kappa > 0 scales the extra weight an agent
/// puts on her own past orders (self-exciting variant only).
struct AgentLaw {
    AgentLawKind kind{AgentLawKind::Homogeneous};
    double beta{1.0};
    double gamma{1.0};
    double kappa{0.0};
    std::vector<AgentAtom> atoms{};

    [[nodiscard]] static AgentLaw homogeneous(double beta, double gamma);
    [[nodiscard]] static AgentLaw inhomogeneous(std::vector<AgentAtom> atoms);
    [[nodiscard]] static AgentLaw self_exciting(double beta, double gamma, double kappa);
};

/// Population means of the reactivity functionals that enter the limit
/// coefficients: gamma_bar, (beta*gamma)_bar and ((1+beta*gamma)^2)_bar.
struct PopulationAverages {
    double gamma_bar{0.0};
    double beta_gamma_bar{0.0};
    double one_plus_bg_sq_bar{0.0};
};

/// Averages under the law weights (the N -> infinity values).
[[nodiscard]] PopulationAverages law_averages(const AgentLaw& law);

/// Averages of the realized finite population of `n_agents` agents, with
/// inhomogeneous atom counts assigned by largest-remainder rounding.
[[nodiscard]] PopulationAverages empirical_averages(const AgentLaw& law, std::size_t n_agents);

/// Number of agents assigned to each atom by largest-remainder rounding of
/// weight * n_agents (ties broken toward lower atom index). Homogeneous and
/// self-exciting laws yield a single count {n_agents}.
[[nodiscard]] std::vector<std::size_t> atom_counts(const AgentLaw& law, std::size_t n_agents);

/// Full specification of one finite-N simulation.
struct ModelConfig {
    std::size_t n_agents{1};
    IntensityFn intensity{};
    AgentLaw agents{};
    ExternalSignal signal{};
    /// Memory rate of the exponential kernel; critical value when absent.
    std::optional<double> alpha_override{};
    double horizon_macro{1.0};
    std::size_t grid_points{512};
    std::uint64_t seed{0};

    /// Kernel rate actually used: the override if present, otherwise the
    /// critical rate of (intensity, agents).
    [[nodiscard]] double effective_alpha() const;
    /// Fast-time horizon sqrt(n_agents) * horizon_macro.
    [[nodiscard]] double micro_horizon() const;
};

/// Coefficients of the macroscopic price/volatility diffusion
///   d pi = beta_pi dt + sigma_pi sqrt(f'(0) y) dW
///   d y  = (beta_y + theta_y y + alpha_y f''(0) y^2) dt + sigma_y sqrt(f'(0) y) dB
/// with d<B, W> = rho dt.
struct LimitSdeParams {
    double beta_pi{0.0};
    double sigma_pi{0.0};
    double beta_y{0.0};
    double theta_y{0.0};
    double alpha_y{0.0};
    double sigma_y{0.0};
    double rho{0.0};
    double f_prime0{0.0};
    double f_second0{0.0};
    double pi0{0.0};
    double y0{0.0};
};

/// Validate the cross-field constraints of a configuration (signal
/// nonnegative, positive horizon and grid, positive kernel rate). Throws
/// std::invalid_argument on the first violation.
void validate(const ModelConfig& config);

/// Critical memory rate f'(0) * (1 + mean(beta*gamma)) under the law weights.
[[nodiscard]] double critical_alpha(const IntensityFn& intensity, const AgentLaw& law);

/// Map a finite-N configuration to the coefficients of its diffusion limit.
///
/// Throws NonCriticalAlpha if the effective kernel rate deviates from the
/// critical one by more than 1e-12 (relative), UnsupportedIntensity for the
/// linear reference ramp, and UnsupportedAgentLaw when mean(gamma) = 0.
[[nodiscard]] LimitSdeParams limit_params(const ModelConfig& config);

/// Convenience overload with the critical rate and no overrides.
[[nodiscard]] LimitSdeParams limit_params(const IntensityFn& intensity, const AgentLaw& law,
                                          const ExternalSignal& signal);

}  // namespace critical_hawkes
