#include "critical_hawkes/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace critical_hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool condition, const char* message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

void validate_pair(double beta, double gamma) {
    require(std::isfinite(beta) && beta >= 1.0, "agent parameter beta must be finite and >= 1");
    require(std::isfinite(gamma) && gamma >= 0.0 && gamma <= 1.0,
            "agent parameter gamma must lie in [0, 1]");
}

}  // namespace

double IntensityFn::value(double x) const {
    if (x <= 0.0) {
        return 0.0;
    }
    switch (kind) {
        case IntensityKind::SaturatingExponential:
            // p * s * (1 - e^(-x/s)); expm1 keeps precision for small x/s.
            return -p * s * std::expm1(-x / s);
        case IntensityKind::LinearReference:
            return p * x;
    }
    return 0.0;
}

double IntensityFn::derivative_at_zero() const { return p; }

double IntensityFn::second_derivative_at_zero() const {
    return kind == IntensityKind::SaturatingExponential ? -p / s : 0.0;
}

double IntensityFn::supremum() const {
    return kind == IntensityKind::SaturatingExponential ? p * s : kInf;
}

IntensityFn saturating_exponential(double p, double s) {
    require(std::isfinite(p) && p > 0.0, "intensity slope p must be finite and positive");
    require(std::isfinite(s) && s > 0.0, "intensity scale s must be finite and positive");
    return IntensityFn{IntensityKind::SaturatingExponential, p, s};
}

IntensityFn linear_reference(double p) {
    require(std::isfinite(p) && p > 0.0, "intensity slope p must be finite and positive");
    return IntensityFn{IntensityKind::LinearReference, p, 0.0};
}

AgentLaw AgentLaw::homogeneous(double beta, double gamma) {
    validate_pair(beta, gamma);
    AgentLaw law;
    law.kind = AgentLawKind::Homogeneous;
    law.beta = beta;
    law.gamma = gamma;
    return law;
}

AgentLaw AgentLaw::inhomogeneous(std::vector<AgentAtom> atoms) {
    require(!atoms.empty(), "inhomogeneous law needs at least one atom");
    double weight_sum = 0.0;
    for (const AgentAtom& atom : atoms) {
        validate_pair(atom.beta, atom.gamma);
        require(std::isfinite(atom.weight) && atom.weight > 0.0,
                "atom weights must be finite and positive");
        weight_sum += atom.weight;
    }
    require(std::abs(weight_sum - 1.0) <= 1e-12, "atom weights must sum to 1");
    AgentLaw law;
    law.kind = AgentLawKind::Inhomogeneous;
    law.atoms = std::move(atoms);
    return law;
}

AgentLaw AgentLaw::self_exciting(double beta, double gamma, double kappa) {
    validate_pair(beta, gamma);
    require(std::isfinite(kappa) && kappa > 0.0, "self-excitation weight kappa must be positive");
    AgentLaw law;
    law.kind = AgentLawKind::SelfExciting;
    law.beta = beta;
    law.gamma = gamma;
    law.kappa = kappa;
    return law;
}

PopulationAverages law_averages(const AgentLaw& law) {
    PopulationAverages avg;
    if (law.kind == AgentLawKind::Inhomogeneous) {
        for (const AgentAtom& atom : law.atoms) {
            const double bg = atom.beta * atom.gamma;
            avg.gamma_bar += atom.weight * atom.gamma;
            avg.beta_gamma_bar += atom.weight * bg;
            avg.one_plus_bg_sq_bar += atom.weight * (1.0 + bg) * (1.0 + bg);
        }
    } else {
        const double bg = law.beta * law.gamma;
        avg.gamma_bar = law.gamma;
        avg.beta_gamma_bar = bg;
        avg.one_plus_bg_sq_bar = (1.0 + bg) * (1.0 + bg);
    }
    return avg;
}

std::vector<std::size_t> atom_counts(const AgentLaw& law, std::size_t n_agents) {
    require(n_agents >= 1, "population needs at least one agent");
    if (law.kind != AgentLawKind::Inhomogeneous) {
        return {n_agents};
    }
    const std::size_t n_atoms = law.atoms.size();
    std::vector<std::size_t> counts(n_atoms, 0);
    std::vector<std::pair<double, std::size_t>> remainders(n_atoms);
    std::size_t assigned = 0;
    for (std::size_t g = 0; g < n_atoms; ++g) {
        const double quota = law.atoms[g].weight * static_cast<double>(n_agents);
        counts[g] = static_cast<std::size_t>(std::floor(quota));
        assigned += counts[g];
        remainders[g] = {quota - std::floor(quota), g};
    }
    // Hand the leftover agents to the largest fractional quotas; ties go to
    // the lower atom index so the assignment is deterministic.
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& lhs, const auto& rhs) { return lhs.first > rhs.first; });
    for (std::size_t k = 0; assigned < n_agents; ++k, ++assigned) {
        counts[remainders[k % n_atoms].second] += 1;
    }
    return counts;
}

PopulationAverages empirical_averages(const AgentLaw& law, std::size_t n_agents) {
    if (law.kind != AgentLawKind::Inhomogeneous) {
        return law_averages(law);
    }
    const std::vector<std::size_t> counts = atom_counts(law, n_agents);
    PopulationAverages avg;
    for (std::size_t g = 0; g < counts.size(); ++g) {
        const double frac = static_cast<double>(counts[g]) / static_cast<double>(n_agents);
        const double bg = law.atoms[g].beta * law.atoms[g].gamma;
        avg.gamma_bar += frac * law.atoms[g].gamma;
        avg.beta_gamma_bar += frac * bg;
        avg.one_plus_bg_sq_bar += frac * (1.0 + bg) * (1.0 + bg);
    }
    return avg;
}

void validate(const ModelConfig& config) {
    require(config.n_agents >= 1, "population needs at least one agent");
    for (double v : {config.signal.a_plus, config.signal.a_minus, config.signal.b_plus,
                     config.signal.b_minus}) {
        require(std::isfinite(v) && v >= 0.0, "external signal coefficients must be >= 0");
    }
    require(std::isfinite(config.horizon_macro) && config.horizon_macro > 0.0,
            "horizon must be positive");
    require(config.grid_points >= 1, "grid needs at least one step");
    if (config.alpha_override) {
        require(std::isfinite(*config.alpha_override) && *config.alpha_override > 0.0,
                "kernel rate alpha must be positive");
    }
}

double critical_alpha(const IntensityFn& intensity, const AgentLaw& law) {
    return intensity.derivative_at_zero() * (1.0 + law_averages(law).beta_gamma_bar);
}

double ModelConfig::effective_alpha() const {
    return alpha_override ? *alpha_override : critical_alpha(intensity, agents);
}

double ModelConfig::micro_horizon() const {
    return std::sqrt(static_cast<double>(n_agents)) * horizon_macro;
}

LimitSdeParams limit_params(const ModelConfig& config) {
    if (config.intensity.kind == IntensityKind::LinearReference) {
        throw UnsupportedIntensity(
            "linear reference intensity has no saturation; diffusion limit undefined");
    }
    const PopulationAverages avg = law_averages(config.agents);
    const double gb = avg.gamma_bar;
    const double bg = avg.beta_gamma_bar;
    if (gb <= 0.0) {
        throw UnsupportedAgentLaw(
            "mean herding weight gamma is zero; price normalization degenerates");
    }

    const double fp = config.intensity.derivative_at_zero();
    const double alpha_critical = fp * (1.0 + bg);
    const double alpha = config.effective_alpha();
    if (std::abs(alpha - alpha_critical) > 1e-12 * std::max(1.0, std::abs(alpha_critical))) {
        throw NonCriticalAlpha("kernel rate is not critical for this population");
    }

    const double denom = gb + bg;
    const double w_plus = gb * (1.0 + bg) / denom;
    const double w_minus = bg * (1.0 + bg) / denom;

    LimitSdeParams out;
    out.f_prime0 = fp;
    out.f_second0 = config.intensity.second_derivative_at_zero();
    out.pi0 = (1.0 - gb) / denom * (config.signal.a_plus - config.signal.a_minus);
    out.y0 = w_plus * config.signal.a_plus + w_minus * config.signal.a_minus;
    out.beta_pi = (1.0 - gb) / denom * (config.signal.b_plus - config.signal.b_minus);
    out.sigma_pi = std::sqrt(2.0) * (1.0 + bg) / denom;
    out.beta_y = w_plus * config.signal.b_plus + w_minus * config.signal.b_minus;
    out.alpha_y = 0.5 * avg.one_plus_bg_sq_bar / (1.0 + bg);
    out.sigma_y = std::sqrt(gb * gb + bg * bg) * (1.0 + bg) / denom;
    out.rho = (gb * gb - bg * bg) / ((1.0 + bg) * std::sqrt(2.0 * (gb * gb + bg * bg)));
    out.theta_y = config.agents.kind == AgentLawKind::SelfExciting
                      ? fp * (1.0 + bg) * config.agents.kappa
                      : 0.0;
    return out;
}

LimitSdeParams limit_params(const IntensityFn& intensity, const AgentLaw& law,
                            const ExternalSignal& signal) {
    ModelConfig config;
    config.intensity = intensity;
    config.agents = law;
    config.signal = signal;
    return limit_params(config);
}

}  // namespace critical_hawkes
