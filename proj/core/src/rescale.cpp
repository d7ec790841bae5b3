#include "critical_hawkes/rescale.hpp"

#include <cmath>
#include <stdexcept>

namespace critical_hawkes {

namespace {

struct MacroWeights {
    double w_plus{0.0};
    double w_minus{0.0};
    double z_scale{0.0};
};

MacroWeights macro_weights(const AgentLaw& law, std::size_t n_agents) {
    MacroWeights w;
    if (law.kind == AgentLawKind::Inhomogeneous) {
        const PopulationAverages avg = empirical_averages(law, n_agents);
        const double denom = avg.gamma_bar + avg.beta_gamma_bar;
        if (denom <= 0.0) {
            throw UnsupportedAgentLaw(
                "macroscopic weights are undefined when every herding weight gamma is zero");
        }
        w.w_plus = avg.gamma_bar * (1.0 + avg.beta_gamma_bar) / denom;
        w.w_minus = avg.beta_gamma_bar * (1.0 + avg.beta_gamma_bar) / denom;
        w.z_scale = 0.5 * (1.0 - avg.gamma_bar);
    } else {
        const double bg = law.beta * law.gamma;
        w.w_plus = (1.0 + bg) / (1.0 + law.beta);
        w.w_minus = law.beta * (1.0 + bg) / (1.0 + law.beta);
        w.z_scale = 0.5 * (1.0 - law.gamma);
    }
    return w;
}

}  // namespace

MacroPath to_macro(const HawkesPathRecord& path) {
    const MacroWeights w = macro_weights(path.config.agents, path.config.n_agents);
    const double sqrt_n = std::sqrt(static_cast<double>(path.config.n_agents));
    MacroPath macro;
    macro.grid = path.grid;
    macro.pi.reserve(path.grid.size());
    macro.y.reserve(path.grid.size());
    macro.z.reserve(path.grid.size());
    for (std::size_t k = 0; k < path.grid.size(); ++k) {
        macro.pi.push_back(static_cast<double>(path.count_diff[k]) / sqrt_n);
        macro.y.push_back(sqrt_n * (w.w_plus * path.m_plus[k] + w.w_minus * path.m_minus[k]));
        macro.z.push_back(w.z_scale * sqrt_n * (path.m_plus[k] - path.m_minus[k]));
    }
    return macro;
}

MacroPath truncate_diag(const MacroPath& macro, double h) {
    if (h < 0.0 || std::isnan(h)) {
        throw std::invalid_argument("truncation level h must be nonnegative");
    }
    MacroPath out = macro;
    out.tau_h_hit.reset();
    for (std::size_t k = 0; k < out.grid.size(); ++k) {
        if (out.y[k] > h) {
            out.tau_h_hit = out.grid[k];
            break;
        }
    }
    return out;
}

}  // namespace critical_hawkes
