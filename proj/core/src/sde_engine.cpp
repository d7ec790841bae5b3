#include "critical_hawkes/sde_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "critical_hawkes/rng.hpp"

namespace critical_hawkes {

namespace {

constexpr double kDivergenceThreshold = 1e8;
constexpr int kNodesPerDecade = 10000;

struct BoundaryCoefficients {
    double a{0.0};
    double b{0.0};
    double c{0.0};
    double theta{0.0};
};

BoundaryCoefficients boundary_coefficients(const LimitSdeParams& params) {
    BoundaryCoefficients coeff;
    coeff.a = 0.5 * params.sigma_y * params.sigma_y * params.f_prime0;
    coeff.b = -params.alpha_y * params.f_second0;
    coeff.c = params.beta_y;
    coeff.theta = params.theta_y;
    return coeff;
}

}  // namespace

SdeScheme scheme_for(SdeSchemeKind kind, double horizon, std::uint64_t n_steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive and finite");
    }
    if (n_steps == 0) {
        throw std::invalid_argument("n_steps must be positive");
    }
    SdeScheme scheme;
    scheme.kind = kind;
    scheme.n_steps = n_steps;
    scheme.dt = horizon / static_cast<double>(n_steps);
    return scheme;
}

BoundaryClass classify_boundary(const LimitSdeParams& params) {
    const BoundaryCoefficients k = boundary_coefficients(params);
    if (k.theta != 0.0) {
        throw NotApplicable(
            "closed-form boundary rule needs a vanishing linear volatility drift; "
            "use the numerical scale integrals instead");
    }
    if (!(k.a > 0.0) || !(k.b > 0.0) || !(k.c > 0.0)) {
        throw NotApplicable("closed-form boundary rule needs strictly positive a, b, c");
    }
    BoundaryClass out;
    if (k.c < k.a) {
        out.attainable = true;
        out.behavior = BoundaryBehavior::ReflectedUpward;
    } else {
        out.attainable = false;
        out.behavior = BoundaryBehavior::Unattainable;
    }
    return out;
}

ScaleIntegralReport scale_integrals(const LimitSdeParams& params, double x_lo, double x_hi) {
    if (!(x_lo > 0.0) || !(x_lo < 1.0) || !(x_hi > 1.0) || !std::isfinite(x_hi)) {
        throw std::invalid_argument("scale integrals need 0 < x_lo < 1 < x_hi");
    }
    const BoundaryCoefficients k = boundary_coefficients(params);
    if (!(k.a > 0.0) || !std::isfinite(k.a) || !std::isfinite(k.b) || !std::isfinite(k.c) ||
        !std::isfinite(k.theta)) {
        throw IntegrationFailure("scale density undefined: need finite coefficients and a > 0");
    }
    // Integrand in u = log(y): s(y(u)) * y(u), with the exponent capped so an
    // overflowing tail registers as a huge-but-finite contribution that trips
    // the divergence threshold instead of poisoning the sum.
    const auto log_integrand = [&](double u) {
        const double y = std::exp(u);
        const double exponent = -(k.c / k.a) * u + (0.5 * k.b / k.a) * (y * y - 1.0) -
                                (k.theta / k.a) * (y - 1.0) + u;
        if (std::isnan(exponent)) {
            throw IntegrationFailure("scale density evaluated to NaN");
        }
        return std::exp(std::min(exponent, 700.0));
    };
    // March from u = 0 toward `u_end`, trapezoid on uniform sub-steps, with an
    // early exit once the running integral crosses the divergence threshold.
    const auto march = [&](double u_end, double& value) {
        const double span = std::abs(u_end);
        const auto n_nodes = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(span / std::log(10.0) *
                                                  static_cast<double>(kNodesPerDecade))));
        const double du = u_end / static_cast<double>(n_nodes);
        double prev = log_integrand(0.0);
        double sum = 0.0;
        for (std::size_t i = 1; i <= n_nodes; ++i) {
            const double u = (i == n_nodes) ? u_end : du * static_cast<double>(i);
            const double cur = log_integrand(u);
            sum += 0.5 * (prev + cur) * std::abs(du);
            prev = cur;
            if (sum > kDivergenceThreshold) {
                value = sum;
                return false;
            }
        }
        value = sum;
        return true;
    };
    ScaleIntegralReport report;
    report.zero_side_finite = march(std::log(x_lo), report.zero_side_value);
    report.infinity_side_finite = march(std::log(x_hi), report.infinity_side_value);
    return report;
}

MacroPath simulate_sde(const LimitSdeParams& params, const SdeScheme& scheme, std::uint64_t seed,
                       std::uint64_t record_stride) {
    if (!(scheme.dt > 0.0) || !std::isfinite(scheme.dt) || scheme.n_steps == 0) {
        throw std::invalid_argument("scheme needs dt > 0 and n_steps >= 1");
    }
    if (record_stride == 0 || scheme.n_steps % record_stride != 0) {
        throw std::invalid_argument("record_stride must divide n_steps");
    }
    const double dt = scheme.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double rho = params.rho;
    const double rho_perp = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    RandomStream rng(seed);

    MacroPath path;
    const std::size_t n_records = scheme.n_steps / record_stride;
    path.grid.reserve(n_records + 1);
    path.pi.reserve(n_records + 1);
    path.y.reserve(n_records + 1);
    path.z.assign(n_records + 1, 0.0);

    double pi = params.pi0;
    double y = params.y0;
    const auto record = [&](std::uint64_t step) {
        if (!std::isfinite(pi) || !std::isfinite(y)) {
            throw NonFinitePath("sde state left the finite range");
        }
        path.grid.push_back(dt * static_cast<double>(step));
        path.pi.push_back(pi);
        path.y.push_back(y);
    };
    record(0);
    for (std::uint64_t step = 1; step <= scheme.n_steps; ++step) {
        const double y_plus = std::max(y, 0.0);
        const double vol = std::sqrt(params.f_prime0 * y_plus);
        const double db = rng.normal() * sqrt_dt;
        const double dw = rho * db + rho_perp * rng.normal() * sqrt_dt;
        const double drift_y =
            params.beta_y + params.theta_y * y_plus + params.alpha_y * params.f_second0 * y_plus * y_plus;
        pi += params.beta_pi * dt + params.sigma_pi * vol * dw;
        y += drift_y * dt + params.sigma_y * vol * db;
        if (scheme.kind == SdeSchemeKind::ReflectedEuler) {
            y = std::abs(y);
        }
        if (step % record_stride == 0) {
            record(step);
        }
    }
    return path;
}

}  // namespace critical_hawkes
