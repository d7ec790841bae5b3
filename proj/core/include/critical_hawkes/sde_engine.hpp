#pragma once

#include <cstdint>
#include <stdexcept>

#include "critical_hawkes/params.hpp"
#include "critical_hawkes/rescale.hpp"

namespace critical_hawkes {

/// Runtime error: the integrated path left the finite range.
struct NonFinitePath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Domain error: the closed-form boundary rule does not cover the requested
/// parameters (e.g. a linear volatility drift term is present).
struct NotApplicable : std::domain_error {
    using std::domain_error::domain_error;
};

/// Runtime error: the scale-density quadrature met a non-finite integrand.
struct IntegrationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SdeSchemeKind {
    FullTruncationEuler,  ///< state-dependent terms evaluated at max(y, 0)
    ReflectedEuler,       ///< y replaced by |y| after every step
};

/// Time discretization of the limit system on [0, dt * n_steps].
struct SdeScheme {
    SdeSchemeKind kind{SdeSchemeKind::FullTruncationEuler};
    double dt{0.0};
    std::uint64_t n_steps{0};
};

/// Scheme covering [0, horizon] with n_steps uniform steps.
[[nodiscard]] SdeScheme scheme_for(SdeSchemeKind kind, double horizon,
                                   std::uint64_t n_steps = std::uint64_t{1} << 14);

enum class BoundaryBehavior { ReflectedUpward, Unattainable };

/// Nature of the volatility boundary at 0.
struct BoundaryClass {
    bool attainable{false};
    BoundaryBehavior behavior{BoundaryBehavior::Unattainable};
};

/// Closed-form boundary rule for the volatility diffusion
/// dy = (c - b y^2) dt + sqrt(2 a y) dB with a = sigma_y^2 f'(0)/2,
/// b = -alpha_y f''(0), c = beta_y: the origin is attainable and reflecting
/// when 0 < c < a, unattainable when c >= a.
/// Throws NotApplicable when theta_y != 0 (linear drift term outside the
/// rule) or when any of a, b, c fails to be strictly positive.
[[nodiscard]] BoundaryClass classify_boundary(const LimitSdeParams& params);

/// Numerical scale-function integrals of the volatility diffusion.
///
/// The scale density is s(y) = y^(-c/a) exp[(b/2a)(y^2-1) - (theta_y/a)(y-1)];
/// each side integrates s away from 1 on a log-spaced grid (10^4 nodes per
/// decade) until the bound (x_lo or x_hi) is reached or the running value
/// exceeds the divergence threshold 1e8, which yields the "divergent"
/// verdict. The zero side is finite exactly when the boundary at 0 is
/// attainable; the infinity side diverges for every admissible parameter set.
struct ScaleIntegralReport {
    double zero_side_value{0.0};
    bool zero_side_finite{false};
    double infinity_side_value{0.0};
    bool infinity_side_finite{false};
};

/// Integrate the scale density over [x_lo, 1] and [1, x_hi].
/// Requires 0 < x_lo < 1 < x_hi; throws IntegrationFailure when the density
/// is not defined for the parameters (a <= 0) or evaluates to NaN.
[[nodiscard]] ScaleIntegralReport scale_integrals(const LimitSdeParams& params, double x_lo,
                                                  double x_hi);

/// Integrate the limit system
///   d pi = beta_pi dt + sigma_pi sqrt(f'(0) y) dW
///   d y  = (beta_y + theta_y y + alpha_y f''(0) y^2) dt + sigma_y sqrt(f'(0) y) dB
/// with corr(W, B) = rho, from (pi0, y0), recording every `record_stride`-th
/// step (n_steps must be a multiple of record_stride). The returned MacroPath
/// has z identically 0.
[[nodiscard]] MacroPath simulate_sde(const LimitSdeParams& params, const SdeScheme& scheme,
                                     std::uint64_t seed, std::uint64_t record_stride = 1);

}  // namespace critical_hawkes
