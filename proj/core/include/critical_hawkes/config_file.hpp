#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "critical_hawkes/params.hpp"
#include "critical_hawkes/sde_engine.hpp"

namespace critical_hawkes {

/// Configuration-file error. The message names the source, the offending key
/// path and, for line-level problems, the 1-based line number.
struct ConfigParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One parsed run configuration: the finite-N model plus the settings used
/// when its diffusion limit is integrated alongside it.
struct RunConfig {
    ModelConfig model{};
    SdeSchemeKind sde_scheme{SdeSchemeKind::FullTruncationEuler};
    /// Integrator steps per macroscopic grid interval: the limit model is
    /// stepped at grid_points * steps_per_point and recorded on the grid.
    std::size_t sde_steps_per_point{32};
};

/// Parse a flat `key = value` configuration. Blank lines are skipped and `#`
/// starts a comment. `origin` names the source in error messages.
///
/// Recognized keys (defaults in parentheses):
///   model.n_agents            required positive integer
///   model.horizon             (1.0)   macroscopic horizon
///   model.grid_points         (512)
///   model.seed                (0)     64-bit master seed
///   model.alpha_override      optional kernel rate; critical when absent
///   intensity.kind            (saturating_exponential) or linear
///   intensity.p               (1.0)
///   intensity.s               (1.0)   saturating_exponential only
///   agents.law                required: homogeneous | inhomogeneous |
///                             self_exciting
///   agents.beta, agents.gamma required unless inhomogeneous
///   agents.kappa              required for self_exciting
///   agents.atoms              required atom count for inhomogeneous
///   agents.atom.<i>.beta/.gamma/.weight  required for each i < atoms
///   signal.a_plus/.a_minus/.b_plus/.b_minus  (0.0)
///   sde.scheme                (full_truncation) or reflected
///   sde.steps_per_point       (32)
///
/// Unknown, duplicate, malformed, inapplicable and missing required keys, as
/// well as cross-field violations, raise ConfigParseError.
[[nodiscard]] RunConfig parse_run_config(std::string_view text, std::string_view origin);

/// Read `path` and parse its contents with parse_run_config.
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace critical_hawkes
