#pragma once

#include <optional>
#include <vector>

#include "critical_hawkes/hawkes_engine.hpp"
#include "critical_hawkes/params.hpp"

namespace critical_hawkes {

/// Macroscopic observables of one path on the macroscopic grid.
///
/// pi is the rescaled signed order count, y the volatility combination of the
/// memory means, z the collapsing combination ((1-gamma)/2-weighted
/// difference). All values are left limits, inherited from the path record.
struct MacroPath {
    std::vector<double> grid;
    std::vector<double> pi;
    std::vector<double> y;
    std::vector<double> z;
    /// First grid time with y > h, set by truncate_diag.
    std::optional<double> tau_h_hit{};
};

/// Map a fast-time path record to the macroscopic observables:
///   pi(t) = (count+ - count-)/sqrt(N),
///   y(t)  = sqrt(N) [w+ m+ + w- m-],
///   z(t)  = ((1-gamma_bar)/2) sqrt(N) (m+ - m-),
/// with w+ = (1+beta gamma)/(1+beta), w- = beta (1+beta gamma)/(1+beta) for a
/// single reactivity atom, and the averaged-coefficient generalization
/// w+ = gb(1+bg)/(gb+bg), w- = bg(1+bg)/(gb+bg) (gb, bg the empirical means
/// of gamma and beta*gamma) for an inhomogeneous population.
///
/// Throws UnsupportedAgentLaw for an inhomogeneous population whose gamma
/// values are all zero, where the averaged weights are undefined.
[[nodiscard]] MacroPath to_macro(const HawkesPathRecord& path);

/// Return a copy of `macro` with tau_h_hit set to the first grid time whose
/// y exceeds h (absent when the path never exceeds h). The series themselves
/// are unchanged; statistics that want the stopped process restrict to grid
/// times <= tau_h_hit. Throws std::invalid_argument for h < 0.
[[nodiscard]] MacroPath truncate_diag(const MacroPath& macro, double h);

}  // namespace critical_hawkes
