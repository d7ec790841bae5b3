#include "critical_hawkes/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "critical_hawkes/rng.hpp"

namespace critical_hawkes {

namespace {

void require_common_grid(std::span<const MacroPath> paths) {
    if (paths.empty()) {
        throw std::invalid_argument("ensemble is empty");
    }
    const std::vector<double>& grid = paths.front().grid;
    if (grid.empty()) {
        throw std::invalid_argument("ensemble paths have an empty grid");
    }
    for (const MacroPath& path : paths) {
        if (path.grid != grid) {
            throw std::invalid_argument("ensemble paths disagree on the grid");
        }
    }
}

std::size_t nearest_grid_index(const std::vector<double>& grid, double t) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), t);
    if (it == grid.begin()) return 0;
    if (it == grid.end()) return grid.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    return (*it - t < t - grid[hi - 1]) ? hi : hi - 1;
}

struct MeanVar {
    double mean{0.0};
    double variance{0.0};
};

MeanVar mean_and_variance(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = values.size() > 1 ? var / (n - 1.0) : 0.0;
    return {mean, var};
}

double nearest_rank(const std::vector<double>& sorted, double q) {
    const double r = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * r));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

template <typename Accessor>
SeriesStats series_stats(std::span<const MacroPath> paths, Accessor&& value_at) {
    const std::size_t n_grid = paths.front().grid.size();
    SeriesStats stats;
    for (auto* field : {&stats.mean, &stats.variance, &stats.stderr_, &stats.q05, &stats.q25,
                        &stats.q50, &stats.q75, &stats.q95}) {
        field->reserve(n_grid);
    }
    std::vector<double> values(paths.size());
    for (std::size_t k = 0; k < n_grid; ++k) {
        for (std::size_t r = 0; r < paths.size(); ++r) {
            values[r] = value_at(paths[r], k);
        }
        const MeanVar mv = mean_and_variance(values);
        stats.mean.push_back(mv.mean);
        stats.variance.push_back(mv.variance);
        stats.stderr_.push_back(std::sqrt(mv.variance / static_cast<double>(paths.size())));
        std::sort(values.begin(), values.end());
        stats.q05.push_back(nearest_rank(values, 0.05));
        stats.q25.push_back(nearest_rank(values, 0.25));
        stats.q50.push_back(nearest_rank(values, 0.50));
        stats.q75.push_back(nearest_rank(values, 0.75));
        stats.q95.push_back(nearest_rank(values, 0.95));
    }
    return stats;
}

double pearson(const std::vector<double>& u, const std::vector<double>& v) {
    const std::size_t n = u.size();
    if (n < 2) return 0.0;
    double mu = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += u[i];
        mv += v[i];
    }
    mu /= static_cast<double>(n);
    mv /= static_cast<double>(n);
    double suu = 0.0, svv = 0.0, suv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        svv += (v[i] - mv) * (v[i] - mv);
        suv += (u[i] - mu) * (v[i] - mv);
    }
    if (suu <= 0.0 || svv <= 0.0) return 0.0;
    return suv / std::sqrt(suu * svv);
}

/// Eigenvalues of a symmetric 3x3 matrix, descending (trigonometric method).
std::array<double, 3> symmetric_eigenvalues(const std::array<std::array<double, 3>, 3>& m) {
    const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    const double trace = m[0][0] + m[1][1] + m[2][2];
    if (p1 == 0.0) {
        std::array<double, 3> eig{m[0][0], m[1][1], m[2][2]};
        std::sort(eig.begin(), eig.end(), std::greater<>());
        return eig;
    }
    const double q = trace / 3.0;
    double p2 = 2.0 * p1;
    for (int i = 0; i < 3; ++i) p2 += (m[i][i] - q) * (m[i][i] - q);
    const double p = std::sqrt(p2 / 6.0);
    std::array<std::array<double, 3>, 3> b{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
        }
    }
    const double det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                         b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                         b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double lam1 = q + 2.0 * p * std::cos(phi);
    const double lam3 = q + 2.0 * p * std::cos(phi + 2.0 * 3.14159265358979323846 / 3.0);
    return {lam1, trace - lam1 - lam3, lam3};
}

std::array<std::array<double, 3>, 3> invert_symmetric3(
    const std::array<std::array<double, 3>, 3>& m) {
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (det == 0.0 || !std::isfinite(det)) {
        throw IllConditioned("normal equations are singular");
    }
    std::array<std::array<double, 3>, 3> inv{};
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = inv[0][1];
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = inv[0][2];
    inv[2][1] = inv[1][2];
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

struct AgentKernel {
    double gamma{0.0};
    double bg{0.0};  ///< beta * gamma
    double om{0.0};  ///< 1 + (beta - 1) * gamma
};

std::vector<AgentKernel> oracle_agents(const ModelConfig& config) {
    std::vector<AgentKernel> agents;
    agents.reserve(config.n_agents);
    const std::vector<std::size_t> counts = atom_counts(config.agents, config.n_agents);
    if (config.agents.kind == AgentLawKind::Inhomogeneous) {
        for (std::size_t a = 0; a < counts.size(); ++a) {
            const AgentAtom& atom = config.agents.atoms[a];
            for (std::size_t i = 0; i < counts[a]; ++i) {
                agents.push_back({atom.gamma, atom.beta * atom.gamma,
                                  1.0 + (atom.beta - 1.0) * atom.gamma});
            }
        }
    } else {
        const double beta = config.agents.beta;
        const double gamma = config.agents.gamma;
        agents.assign(config.n_agents,
                      {gamma, beta * gamma, 1.0 + (beta - 1.0) * gamma});
    }
    return agents;
}

}  // namespace

EnsembleStats compute_ensemble_stats(std::span<const MacroPath> paths, double epsilon) {
    require_common_grid(paths);
    EnsembleStats stats;
    stats.grid = paths.front().grid;
    stats.n_replicas = paths.size();
    stats.pi = series_stats(paths, [](const MacroPath& p, std::size_t k) { return p.pi[k]; });
    stats.y = series_stats(paths, [](const MacroPath& p, std::size_t k) { return p.y[k]; });
    stats.z = series_stats(paths, [](const MacroPath& p, std::size_t k) { return p.z[k]; });

    const std::size_t n_grid = stats.grid.size();
    stats.increment_correlation.reserve(n_grid - 1);
    std::vector<double> dpi(paths.size());
    std::vector<double> dy(paths.size());
    for (std::size_t k = 0; k + 1 < n_grid; ++k) {
        for (std::size_t r = 0; r < paths.size(); ++r) {
            dpi[r] = paths[r].pi[k + 1] - paths[r].pi[k];
            dy[r] = paths[r].y[k + 1] - paths[r].y[k];
        }
        stats.increment_correlation.push_back(pearson(dpi, dy));
    }

    stats.sup_abs_z.reserve(paths.size());
    for (const MacroPath& path : paths) {
        double sup = 0.0;
        for (std::size_t k = 0; k < n_grid; ++k) {
            if (path.grid[k] < epsilon) continue;
            sup = std::max(sup, std::abs(path.z[k]));
        }
        stats.sup_abs_z.push_back(sup);
    }
    return stats;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_statistic needs non-empty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        sup = std::max(sup, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return sup;
}

double ks_p_value(double distance, std::size_t n, std::size_t m) {
    const double ne = static_cast<double>(n) * static_cast<double>(m) /
                      (static_cast<double>(n) + static_cast<double>(m));
    const double sqrt_ne = std::sqrt(ne);
    const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * distance;
    if (lambda < 1e-6) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * lambda * lambda * static_cast<double>(j) *
                                     static_cast<double>(j));
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

KsPair convergence_metric(std::span<const MacroPath> first, std::span<const MacroPath> second,
                          double t) {
    require_common_grid(first);
    require_common_grid(second);
    const std::size_t ka = nearest_grid_index(first.front().grid, t);
    const std::size_t kb = nearest_grid_index(second.front().grid, t);
    std::vector<double> pa, ya, pb, yb;
    pa.reserve(first.size());
    ya.reserve(first.size());
    for (const MacroPath& path : first) {
        pa.push_back(path.pi[ka]);
        ya.push_back(path.y[ka]);
    }
    pb.reserve(second.size());
    yb.reserve(second.size());
    for (const MacroPath& path : second) {
        pb.push_back(path.pi[kb]);
        yb.push_back(path.y[kb]);
    }
    return {ks_statistic(std::move(pa), std::move(pb)), ks_statistic(std::move(ya), std::move(yb))};
}

CollapseDiagnostic collapse_diagnostic(std::span<const LadderRung> ladder, double epsilon,
                                       double h) {
    if (ladder.size() < 3) {
        throw std::invalid_argument("collapse diagnostic needs at least 3 system sizes");
    }
    if (!(epsilon > 0.0) || !(h > 0.0)) {
        throw std::invalid_argument("collapse diagnostic needs epsilon > 0 and h > 0");
    }
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        if (ladder[i].n_agents >= ladder[i + 1].n_agents) {
            throw std::invalid_argument("ladder sizes must strictly increase");
        }
    }
    CollapseDiagnostic diag;
    for (const LadderRung& rung : ladder) {
        if (rung.paths.size() < 100) {
            throw InsufficientReplicas("collapse diagnostic needs at least 100 replicas per rung");
        }
        require_common_grid(rung.paths);
        const std::vector<double>& grid = rung.paths.front().grid;
        const std::size_t half_idx = nearest_grid_index(grid, grid.back() / 2.0);
        double sup_sq_sum = 0.0;
        double z4_sum = 0.0;
        std::size_t z4_count = 0;
        for (const MacroPath& path : rung.paths) {
            std::size_t tau_idx = grid.size() - 1;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                if (path.y[k] > h) {
                    tau_idx = k;
                    break;
                }
            }
            double sup_sq = 0.0;
            for (std::size_t k = 0; k <= tau_idx; ++k) {
                if (grid[k] < epsilon) continue;
                sup_sq = std::max(sup_sq, path.z[k] * path.z[k]);
            }
            sup_sq_sum += sup_sq;
            if (tau_idx >= half_idx) {
                const double z2 = path.z[half_idx] * path.z[half_idx];
                z4_sum += z2 * z2;
                ++z4_count;
            }
        }
        CollapseRow row;
        row.n_agents = rung.n_agents;
        row.sup_sq_mean = sup_sq_sum / static_cast<double>(rung.paths.size());
        row.fourth_moment_scaled =
            z4_count == 0 ? 0.0
                          : std::sqrt(static_cast<double>(rung.n_agents)) * z4_sum /
                                static_cast<double>(z4_count);
        diag.rows.push_back(row);
    }
    diag.sup_sq_decreasing = true;
    for (std::size_t i = 0; i + 1 < diag.rows.size(); ++i) {
        const double prev = diag.rows[i].sup_sq_mean;
        const double next = diag.rows[i + 1].sup_sq_mean;
        if (!(next < prev || next == 0.0)) {
            diag.sup_sq_decreasing = false;
        }
    }
    diag.sup_sq_halves = diag.rows.back().sup_sq_mean <= 0.5 * diag.rows.front().sup_sq_mean;
    diag.fourth_moment_bounded =
        diag.rows.back().fourth_moment_scaled <= 2.0 * diag.rows.front().fourth_moment_scaled;
    return diag;
}

DriftRegression drift_regression(std::span<const MacroPath> paths, std::size_t n_bins) {
    require_common_grid(paths);
    if (n_bins < 1) {
        throw std::invalid_argument("drift regression needs at least one bin");
    }
    const std::vector<double>& grid = paths.front().grid;
    const std::size_t n_int = grid.size() - 1;
    if (n_int == 0) {
        throw std::invalid_argument("drift regression needs at least two grid points");
    }
    const std::size_t bins = std::min(n_bins, n_int);
    std::vector<std::size_t> edges;
    edges.reserve(bins + 1);
    for (std::size_t j = 0; j <= bins; ++j) {
        edges.push_back((j * n_int) / bins);
    }

    std::vector<std::pair<double, double>> samples;  // (y at bin start, dY/dt)
    samples.reserve(paths.size() * bins);
    for (const MacroPath& path : paths) {
        for (std::size_t j = 0; j < bins; ++j) {
            const std::size_t i0 = edges[j];
            const std::size_t i1 = edges[j + 1];
            const double dt = grid[i1] - grid[i0];
            if (!(dt > 0.0)) continue;
            samples.emplace_back(path.y[i0], (path.y[i1] - path.y[i0]) / dt);
        }
    }
    if (samples.size() < 4) {
        throw std::invalid_argument("drift regression needs at least 4 increments");
    }

    std::array<std::array<double, 3>, 3> xtx{};
    std::array<double, 3> xtr{};
    for (const auto& [y, resp] : samples) {
        const std::array<double, 3> row{1.0, y, y * y};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) xtx[i][j] += row[i] * row[j];
            xtr[i] += row[i] * resp;
        }
    }
    const std::array<double, 3> eig = symmetric_eigenvalues(xtx);
    DriftRegression out;
    out.condition_number = eig[2] > 0.0 ? std::sqrt(eig[0] / eig[2])
                                        : std::numeric_limits<double>::infinity();
    if (!(out.condition_number <= 1e10)) {
        throw IllConditioned("drift design matrix condition number exceeds 1e10");
    }
    const auto inv = invert_symmetric3(xtx);
    for (int i = 0; i < 3; ++i) {
        out.coeff[i] = inv[i][0] * xtr[0] + inv[i][1] * xtr[1] + inv[i][2] * xtr[2];
    }

    // White (HC0) covariance: (X'X)^-1 [sum e_k^2 x_k x_k'] (X'X)^-1.
    std::array<std::array<double, 3>, 3> meat{};
    for (const auto& [y, resp] : samples) {
        const std::array<double, 3> row{1.0, y, y * y};
        const double fitted = out.coeff[0] + out.coeff[1] * y + out.coeff[2] * y * y;
        const double e2 = (resp - fitted) * (resp - fitted);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) meat[i][j] += e2 * row[i] * row[j];
        }
    }
    for (int i = 0; i < 3; ++i) {
        double var = 0.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) var += inv[i][a] * meat[a][b] * inv[b][i];
        }
        out.stderr_[i] = std::sqrt(std::max(var, 0.0));
    }
    out.n_samples = samples.size();
    return out;
}

LeverageEstimate leverage_estimate(std::span<const MacroPath> paths) {
    require_common_grid(paths);
    const std::vector<double>& grid = paths.front().grid;
    const std::size_t n_grid = grid.size();
    LeverageEstimate out;
    out.series.reserve(n_grid - 1);

    double sum_u = 0.0, sum_v = 0.0, sum_uu = 0.0, sum_vv = 0.0, sum_uv = 0.0;
    std::size_t n = 0;
    std::vector<double> us, vs;
    us.reserve(paths.size());
    vs.reserve(paths.size());
    for (std::size_t k = 0; k + 1 < n_grid; ++k) {
        const double dt = grid[k + 1] - grid[k];
        us.clear();
        vs.clear();
        for (const MacroPath& path : paths) {
            const double y0 = path.y[k];
            if (!(y0 > 1e-12) || !(dt > 0.0)) continue;
            const double scale = std::sqrt(y0 * dt);
            const double u = (path.pi[k + 1] - path.pi[k]) / scale;
            const double v = (path.y[k + 1] - path.y[k]) / scale;
            us.push_back(u);
            vs.push_back(v);
            sum_u += u;
            sum_v += v;
            sum_uu += u * u;
            sum_vv += v * v;
            sum_uv += u * v;
            ++n;
        }
        out.series.push_back(pearson(us, vs));
    }
    if (n >= 2) {
        const double nn = static_cast<double>(n);
        const double cov = sum_uv / nn - (sum_u / nn) * (sum_v / nn);
        const double vu = sum_uu / nn - (sum_u / nn) * (sum_u / nn);
        const double vv = sum_vv / nn - (sum_v / nn) * (sum_v / nn);
        if (vu > 0.0 && vv > 0.0) {
            out.pooled = cov / std::sqrt(vu * vv);
            out.pooled_stderr = (1.0 - out.pooled * out.pooled) / std::sqrt(nn);
        }
    }
    out.n_samples = n;
    return out;
}

MomentScaling moment_scaling(std::span<const MacroPath> paths, const std::vector<double>& qs,
                             const std::vector<double>& hs) {
    require_common_grid(paths);
    const std::vector<double>& grid = paths.front().grid;
    if (grid.size() < 3) {
        throw std::invalid_argument("moment scaling needs at least 3 grid points");
    }
    const double dt = grid[1] - grid[0];
    std::vector<std::size_t> lags;
    for (double h : hs) {
        const auto lag = static_cast<std::size_t>(
            std::max<long long>(1, std::llround(h / dt)));
        if (lag < grid.size() - 1 &&
            std::find(lags.begin(), lags.end(), lag) == lags.end()) {
            lags.push_back(lag);
        }
    }
    std::sort(lags.begin(), lags.end());
    if (lags.size() < 2) {
        throw std::invalid_argument("moment scaling needs at least 2 distinct increment widths");
    }
    std::size_t start = 0;
    while (start < grid.size() && grid[start] < grid.back() / 2.0) ++start;

    MomentScaling out;
    out.q = qs;
    out.exponent.reserve(qs.size());
    for (double q : qs) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        std::size_t n_points = 0;
        for (std::size_t lag : lags) {
            double moment = 0.0;
            std::size_t count = 0;
            for (const MacroPath& path : paths) {
                for (std::size_t k = start; k + lag < grid.size(); ++k) {
                    moment += std::pow(std::abs(path.pi[k + lag] - path.pi[k]), q);
                    ++count;
                }
            }
            if (count == 0) continue;
            moment /= static_cast<double>(count);
            if (!(moment > 0.0)) continue;
            const double lx = std::log(static_cast<double>(lag) * dt);
            const double ly = std::log(moment);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n_points;
        }
        if (n_points < 2) {
            out.exponent.push_back(0.0);
            continue;
        }
        const double nn = static_cast<double>(n_points);
        const double denom = sxx - sx * sx / nn;
        out.exponent.push_back(denom > 0.0 ? (sxy - sx * sy / nn) / denom : 0.0);
    }
    return out;
}

OracleSample oracle_simulate(const ModelConfig& config, double dt_fine, std::uint64_t seed) {
    validate(config);
    if (config.n_agents > 4) {
        throw std::invalid_argument("reference model is restricted to n_agents <= 4");
    }
    if (!(dt_fine > 0.0) || dt_fine > 1e-3) {
        throw std::invalid_argument("reference model needs 0 < dt_fine <= 1e-3");
    }
    const double alpha = config.effective_alpha();
    const double horizon = config.micro_horizon();
    const double sqrt_n = std::sqrt(static_cast<double>(config.n_agents));
    const double inv_n = 1.0 / static_cast<double>(config.n_agents);
    const auto n_steps =
        static_cast<std::uint64_t>(std::max(1.0, std::ceil(horizon / dt_fine)));
    const double dt = horizon / static_cast<double>(n_steps);
    const double decay = std::exp(-alpha * dt);

    const std::vector<AgentKernel> agents = oracle_agents(config);
    const bool self_exciting = config.agents.kind == AgentLawKind::SelfExciting;
    const double kscale = self_exciting ? config.agents.kappa / sqrt_n : 0.0;

    const double fp_plus = config.signal.b_plus * inv_n / alpha;
    const double fp_minus = config.signal.b_minus * inv_n / alpha;
    double mp = config.signal.a_plus / sqrt_n;
    double mm = config.signal.a_minus / sqrt_n;
    double base_plus = mp;
    double base_minus = mm;
    std::vector<double> x_plus(config.n_agents, 0.0);
    std::vector<double> x_minus(config.n_agents, 0.0);

    RandomStream rng(seed);
    OracleSample sample;
    sample.first_event_time = std::numeric_limits<double>::infinity();
    for (std::uint64_t step = 0; step < n_steps; ++step) {
        std::size_t buys = 0;
        std::size_t sells = 0;
        for (std::size_t i = 0; i < config.n_agents; ++i) {
            const AgentKernel& a = agents[i];
            double up = mp;
            double um = mm;
            if (self_exciting) {
                up = mp + kscale * (base_plus + x_plus[i]);
                um = mm + kscale * (base_minus + x_minus[i]);
            }
            const double rate_buy = config.intensity.value(up + a.bg * um);
            const double rate_sell = config.intensity.value(a.gamma * up + a.om * um);
            if (rng.uniform01() < rate_buy * dt) {
                ++buys;
                x_plus[i] += 1.0;
                ++sample.n_events;
            }
            if (rng.uniform01() < rate_sell * dt) {
                ++sells;
                x_minus[i] += 1.0;
                ++sample.n_events;
            }
        }
        const double t_next = dt * static_cast<double>(step + 1);
        if ((buys > 0 || sells > 0) && !std::isfinite(sample.first_event_time)) {
            sample.first_event_time = t_next;
        }
        mp += static_cast<double>(buys) * inv_n;
        mm += static_cast<double>(sells) * inv_n;
        mp = fp_plus + (mp - fp_plus) * decay;
        mm = fp_minus + (mm - fp_minus) * decay;
        base_plus = fp_plus + (base_plus - fp_plus) * decay;
        base_minus = fp_minus + (base_minus - fp_minus) * decay;
        if (self_exciting) {
            for (std::size_t i = 0; i < config.n_agents; ++i) {
                x_plus[i] *= decay;
                x_minus[i] *= decay;
            }
        }
    }
    return sample;
}

}  // namespace critical_hawkes
