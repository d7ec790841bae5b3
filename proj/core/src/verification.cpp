#include "critical_hawkes/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <utility>

#include <iterator>

#include "critical_hawkes/analysis.hpp"
#include "critical_hawkes/csv_io.hpp"
#include "critical_hawkes/event_log.hpp"
#include "critical_hawkes/hawkes_engine.hpp"
#include "critical_hawkes/params.hpp"
#include "critical_hawkes/rescale.hpp"
#include "critical_hawkes/rng.hpp"
#include "critical_hawkes/runner.hpp"
#include "critical_hawkes/sde_engine.hpp"

namespace critical_hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Stage-local master seeds, all derived from the battery seed so ensembles
/// are independent streams yet reproducible from one number.
enum SeedStream : std::uint64_t {
    kStreamEngineSamples = 100,
    kStreamOracleSamples,
    kStreamCompensator,
    kStreamSdeMarginals,
    kStreamSelfExciting,
    kStreamLeverageBase,  // three consecutive streams
    kStreamDeterminism = kStreamLeverageBase + 3,
    kStreamLadderBase,  // one stream per rung
};

[[nodiscard]] std::uint64_t stream_seed(const VerifyOptions& options, std::uint64_t stream) {
    return replica_seed(options.seed, stream);
}

__attribute__((format(printf, 1, 2))) std::string strf(const char* format, ...) {
    std::va_list args;
    va_start(args, format);
    char buffer[1024];
    std::vsnprintf(buffer, sizeof buffer, format, args);
    va_end(args);
    return buffer;
}

void log_stage(const VerifyOptions& options, const std::string& message) {
    if (options.progress != nullptr) {
        *options.progress << "[verify] " << message << std::endl;
    }
}

[[nodiscard]] ModelConfig desk_config(std::size_t n_agents) {
    ModelConfig config;
    config.n_agents = n_agents;
    config.intensity = saturating_exponential(1.0, 1.0);
    config.agents = AgentLaw::homogeneous(2.0, 0.5);
    config.signal = ExternalSignal{1.0, 1.0, 1.0, 1.0};
    config.horizon_macro = 1.0;
    config.grid_points = 512;
    return config;
}

/// What one criterion measured: verdict, prose, and the binding sub-check
/// as observed value / reference target / allowed band.
struct CheckOutcome {
    bool pass{false};
    std::string detail;
    double value{std::numeric_limits<double>::quiet_NaN()};
    double target{std::numeric_limits<double>::quiet_NaN()};
    double band{std::numeric_limits<double>::quiet_NaN()};
};

template <typename Check>
[[nodiscard]] CriterionResult run_criterion(const VerifyOptions& options, const char* name,
                                            Check&& check) {
    log_stage(options, std::string(name));
    CriterionResult result;
    result.name = name;
    try {
        CheckOutcome outcome = check();
        result.pass = outcome.pass;
        result.detail = std::move(outcome.detail);
        result.value = outcome.value;
        result.target = outcome.target;
        result.band = outcome.band;
    } catch (const std::exception& error) {
        result.pass = false;
        result.detail = std::string("error: ") + error.what();
    }
    return result;
}

// --- coefficient consistency -----------------------------------------------

[[nodiscard]] double max_field_gap(const LimitSdeParams& a, const LimitSdeParams& b) {
    const double gaps[] = {
        std::fabs(a.beta_pi - b.beta_pi),   std::fabs(a.sigma_pi - b.sigma_pi),
        std::fabs(a.beta_y - b.beta_y),     std::fabs(a.theta_y - b.theta_y),
        std::fabs(a.alpha_y - b.alpha_y),   std::fabs(a.sigma_y - b.sigma_y),
        std::fabs(a.rho - b.rho),           std::fabs(a.f_prime0 - b.f_prime0),
        std::fabs(a.f_second0 - b.f_second0), std::fabs(a.pi0 - b.pi0),
        std::fabs(a.y0 - b.y0)};
    return *std::max_element(std::begin(gaps), std::end(gaps));
}

[[nodiscard]] CheckOutcome check_coefficient_consistency() {
    const auto intensity = saturating_exponential(1.0, 1.0);
    const ExternalSignal signal{1.0, 1.0, 1.0, 1.0};
    const auto homogeneous = limit_params(intensity, AgentLaw::homogeneous(2.0, 0.5), signal);
    const auto single_atom = limit_params(
        intensity, AgentLaw::inhomogeneous({AgentAtom{2.0, 0.5, 1.0}}), signal);
    const auto tiny_kappa =
        limit_params(intensity, AgentLaw::self_exciting(2.0, 0.5, 1e-16), signal);
    const double atom_gap = max_field_gap(homogeneous, single_atom);
    const double kappa_gap = max_field_gap(homogeneous, tiny_kappa);
    const bool pass = atom_gap <= 1e-14 && kappa_gap <= 1e-14;
    return {pass,
            strf("largest coefficient gap: single-atom %.2e, kappa->0 %.2e (tolerance 1e-14)",
                 atom_gap, kappa_gap),
            std::max(atom_gap, kappa_gap), 0.0, 1e-14};
}

// --- reference-model agreement ---------------------------------------------

struct EventSample {
    double count{0.0};
    double first_time{kInf};
};

[[nodiscard]] CheckOutcome check_reference_model(const VerifyOptions& options) {
    ModelConfig config = desk_config(2);
    config.horizon_macro = 2.0 / std::sqrt(2.0);  // fast-time horizon 2
    config.grid_points = 16;
    const std::uint64_t engine_master = stream_seed(options, kStreamEngineSamples);
    const std::uint64_t oracle_master = stream_seed(options, kStreamOracleSamples);
    const auto engine_samples =
        parallel_replicas(options.replicas, options.threads, [&](std::size_t replica) {
            const auto record = simulate_path(config, replica_seed(engine_master, replica));
            return EventSample{static_cast<double>(record.n_events),
                               record.events.empty() ? kInf : record.events.front().t_micro};
        });
    const auto oracle_samples =
        parallel_replicas(options.replicas, options.threads, [&](std::size_t replica) {
            const auto sample = oracle_simulate(config, 1e-4, replica_seed(oracle_master, replica));
            return EventSample{static_cast<double>(sample.n_events), sample.first_event_time};
        });
    std::vector<double> engine_counts;
    std::vector<double> engine_first;
    std::vector<double> oracle_counts;
    std::vector<double> oracle_first;
    for (std::size_t r = 0; r < options.replicas; ++r) {
        engine_counts.push_back(engine_samples[r].count);
        engine_first.push_back(engine_samples[r].first_time);
        oracle_counts.push_back(oracle_samples[r].count);
        oracle_first.push_back(oracle_samples[r].first_time);
    }
    const double p_count =
        ks_p_value(ks_statistic(std::move(engine_counts), std::move(oracle_counts)),
                   options.replicas, options.replicas);
    const double p_first =
        ks_p_value(ks_statistic(std::move(engine_first), std::move(oracle_first)),
                   options.replicas, options.replicas);
    const bool pass = p_count > 0.01 && p_first > 0.01;
    return {pass,
            strf("KS p-values: event count %.3f, first event time %.3f (threshold 0.01)",
                 p_count, p_first),
            std::min(p_count, p_first), 1.0, 0.99};
}

// --- compensator identity ---------------------------------------------------

struct ResidualPair {
    std::vector<double> plus;
    std::vector<double> minus;
};

[[nodiscard]] CheckOutcome check_compensator_identity(const VerifyOptions& options) {
    const std::size_t n_agents = options.n_ladder[options.n_ladder.size() / 2];
    const ModelConfig config = desk_config(n_agents);
    const std::uint64_t master = stream_seed(options, kStreamCompensator);
    EngineOptions engine_options;
    engine_options.record_events = false;
    const double inv_n = 1.0 / static_cast<double>(n_agents);
    const auto residuals =
        parallel_replicas(options.replicas, options.threads, [&](std::size_t replica) {
            const auto record =
                simulate_path(config, replica_seed(master, replica), engine_options);
            ResidualPair pair;
            pair.plus.resize(record.grid.size());
            pair.minus.resize(record.grid.size());
            for (std::size_t k = 0; k < record.grid.size(); ++k) {
                const double sum = static_cast<double>(record.count_sum[k]);
                const double diff = static_cast<double>(record.count_diff[k]);
                pair.plus[k] = 0.5 * (sum + diff) * inv_n - record.intensity_integral_plus[k];
                pair.minus[k] = 0.5 * (sum - diff) * inv_n - record.intensity_integral_minus[k];
            }
            return pair;
        });
    const std::size_t n_points = residuals.front().plus.size();
    const double n_replicas = static_cast<double>(options.replicas);
    double worst = 0.0;
    bool pass = true;
    std::size_t checks = 0;
    for (const auto side : {&ResidualPair::plus, &ResidualPair::minus}) {
        for (std::size_t k = 0; k < n_points; ++k) {
            double mean = 0.0;
            double m2 = 0.0;
            std::size_t n_seen = 0;
            for (const auto& pair : residuals) {
                const double value = (pair.*side)[k];
                ++n_seen;
                const double delta = value - mean;
                mean += delta / static_cast<double>(n_seen);
                m2 += delta * (value - mean);
            }
            const double stderr_ = std::sqrt(m2 / (n_replicas - 1.0) / n_replicas);
            ++checks;
            if (stderr_ == 0.0) {
                pass = pass && mean == 0.0;
                continue;
            }
            worst = std::max(worst, std::fabs(mean) / stderr_);
            pass = pass && std::fabs(mean) <= 4.0 * stderr_;
        }
    }
    return {pass,
            strf("N=%zu: max |mean|/stderr = %.2f across %zu grid checks (bound 4)", n_agents,
                 worst, checks),
            worst, 0.0, 4.0};
}

// --- the shared system-size ladder ------------------------------------------

struct RungData {
    std::size_t n_agents{0};
    std::vector<MacroPath> paths;
};

[[nodiscard]] std::vector<RungData> run_ladder(const VerifyOptions& options) {
    std::vector<RungData> ladder;
    for (std::size_t rung = 0; rung < options.n_ladder.size(); ++rung) {
        const std::size_t n_agents = options.n_ladder[rung];
        log_stage(options, strf("simulating rung N=%zu (%zu replicas)", n_agents,
                                options.replicas));
        const ModelConfig config = desk_config(n_agents);
        const std::uint64_t master = stream_seed(options, kStreamLadderBase + rung);
        EngineOptions engine_options;
        engine_options.record_events = false;
        auto paths =
            parallel_replicas(options.replicas, options.threads, [&](std::size_t replica) {
                return to_macro(simulate_path(config, replica_seed(master, replica),
                                              engine_options));
            });
        ladder.push_back(RungData{n_agents, std::move(paths)});
    }
    return ladder;
}

// --- collapse of the difference coordinate ----------------------------------

[[nodiscard]] CheckOutcome check_difference_collapse(const std::vector<RungData>& ladder) {
    std::vector<LadderRung> rungs;
    rungs.reserve(ladder.size());
    for (const auto& rung : ladder) {
        rungs.push_back(LadderRung{rung.n_agents, rung.paths});
    }
    const auto diagnostic = collapse_diagnostic(rungs, 0.05, 4.0);
    std::string sup_chain;
    std::string fourth_chain;
    for (const auto& row : diagnostic.rows) {
        sup_chain += strf("%s%.4g", sup_chain.empty() ? "" : " -> ", row.sup_sq_mean);
        fourth_chain += strf("%s%.4g", fourth_chain.empty() ? "" : " -> ",
                             row.fourth_moment_scaled);
    }
    const bool pass = diagnostic.sup_sq_decreasing && diagnostic.sup_sq_halves &&
                      diagnostic.fourth_moment_bounded;
    const double sup_ratio =
        diagnostic.rows.back().sup_sq_mean / diagnostic.rows.front().sup_sq_mean;
    const double fourth_ratio = diagnostic.rows.back().fourth_moment_scaled /
                                diagnostic.rows.front().fourth_moment_scaled;
    return {pass,
            strf("E[sup z^2]: %s (decreasing %s, last/first <= 0.5 %s); sqrt(N) E[z^4(T/2)]: %s "
                 "(last <= 2x first %s)",
                 sup_chain.c_str(), diagnostic.sup_sq_decreasing ? "yes" : "no",
                 diagnostic.sup_sq_halves ? "yes" : "no", fourth_chain.c_str(),
                 diagnostic.fourth_moment_bounded ? "yes" : "no"),
            std::max(sup_ratio / 0.5, fourth_ratio / 2.0), 0.0, 1.0};
}

// --- convergence of the marginals -------------------------------------------

[[nodiscard]] std::vector<MacroPath> run_limit_ensemble(const VerifyOptions& options,
                                                        const LimitSdeParams& params,
                                                        std::size_t n_steps,
                                                        std::size_t record_stride,
                                                        std::uint64_t stream) {
    const auto scheme = scheme_for(SdeSchemeKind::FullTruncationEuler, 1.0, n_steps);
    const std::uint64_t master = stream_seed(options, stream);
    return parallel_replicas(options.replicas, options.threads, [&](std::size_t replica) {
        return simulate_sde(params, scheme, replica_seed(master, replica), record_stride);
    });
}

[[nodiscard]] CheckOutcome check_marginal_convergence(const VerifyOptions& options,
                                                      const std::vector<RungData>& ladder) {
    const auto params = limit_params(desk_config(2).intensity, AgentLaw::homogeneous(2.0, 0.5),
                                     ExternalSignal{1.0, 1.0, 1.0, 1.0});
    const auto limit_paths =
        run_limit_ensemble(options, params, std::size_t{1} << 14, 32, kStreamSdeMarginals);
    const double critical = ks_critical_value(0.05, options.replicas, options.replicas);
    const double bound = 2.0 * critical;
    // The expected two-sample distance for equal laws is ~0.87*sqrt(2/R),
    // the same order as the gaps between adjacent rungs, so rung-by-rung
    // ordering is noise once a rung reaches that floor. A coordinate settles
    // when the final rung improves on the first or is itself within plain
    // sampling noise of the limit; the inflated bound still caps every final
    // distance.
    const auto settles = [critical](double first_distance, double last_distance) {
        return last_distance < first_distance || last_distance <= critical;
    };
    bool settled = true;
    bool below = true;
    double worst_final = 0.0;
    std::string half_chain_pi;
    std::string half_chain_y;
    for (const double t : {0.25, 0.5, 1.0}) {
        KsPair first{};
        KsPair last{};
        for (std::size_t rung = 0; rung < ladder.size(); ++rung) {
            const auto distances = convergence_metric(ladder[rung].paths, limit_paths, t);
            if (rung == 0) {
                first = distances;
            }
            last = distances;
            if (t == 0.5) {
                half_chain_pi += strf("%s%.4f", rung == 0 ? "" : " -> ", distances.pi_distance);
                half_chain_y += strf("%s%.4f", rung == 0 ? "" : " -> ", distances.y_distance);
            }
        }
        settled = settled && settles(first.pi_distance, last.pi_distance) &&
                  settles(first.y_distance, last.y_distance);
        below = below && last.pi_distance < bound && last.y_distance < bound;
        worst_final = std::max({worst_final, last.pi_distance, last.y_distance});
    }
    const bool pass = settled && below;
    return {pass,
            strf("largest KS distance at N=%zu: %.4f (bound %.4f); every coordinate at t in "
                 "{T/4, T/2, T} ends below its N=%zu distance or within sampling noise "
                 "(critical value %.4f): %s; T/2 ladder: pi %s, y %s",
                 ladder.back().n_agents, worst_final, bound, ladder.front().n_agents, critical,
                 settled ? "yes" : "no", half_chain_pi.c_str(), half_chain_y.c_str()),
            worst_final, 0.0, bound};
}

// --- quadratic mean reversion ------------------------------------------------

[[nodiscard]] CheckOutcome check_mean_reversion(const VerifyOptions& options,
                                                const RungData& top_rung) {
    const auto desk_limit = limit_params(desk_config(2).intensity,
                                         AgentLaw::homogeneous(2.0, 0.5),
                                         ExternalSignal{1.0, 1.0, 1.0, 1.0});
    const double c2_target = desk_limit.alpha_y * desk_limit.f_second0;
    const auto homogeneous = drift_regression(top_rung.paths);
    const bool homogeneous_pass =
        std::fabs(homogeneous.coeff[2] - c2_target) <= 4.0 * homogeneous.stderr_[2] &&
        std::fabs(homogeneous.coeff[1]) <= 4.0 * homogeneous.stderr_[1];

    ModelConfig excited = desk_config(top_rung.n_agents);
    excited.agents = AgentLaw::self_exciting(2.0, 0.5, 1.0);
    const auto excited_limit = limit_params(excited);
    const std::uint64_t master = stream_seed(options, kStreamSelfExciting);
    EngineOptions engine_options;
    engine_options.record_events = false;
    // Larger rebuild window: same law, far fewer O(N) dominating-rate
    // rebuilds on the big self-exciting runs.
    engine_options.window_event_cap = 1024;
    const auto excited_paths =
        parallel_replicas(options.replicas, options.threads, [&](std::size_t replica) {
            return to_macro(simulate_path(excited, replica_seed(master, replica),
                                          engine_options));
        });
    const auto excited_fit = drift_regression(excited_paths);
    const bool excited_pass =
        std::fabs(excited_fit.coeff[1] - excited_limit.theta_y) <= 4.0 * excited_fit.stderr_[1];
    const bool pass = homogeneous_pass && excited_pass;
    const double worst_pull = std::max(
        {std::fabs(homogeneous.coeff[2] - c2_target) / homogeneous.stderr_[2],
         std::fabs(homogeneous.coeff[1]) / homogeneous.stderr_[1],
         std::fabs(excited_fit.coeff[1] - excited_limit.theta_y) / excited_fit.stderr_[1]});
    return {pass,
            strf("homogeneous N=%zu: c2 = %.4f +/- %.4f (target %.4f), c1 = %.4f +/- %.4f "
                 "(target 0); self-exciting: c1 = %.4f +/- %.4f (target %.4f)",
                 top_rung.n_agents, homogeneous.coeff[2], homogeneous.stderr_[2], c2_target,
                 homogeneous.coeff[1], homogeneous.stderr_[1], excited_fit.coeff[1],
                 excited_fit.stderr_[1], excited_limit.theta_y),
            worst_pull, 0.0, 4.0};
}

// --- leverage ----------------------------------------------------------------

/// Running sums of the standardized increments (d_pi / sqrt(y dt),
/// d_y / sqrt(y dt)), mergeable across replicas so a fine-step ensemble never
/// has to be held in memory at once.
struct LeverageMoments {
    double sum_u{0.0};
    double sum_v{0.0};
    double sum_uu{0.0};
    double sum_vv{0.0};
    double sum_uv{0.0};
    std::size_t n{0};
};

[[nodiscard]] LeverageMoments leverage_moments(const MacroPath& path) {
    LeverageMoments moments;
    for (std::size_t k = 0; k + 1 < path.grid.size(); ++k) {
        const double dt = path.grid[k + 1] - path.grid[k];
        const double y0 = path.y[k];
        if (!(y0 > 1e-12) || !(dt > 0.0)) {
            continue;
        }
        const double scale = std::sqrt(y0 * dt);
        const double u = (path.pi[k + 1] - path.pi[k]) / scale;
        const double v = (path.y[k + 1] - path.y[k]) / scale;
        moments.sum_u += u;
        moments.sum_v += v;
        moments.sum_uu += u * u;
        moments.sum_vv += v * v;
        moments.sum_uv += u * v;
        ++moments.n;
    }
    return moments;
}

struct PooledCorrelation {
    double value{0.0};
    double stderr_{kInf};
};

[[nodiscard]] PooledCorrelation pooled_leverage(const std::vector<LeverageMoments>& parts) {
    LeverageMoments total;
    for (const auto& part : parts) {
        total.sum_u += part.sum_u;
        total.sum_v += part.sum_v;
        total.sum_uu += part.sum_uu;
        total.sum_vv += part.sum_vv;
        total.sum_uv += part.sum_uv;
        total.n += part.n;
    }
    PooledCorrelation pooled;
    if (total.n < 2) {
        return pooled;
    }
    const double nn = static_cast<double>(total.n);
    const double cov = total.sum_uv / nn - (total.sum_u / nn) * (total.sum_v / nn);
    const double vu = total.sum_uu / nn - (total.sum_u / nn) * (total.sum_u / nn);
    const double vv = total.sum_vv / nn - (total.sum_v / nn) * (total.sum_v / nn);
    if (vu > 0.0 && vv > 0.0) {
        pooled.value = cov / std::sqrt(vu * vv);
        pooled.stderr_ = (1.0 - pooled.value * pooled.value) / std::sqrt(nn);
    }
    return pooled;
}

[[nodiscard]] CheckOutcome check_leverage(const VerifyOptions& options,
                                          const std::vector<RungData>& ladder) {
    struct Case {
        const char* label;
        AgentLaw law;
        double quoted;
        bool has_quoted;
    };
    const Case cases[] = {
        {"beta=1,gamma=0.5", AgentLaw::homogeneous(1.0, 0.5), 0.0, true},
        {"beta=3,gamma=1", AgentLaw::homogeneous(3.0, 1.0), -0.4472, true},
        {"beta=2,gamma=0.5", AgentLaw::homogeneous(2.0, 0.5), 0.0, false},
    };
    const auto intensity = saturating_exponential(1.0, 1.0);
    const ExternalSignal signal{1.0, 1.0, 1.0, 1.0};
    bool pass = true;
    std::string detail;
    double worst_pull = 0.0;
    for (std::size_t index = 0; index < std::size(cases); ++index) {
        const auto& test_case = cases[index];
        const auto params = limit_params(intensity, test_case.law, signal);
        // Pool every integrator step: each standardized step increment is
        // conditionally Gaussian with correlation rho up to a drift tilt of
        // order dt, while the pooled standard error shrinks only like
        // sqrt(dt), so the step count is what keeps the tilt inside the
        // 4-stderr band.
        const auto scheme =
            scheme_for(SdeSchemeKind::FullTruncationEuler, 1.0, std::size_t{1} << 15);
        const std::uint64_t master = stream_seed(options, kStreamLeverageBase + index);
        const auto moments =
            parallel_replicas(options.replicas, options.threads, [&](std::size_t replica) {
                return leverage_moments(
                    simulate_sde(params, scheme, replica_seed(master, replica), 1));
            });
        const auto estimate = pooled_leverage(moments);
        const bool case_pass =
            std::fabs(estimate.value - params.rho) <= 4.0 * estimate.stderr_ &&
            (!test_case.has_quoted || std::fabs(params.rho - test_case.quoted) <= 1e-3) &&
            params.rho <= 0.0;
        pass = pass && case_pass;
        worst_pull = std::max(worst_pull,
                              std::fabs(estimate.value - params.rho) / estimate.stderr_);
        detail += strf("%s%s: pooled %.5f +/- %.5f (target %.5f)", detail.empty() ? "" : "; ",
                       test_case.label, estimate.value, estimate.stderr_, params.rho);
    }
    double worst_sign = -kInf;
    for (const auto& rung : ladder) {
        worst_sign = std::max(worst_sign, leverage_estimate(rung.paths).pooled);
    }
    pass = pass && worst_sign <= 0.0;
    detail += strf("; order-flow ensembles: largest pooled correlation %.4f (must be <= 0)",
                   worst_sign);
    return {pass, std::move(detail), worst_pull, 0.0, 4.0};
}

// --- boundary classification --------------------------------------------------

[[nodiscard]] CheckOutcome check_boundary_classification() {
    std::size_t agreements = 0;
    constexpr std::size_t n_points = 20;
    for (std::size_t k = 1; k <= n_points; ++k) {
        LimitSdeParams params;
        params.sigma_y = 1.0;
        params.f_prime0 = 2.0;    // diffusion scale a = 1
        params.f_second0 = -1.0;  // quadratic drift weight b = alpha_y
        params.alpha_y = 1.0;
        params.beta_y = 0.1 * static_cast<double>(k) + 0.05;  // sweeps c across a
        params.y0 = 1.0;
        const auto analytic = classify_boundary(params);
        const auto narrow = scale_integrals(params, 1e-6, 1e3);
        const auto wide = scale_integrals(params, 1e-12, 1e3);
        const bool divergent_at_zero =
            !wide.zero_side_finite || wide.zero_side_value > 2.0 * narrow.zero_side_value;
        const bool agree = analytic.attainable == !divergent_at_zero &&
                           !narrow.infinity_side_finite;
        agreements += agree ? 1 : 0;
    }

    LimitSdeParams quadratic;
    quadratic.alpha_y = 1.0;
    quadratic.f_second0 = -1.0;
    quadratic.f_prime0 = 1.0;
    quadratic.y0 = 1.0;
    const auto scheme = scheme_for(SdeSchemeKind::FullTruncationEuler, 1.0, std::size_t{1} << 14);
    const auto path = simulate_sde(quadratic, scheme, 1, 16);
    double max_error = 0.0;
    for (std::size_t k = 0; k < path.grid.size(); ++k) {
        max_error = std::max(max_error, std::fabs(path.y[k] - 1.0 / (1.0 + path.grid[k])));
    }
    const bool pass = agreements == n_points && max_error < 5e-3;
    return {pass,
            strf("%zu/%zu sweep verdicts agree; pure-quadratic-drift max error %.2e "
                 "(bound 5e-3)",
                 agreements, n_points, max_error),
            max_error, 0.0, 5e-3};
}

// --- determinism ---------------------------------------------------------------

[[nodiscard]] std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

[[nodiscard]] CheckOutcome check_determinism(const VerifyOptions& options) {
    const ModelConfig config = desk_config(200);
    const std::uint64_t master = stream_seed(options, kStreamDeterminism);
    constexpr std::size_t n_replicas = 4;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    const auto base = std::filesystem::temp_directory_path() /
                      ("critical-hawkes-verify-" + std::to_string(stamp));
    std::vector<std::string> names{"ensemble.csv"};
    for (std::size_t replica = 0; replica < n_replicas; ++replica) {
        names.push_back("events_" + std::to_string(replica) + ".bin");
        names.push_back("path_" + std::to_string(replica) + ".csv");
    }
    const auto produce = [&](const std::filesystem::path& dir) {
        std::filesystem::create_directories(dir);
        std::vector<MacroPath> paths;
        for (std::size_t replica = 0; replica < n_replicas; ++replica) {
            const auto record = simulate_path(config, replica_seed(master, replica));
            const auto tag = std::to_string(replica);
            write_event_log(dir / ("events_" + tag + ".bin"), record.events);
            paths.push_back(to_macro(record));
            write_path_csv(dir / ("path_" + tag + ".csv"), paths.back());
        }
        write_ensemble_csv(dir / "ensemble.csv", compute_ensemble_stats(paths));
    };
    const auto first_dir = base / "first";
    const auto second_dir = base / "second";
    produce(first_dir);
    produce(second_dir);
    std::size_t matching = 0;
    for (const auto& name : names) {
        const auto first = read_bytes(first_dir / name);
        if (!first.empty() && first == read_bytes(second_dir / name)) {
            ++matching;
        }
    }
    std::filesystem::remove_all(base);
    const bool pass = matching == names.size();
    return {pass,
            strf("%zu/%zu artifacts byte-identical across repeated runs (event logs, "
                 "path CSVs, ensemble CSV)",
                 matching, names.size()),
            static_cast<double>(names.size() - matching), 0.0, 0.0};
}

void validate_options(const VerifyOptions& options) {
    if (options.replicas < 100) {
        throw std::invalid_argument("verification needs at least 100 replicas per ensemble");
    }
    if (options.n_ladder.size() < 3) {
        throw std::invalid_argument("verification needs a ladder of at least three system sizes");
    }
    for (std::size_t k = 0; k + 1 < options.n_ladder.size(); ++k) {
        if (options.n_ladder[k] >= options.n_ladder[k + 1]) {
            throw std::invalid_argument("ladder system sizes must be strictly increasing");
        }
    }
    if (options.n_ladder.front() == 0) {
        throw std::invalid_argument("ladder system sizes must be positive");
    }
}

}  // namespace

std::vector<CriterionResult> run_verification(const VerifyOptions& options) {
    validate_options(options);
    std::vector<CriterionResult> results;
    results.push_back(run_criterion(options, "coefficient-consistency",
                                    [&] { return check_coefficient_consistency(); }));
    results.push_back(run_criterion(options, "reference-model-agreement",
                                    [&] { return check_reference_model(options); }));
    results.push_back(run_criterion(options, "compensator-identity",
                                    [&] { return check_compensator_identity(options); }));

    std::vector<RungData> ladder;
    try {
        ladder = run_ladder(options);
    } catch (const std::exception& error) {
        const std::string detail = std::string("error: ") + error.what();
        for (const char* name : {"difference-collapse", "marginal-convergence",
                                 "quadratic-mean-reversion", "leverage-correlation"}) {
            results.push_back(CriterionResult{name, false, detail});
        }
        ladder.clear();
    }
    if (!ladder.empty()) {
        results.push_back(run_criterion(options, "difference-collapse",
                                        [&] { return check_difference_collapse(ladder); }));
        results.push_back(run_criterion(options, "marginal-convergence", [&] {
            return check_marginal_convergence(options, ladder);
        }));
        results.push_back(run_criterion(options, "quadratic-mean-reversion", [&] {
            return check_mean_reversion(options, ladder.back());
        }));
        results.push_back(run_criterion(options, "leverage-correlation",
                                        [&] { return check_leverage(options, ladder); }));
        ladder.clear();
    }

    results.push_back(run_criterion(options, "boundary-classification",
                                    [&] { return check_boundary_classification(); }));
    results.push_back(run_criterion(options, "determinism",
                                    [&] { return check_determinism(options); }));
    return results;
}

std::string format_criterion_line(const CriterionResult& result) {
    return (result.pass ? "PASS " : "FAIL ") + result.name + ": " + result.detail;
}

void write_verification_summary(const std::filesystem::path& path,
                                std::span<const CriterionResult> results) {
    std::string body = "criterion,status,value,target,band,detail\n";
    for (const auto& result : results) {
        body += result.name;
        body += result.pass ? ",PASS," : ",FAIL,";
        for (const double field : {result.value, result.target, result.band}) {
            if (!std::isnan(field)) {
                body += format_numeric(field);
            }
            body += ',';
        }
        body += '"';
        for (const char c : result.detail) {
            body += c;
            if (c == '"') {
                body += '"';
            }
        }
        body += "\"\n";
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw CsvWriteError(path.string() + ": cannot open for writing");
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) {
        throw CsvWriteError(path.string() + ": write failed");
    }
}

}  // namespace critical_hawkes
