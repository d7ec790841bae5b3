#include "critical_hawkes/hawkes_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "critical_hawkes/params.hpp"
#include "critical_hawkes/rng.hpp"

namespace ch = critical_hawkes;

namespace {

ch::ModelConfig desk_homogeneous(std::size_t n_agents) {
    ch::ModelConfig config;
    config.n_agents = n_agents;
    config.intensity = ch::saturating_exponential(1.0, 1.0);
    config.agents = ch::AgentLaw::homogeneous(2.0, 0.5);
    config.signal = {1.0, 1.0, 1.0, 1.0};
    config.horizon_macro = 1.0;
    config.grid_points = 64;
    return config;
}

ch::ModelConfig desk_inhomogeneous(std::size_t n_agents) {
    ch::ModelConfig config = desk_homogeneous(n_agents);
    config.agents = ch::AgentLaw::inhomogeneous({{1.5, 0.4, 0.5}, {3.0, 0.8, 0.5}});
    return config;
}

ch::ModelConfig desk_self_exciting(std::size_t n_agents) {
    ch::ModelConfig config = desk_homogeneous(n_agents);
    config.agents = ch::AgentLaw::self_exciting(2.0, 0.5, 0.25);
    return config;
}

struct ReplaySeries {
    std::vector<double> m_plus;
    std::vector<double> m_minus;
    std::vector<std::int64_t> count_diff;
    std::vector<std::uint64_t> count_sum;
};

/// Rebuild the grid series from the event list alone, composing the
/// closed-form zero-jump flow with unit jumps of size 1/N. Grid samples are
/// left limits, so events exactly at a grid time are excluded.
ReplaySeries replay_from_events(const ch::HawkesPathRecord& record) {
    const ch::ModelConfig& config = record.config;
    const double sqrt_n = std::sqrt(static_cast<double>(config.n_agents));
    const double inv_n = 1.0 / static_cast<double>(config.n_agents);
    const double alpha = config.effective_alpha();
    const double fp_plus = config.signal.b_plus * inv_n / alpha;
    const double fp_minus = config.signal.b_minus * inv_n / alpha;
    double mp = config.signal.a_plus / sqrt_n;
    double mm = config.signal.a_minus / sqrt_n;
    double t_last = 0.0;
    std::uint64_t count_plus = 0;
    std::uint64_t count_minus = 0;
    std::size_t next_event = 0;
    ReplaySeries out;
    for (double tg_macro : record.grid) {
        const double tg = tg_macro * sqrt_n;
        while (next_event < record.events.size() &&
               record.events[next_event].t_micro < tg) {
            const ch::EventRecord& ev = record.events[next_event];
            mp = ch::inter_event_flow(mp, fp_plus, alpha, ev.t_micro - t_last);
            mm = ch::inter_event_flow(mm, fp_minus, alpha, ev.t_micro - t_last);
            t_last = ev.t_micro;
            if (ev.sign == ch::OrderSign::Buy) {
                mp += inv_n;
                ++count_plus;
            } else {
                mm += inv_n;
                ++count_minus;
            }
            ++next_event;
        }
        out.m_plus.push_back(ch::inter_event_flow(mp, fp_plus, alpha, tg - t_last));
        out.m_minus.push_back(ch::inter_event_flow(mm, fp_minus, alpha, tg - t_last));
        out.count_diff.push_back(static_cast<std::int64_t>(count_plus) -
                                 static_cast<std::int64_t>(count_minus));
        out.count_sum.push_back(count_plus + count_minus);
    }
    return out;
}

void expect_record_replays(const ch::HawkesPathRecord& record, double tol) {
    ASSERT_EQ(record.events.size(), record.n_events);
    const ReplaySeries replayed = replay_from_events(record);
    ASSERT_EQ(record.m_plus.size(), record.grid.size());
    ASSERT_EQ(record.m_minus.size(), record.grid.size());
    ASSERT_EQ(record.count_diff.size(), record.grid.size());
    ASSERT_EQ(record.count_sum.size(), record.grid.size());
    for (std::size_t k = 0; k < record.grid.size(); ++k) {
        EXPECT_NEAR(record.m_plus[k], replayed.m_plus[k], tol) << "grid index " << k;
        EXPECT_NEAR(record.m_minus[k], replayed.m_minus[k], tol) << "grid index " << k;
        EXPECT_EQ(record.count_diff[k], replayed.count_diff[k]) << "grid index " << k;
        EXPECT_EQ(record.count_sum[k], replayed.count_sum[k]) << "grid index " << k;
    }
}

void expect_event_stream_valid(const ch::HawkesPathRecord& record) {
    const double horizon = record.config.micro_horizon();
    double prev = 0.0;
    for (const ch::EventRecord& ev : record.events) {
        EXPECT_GT(ev.t_micro, prev);
        EXPECT_LT(ev.t_micro, horizon);
        EXPECT_LT(ev.agent_id, record.config.n_agents);
        prev = ev.t_micro;
    }
    for (double m : record.m_plus) {
        EXPECT_GE(m, 0.0);
    }
    for (double m : record.m_minus) {
        EXPECT_GE(m, 0.0);
    }
    EXPECT_EQ(record.count_sum.back(), record.n_events);
    EXPECT_EQ(record.n_accepted, record.n_events);
    EXPECT_GE(record.n_proposals, record.n_accepted);
}

TEST(InterEventFlow, MatchesClosedForm) {
    EXPECT_DOUBLE_EQ(ch::inter_event_flow(2.0, 0.5, 1.5, 0.8),
                     0.5 + 1.5 * std::exp(-1.2));
    EXPECT_DOUBLE_EQ(ch::inter_event_flow(2.0, 0.5, 1.5, 0.0), 2.0);
    EXPECT_NEAR(ch::inter_event_flow(2.0, 0.5, 1.5, 600.0), 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(ch::inter_event_flow(0.5, 0.5, 3.0, 1.0), 0.5);
}

TEST(ComponentIntensities, HandComputedInhomogeneousRates) {
    ch::ModelConfig config = desk_inhomogeneous(4);
    config.agents = ch::AgentLaw::inhomogeneous({{1.0, 0.5, 0.5}, {2.0, 1.0, 0.5}});
    ch::SufficientState state;
    state.m_plus = 0.2;
    state.m_minus = 0.1;
    const auto rates = ch::component_intensities(config, state);
    ASSERT_EQ(rates.size(), 4u);
    // Group 0: beta*gamma = 0.5, sell weight 1 + (beta-1)*gamma = 1.
    EXPECT_DOUBLE_EQ(rates[0], 2.0 * -std::expm1(-(0.2 + 0.5 * 0.1)));
    // Group 1: beta*gamma = 2, sell weight 2.
    EXPECT_DOUBLE_EQ(rates[1], 2.0 * -std::expm1(-(0.2 + 2.0 * 0.1)));
    EXPECT_DOUBLE_EQ(rates[2], 2.0 * -std::expm1(-(0.5 * 0.2 + 1.0 * 0.1)));
    EXPECT_DOUBLE_EQ(rates[3], 2.0 * -std::expm1(-(1.0 * 0.2 + 2.0 * 0.1)));
}

TEST(ComponentIntensities, HandComputedSelfExcitingRates) {
    ch::ModelConfig config;
    config.n_agents = 2;
    config.intensity = ch::saturating_exponential(1.0, 1.0);
    config.agents = ch::AgentLaw::self_exciting(2.0, 0.5, 0.25);
    config.signal = {1.0, 0.5, 0.3, 0.7};

    const double sqrt_n = std::sqrt(2.0);
    const double alpha = 2.0;  // f'(0) * (1 + beta * gamma)
    ch::SufficientState state;
    state.m_plus = 0.9;
    state.m_minus = 0.3;
    state.t_micro = 0.4;
    std::vector<ch::AgentState> agents{{1.2, 0.0, 0.1}, {0.0, 2.0, 0.25}};

    const auto rates = ch::component_intensities(config, state, agents);
    ASSERT_EQ(rates.size(), 4u);

    const double fp_p = 0.3 / 2.0 / alpha;
    const double fp_m = 0.7 / 2.0 / alpha;
    const double base_p = fp_p + (1.0 / sqrt_n - fp_p) * std::exp(-alpha * 0.4);
    const double base_m = fp_m + (0.5 / sqrt_n - fp_m) * std::exp(-alpha * 0.4);
    const double kscale = 0.25 / sqrt_n;
    const double bg = 1.0;   // beta * gamma
    const double om = 1.5;   // 1 + (beta - 1) * gamma
    const double xp0 = base_p + 1.2 * std::exp(-alpha * (0.4 - 0.1));
    const double xm0 = base_m;
    const double xp1 = base_p;
    const double xm1 = base_m + 2.0 * std::exp(-alpha * (0.4 - 0.25));
    auto f = [](double x) { return -std::expm1(-x); };
    EXPECT_DOUBLE_EQ(rates[0], f(0.9 + bg * 0.3 + kscale * (xp0 + bg * xm0)));
    EXPECT_DOUBLE_EQ(rates[1], f(0.9 + bg * 0.3 + kscale * (xp1 + bg * xm1)));
    EXPECT_DOUBLE_EQ(rates[2], f(0.5 * 0.9 + om * 0.3 + kscale * (0.5 * xp0 + om * xm0)));
    EXPECT_DOUBLE_EQ(rates[3], f(0.5 * 0.9 + om * 0.3 + kscale * (0.5 * xp1 + om * xm1)));
}

TEST(ComponentIntensities, SelfExcitingNeedsAgentStates) {
    const ch::ModelConfig config = desk_self_exciting(3);
    ch::SufficientState state;
    EXPECT_THROW((void)ch::component_intensities(config, state), std::invalid_argument);
    std::vector<ch::AgentState> wrong_count(2);
    EXPECT_THROW((void)ch::component_intensities(config, state, wrong_count),
                 std::invalid_argument);
}

TEST(RejectionBound, DominatesIntensitiesAlongTheZeroJumpFlow) {
    const ch::ModelConfig config = desk_inhomogeneous(7);
    const double sqrt_n = std::sqrt(7.0);
    const double alpha = config.effective_alpha();
    const double fp_plus = config.signal.b_plus / 7.0 / alpha;
    const double fp_minus = config.signal.b_minus / 7.0 / alpha;

    const std::vector<ch::SufficientState> anchors = {
        {1.0 / sqrt_n, 1.0 / sqrt_n, 0, 0, 0.0},  // initial mass above the fixed point
        {0.1 * fp_plus, 0.2 * fp_minus, 0, 0, 0.0},  // below: flow increases
        {3.0, 0.001, 0, 0, 0.0},
    };
    for (const ch::SufficientState& anchor : anchors) {
        const double bound = ch::rejection_bound(config, anchor);
        for (double dt : {0.0, 0.05, 0.1, 0.2, 0.35, 0.5}) {
            ch::SufficientState flowed = anchor;
            flowed.m_plus = ch::inter_event_flow(anchor.m_plus, fp_plus, alpha, dt);
            flowed.m_minus = ch::inter_event_flow(anchor.m_minus, fp_minus, alpha, dt);
            double total = 0.0;
            for (double rate : ch::component_intensities(config, flowed)) {
                total += rate;
            }
            EXPECT_LE(total, bound * (1.0 + 1e-12)) << "dt = " << dt;
        }
    }
}

TEST(SimulatePath, HomogeneousGridReplaysFromEvents) {
    const ch::ModelConfig config = desk_homogeneous(3);
    const auto record = ch::simulate_path(config, ch::replica_seed(7, 0));
    EXPECT_GT(record.n_events, 0u);
    expect_record_replays(record, 1e-12);
    expect_event_stream_valid(record);
    ASSERT_EQ(record.intensity_integral_plus.size(), record.grid.size());
    ASSERT_EQ(record.intensity_integral_minus.size(), record.grid.size());
}

TEST(SimulatePath, InhomogeneousGridReplaysFromEvents) {
    const ch::ModelConfig config = desk_inhomogeneous(5);
    const auto record = ch::simulate_path(config, ch::replica_seed(11, 3));
    EXPECT_GT(record.n_events, 0u);
    expect_record_replays(record, 1e-12);
    expect_event_stream_valid(record);
}

TEST(SimulatePath, SelfExcitingGridReplaysFromEvents) {
    const ch::ModelConfig config = desk_self_exciting(3);
    const auto record = ch::simulate_path(config, ch::replica_seed(13, 5));
    EXPECT_GT(record.n_events, 0u);
    expect_record_replays(record, 1e-12);
    expect_event_stream_valid(record);
    EXPECT_TRUE(record.intensity_integral_plus.empty());
    EXPECT_TRUE(record.intensity_integral_minus.empty());
}

TEST(SimulatePath, InitialGridSampleCarriesTheSignalMass) {
    for (const ch::ModelConfig& config :
         {desk_homogeneous(10), desk_inhomogeneous(10), desk_self_exciting(10)}) {
        const auto record = ch::simulate_path(config, 99);
        const double sqrt_n = std::sqrt(10.0);
        EXPECT_DOUBLE_EQ(record.grid[0], 0.0);
        EXPECT_DOUBLE_EQ(record.m_plus[0], 1.0 / sqrt_n);
        EXPECT_DOUBLE_EQ(record.m_minus[0], 1.0 / sqrt_n);
        EXPECT_EQ(record.count_diff[0], 0);
        EXPECT_EQ(record.count_sum[0], 0u);
        EXPECT_DOUBLE_EQ(record.grid.back(), config.horizon_macro);
    }
}

TEST(SimulatePath, CompensatorResidualIsCenteredAcrossReplicas) {
    ch::ModelConfig config = desk_homogeneous(50);
    ch::EngineOptions options;
    options.record_events = false;
    const std::size_t n_replicas = 400;
    const std::size_t mid = config.grid_points / 2;
    double sum_plus = 0.0, sumsq_plus = 0.0;
    double sum_minus = 0.0, sumsq_minus = 0.0;
    double sum_mid = 0.0, sumsq_mid = 0.0;
    for (std::size_t r = 0; r < n_replicas; ++r) {
        const auto record = ch::simulate_path(config, ch::replica_seed(20260816, r), options);
        const double inv_n = 1.0 / static_cast<double>(config.n_agents);
        const auto count_plus = static_cast<double>(
            (static_cast<std::int64_t>(record.count_sum.back()) + record.count_diff.back()) / 2);
        const auto count_minus = static_cast<double>(
            (static_cast<std::int64_t>(record.count_sum.back()) - record.count_diff.back()) / 2);
        const double r_plus = count_plus * inv_n - record.intensity_integral_plus.back();
        const double r_minus = count_minus * inv_n - record.intensity_integral_minus.back();
        const auto count_plus_mid = static_cast<double>(
            (static_cast<std::int64_t>(record.count_sum[mid]) + record.count_diff[mid]) / 2);
        const double r_mid = count_plus_mid * inv_n - record.intensity_integral_plus[mid];
        sum_plus += r_plus;
        sumsq_plus += r_plus * r_plus;
        sum_minus += r_minus;
        sumsq_minus += r_minus * r_minus;
        sum_mid += r_mid;
        sumsq_mid += r_mid * r_mid;
    }
    const auto n = static_cast<double>(n_replicas);
    const auto check = [n](double sum, double sumsq, const char* label) {
        const double mean = sum / n;
        const double var = std::max(0.0, sumsq / n - mean * mean);
        const double se = std::sqrt(var / n);
        EXPECT_LE(std::abs(mean), 4.0 * se + 1e-12) << label;
        EXPECT_GT(se, 0.0) << label;
    };
    check(sum_plus, sumsq_plus, "buy residual at horizon");
    check(sum_minus, sumsq_minus, "sell residual at horizon");
    check(sum_mid, sumsq_mid, "buy residual at mid grid");
}

TEST(SimulatePath, IdenticalSeedsReproduceIdenticalPaths) {
    for (const ch::ModelConfig& config : {desk_homogeneous(20), desk_self_exciting(20)}) {
        const auto a = ch::simulate_path(config, 1234);
        const auto b = ch::simulate_path(config, 1234);
        ASSERT_EQ(a.n_events, b.n_events);
        ASSERT_EQ(a.n_proposals, b.n_proposals);
        ASSERT_EQ(a.events.size(), b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            EXPECT_EQ(a.events[i].t_micro, b.events[i].t_micro);
            EXPECT_EQ(a.events[i].agent_id, b.events[i].agent_id);
            EXPECT_EQ(a.events[i].sign, b.events[i].sign);
        }
        for (std::size_t k = 0; k < a.grid.size(); ++k) {
            EXPECT_EQ(a.m_plus[k], b.m_plus[k]);
            EXPECT_EQ(a.m_minus[k], b.m_minus[k]);
        }

        const auto c = ch::simulate_path(config, 1235);
        const bool same_counts = c.n_events == a.n_events;
        bool same_first_event = same_counts && a.n_events > 0 &&
                                c.events[0].t_micro == a.events[0].t_micro;
        EXPECT_FALSE(same_counts && same_first_event);
    }
}

TEST(SimulatePath, AcceptanceRateStaysHealthyAtDeskScale) {
    ch::ModelConfig config = desk_homogeneous(1000);
    ch::EngineOptions options;
    options.record_events = false;
    const auto record = ch::simulate_path(config, 42, options);
    EXPECT_GT(record.n_events, 100u);
    const double acceptance = static_cast<double>(record.n_accepted) /
                              static_cast<double>(record.n_proposals);
    EXPECT_GT(acceptance, 0.2);
}

TEST(SimulatePath, EventBudgetIsEnforced) {
    const ch::ModelConfig config = desk_homogeneous(100);
    ch::EngineOptions options;
    options.event_budget = 10;
    EXPECT_THROW((void)ch::simulate_path(config, 5, options), ch::EventBudgetExceeded);
}

TEST(SimulatePath, RetentionCapLimitsStorageNotCounting) {
    const ch::ModelConfig config = desk_homogeneous(100);
    ch::EngineOptions options;
    options.max_recorded_events = 5;
    const auto record = ch::simulate_path(config, 5, options);
    EXPECT_EQ(record.events.size(), 5u);
    EXPECT_GT(record.n_events, 5u);
    EXPECT_EQ(record.count_sum.back(), record.n_events);
}

TEST(SimulatePath, ZeroSignalStaysSilent) {
    for (ch::ModelConfig config :
         {desk_homogeneous(10), desk_inhomogeneous(10), desk_self_exciting(10)}) {
        config.signal = {0.0, 0.0, 0.0, 0.0};
        const auto record = ch::simulate_path(config, 77);
        EXPECT_EQ(record.n_events, 0u);
        for (std::size_t k = 0; k < record.grid.size(); ++k) {
            EXPECT_EQ(record.m_plus[k], 0.0);
            EXPECT_EQ(record.m_minus[k], 0.0);
            EXPECT_EQ(record.count_sum[k], 0u);
        }
    }
}

/// Fraction of consecutive event pairs placed by the same agent. The horizon
/// is kept short so the own-history channel stays subcritical and the
/// saturation of the intensity never flattens the per-agent differences.
double repeat_order_rate(double kappa, std::uint64_t master_seed) {
    ch::ModelConfig config;
    config.n_agents = 20;
    config.intensity = ch::saturating_exponential(1.0, 4.0);
    config.agents = ch::AgentLaw::self_exciting(2.0, 0.5, kappa);
    config.signal = {1.0, 1.0, 1.0, 1.0};
    config.horizon_macro = 0.5;
    config.grid_points = 16;
    std::uint64_t repeats = 0;
    std::uint64_t pairs = 0;
    for (std::uint64_t r = 0; r < 300; ++r) {
        const auto record = ch::simulate_path(config, ch::replica_seed(master_seed, r));
        for (std::size_t i = 1; i < record.events.size(); ++i) {
            repeats += record.events[i].agent_id == record.events[i - 1].agent_id ? 1 : 0;
            ++pairs;
        }
    }
    EXPECT_GT(pairs, 8000u);
    return static_cast<double>(repeats) / static_cast<double>(pairs);
}

TEST(SimulatePath, SelfExcitationRaisesRepeatOrdersAboveUniformChoice) {
    // With a vanishing own-history weight the acting agent is effectively
    // drawn uniformly, so consecutive orders repeat an agent at rate ~1/N.
    const double null_rate = repeat_order_rate(1e-9, 31);
    EXPECT_NEAR(null_rate, 1.0 / 20.0, 0.008);
    // A strong own-history weight makes an agent's intensity jump after her
    // own orders, lifting the repeat rate above the uniform baseline.
    const double hot_rate = repeat_order_rate(2.0, 31);
    EXPECT_GT(hot_rate, null_rate + 0.005);
}

}  // namespace
