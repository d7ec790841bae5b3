#include "critical_hawkes/params.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace ch = critical_hawkes;

namespace {

ch::ModelConfig desk_config() {
    ch::ModelConfig config;
    config.n_agents = 1000;
    config.intensity = ch::saturating_exponential(1.0, 1.0);
    config.agents = ch::AgentLaw::homogeneous(2.0, 0.5);
    config.signal = {1.0, 1.0, 1.0, 1.0};
    return config;
}

}  // namespace

TEST(CriticalAlpha, MatchesKnownValues) {
    EXPECT_DOUBLE_EQ(ch::critical_alpha(ch::saturating_exponential(1.0, 1.0),
                                        ch::AgentLaw::homogeneous(2.0, 0.5)),
                     2.0);
    EXPECT_DOUBLE_EQ(ch::critical_alpha(ch::saturating_exponential(1.0, 3.0),
                                        ch::AgentLaw::homogeneous(1.0, 0.0)),
                     1.0);
    const auto law = ch::AgentLaw::inhomogeneous({{1.0, 1.0, 0.5}, {3.0, 0.5, 0.5}});
    EXPECT_DOUBLE_EQ(ch::critical_alpha(ch::saturating_exponential(2.0, 1.0), law), 4.5);
}

TEST(LimitParams, SymmetricUnitCase) {
    auto config = desk_config();
    config.agents = ch::AgentLaw::homogeneous(1.0, 1.0);
    const ch::LimitSdeParams lp = ch::limit_params(config);
    EXPECT_NEAR(lp.sigma_pi, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(lp.alpha_y, 1.0, 1e-15);
    EXPECT_NEAR(lp.sigma_y, std::sqrt(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(lp.rho, 0.0);
    EXPECT_DOUBLE_EQ(lp.y0, 2.0);
    EXPECT_DOUBLE_EQ(lp.pi0, 0.0);
    EXPECT_DOUBLE_EQ(lp.beta_y, 2.0);
    EXPECT_DOUBLE_EQ(lp.theta_y, 0.0);
}

TEST(LimitParams, DeskCase) {
    const ch::LimitSdeParams lp = ch::limit_params(desk_config());
    EXPECT_NEAR(lp.sigma_pi, 1.8856180831641267, 1e-15);
    EXPECT_DOUBLE_EQ(lp.beta_pi, 0.0);
    EXPECT_DOUBLE_EQ(lp.beta_y, 2.0);
    EXPECT_NEAR(lp.alpha_y, 1.0, 1e-15);
    EXPECT_NEAR(lp.sigma_y, 1.4907119849998598, 1e-15);
    EXPECT_NEAR(lp.rho, -0.23717082451262844, 1e-15);
    EXPECT_DOUBLE_EQ(lp.y0, 2.0);
    EXPECT_DOUBLE_EQ(lp.pi0, 0.0);
    EXPECT_DOUBLE_EQ(lp.f_prime0, 1.0);
    EXPECT_DOUBLE_EQ(lp.f_second0, -1.0);
}

TEST(LimitParams, BetaOneHasNoLeverage) {
    for (double gamma : {0.1, 0.3, 0.7, 1.0}) {
        auto config = desk_config();
        config.agents = ch::AgentLaw::homogeneous(1.0, gamma);
        EXPECT_DOUBLE_EQ(ch::limit_params(config).rho, 0.0) << "gamma=" << gamma;
    }
}

TEST(LimitParams, FullHerdingLeverage) {
    auto config = desk_config();
    config.agents = ch::AgentLaw::homogeneous(3.0, 1.0);
    EXPECT_NEAR(ch::limit_params(config).rho, -0.44721359549995793, 1e-15);
}

TEST(LimitParams, SymmetricSignalInitialCondition) {
    for (double a : {0.25, 1.0, 3.0}) {
        auto config = desk_config();
        config.signal = {a, a, 0.5, 0.5};
        const ch::LimitSdeParams lp = ch::limit_params(config);
        const double bg = 2.0 * 0.5;
        EXPECT_NEAR(lp.y0, (1.0 + bg) * a, 1e-14);
        EXPECT_DOUBLE_EQ(lp.pi0, 0.0);
    }
}

TEST(LimitParams, SelfExcitingThetaY) {
    auto config = desk_config();
    config.agents = ch::AgentLaw::self_exciting(2.0, 0.5, 1.0);
    const ch::LimitSdeParams lp = ch::limit_params(config);
    EXPECT_DOUBLE_EQ(lp.theta_y, 2.0);

    config.agents = ch::AgentLaw::self_exciting(2.0, 0.5, 0.25);
    EXPECT_DOUBLE_EQ(ch::limit_params(config).theta_y, 0.5);
}

TEST(LimitParams, SelfExcitingVanishingKappaMatchesHomogeneous) {
    auto homogeneous = desk_config();
    auto self_exciting = desk_config();
    self_exciting.agents = ch::AgentLaw::self_exciting(2.0, 0.5, 1e-13);
    const ch::LimitSdeParams a = ch::limit_params(homogeneous);
    const ch::LimitSdeParams b = ch::limit_params(self_exciting);
    EXPECT_DOUBLE_EQ(a.beta_pi, b.beta_pi);
    EXPECT_DOUBLE_EQ(a.sigma_pi, b.sigma_pi);
    EXPECT_DOUBLE_EQ(a.beta_y, b.beta_y);
    EXPECT_DOUBLE_EQ(a.alpha_y, b.alpha_y);
    EXPECT_DOUBLE_EQ(a.sigma_y, b.sigma_y);
    EXPECT_DOUBLE_EQ(a.rho, b.rho);
    EXPECT_DOUBLE_EQ(a.y0, b.y0);
    EXPECT_DOUBLE_EQ(a.pi0, b.pi0);
    EXPECT_LE(std::abs(b.theta_y), 1e-12);
}

TEST(LimitParams, HomogeneousEqualsSingleAtom) {
    for (double beta : {1.0, 1.5, 2.0, 3.0, 10.0, 100.0}) {
        for (double gamma : {0.01, 0.25, 0.5, 0.75, 1.0}) {
            auto homogeneous = desk_config();
            homogeneous.agents = ch::AgentLaw::homogeneous(beta, gamma);
            homogeneous.signal = {1.0, 0.5, 0.25, 2.0};
            auto single_atom = homogeneous;
            single_atom.agents = ch::AgentLaw::inhomogeneous({{beta, gamma, 1.0}});
            const ch::LimitSdeParams a = ch::limit_params(homogeneous);
            const ch::LimitSdeParams b = ch::limit_params(single_atom);
            const double tol = 1e-14;
            EXPECT_NEAR(a.beta_pi, b.beta_pi, tol * std::max(1.0, std::abs(a.beta_pi)));
            EXPECT_NEAR(a.sigma_pi, b.sigma_pi, tol * std::max(1.0, a.sigma_pi));
            EXPECT_NEAR(a.beta_y, b.beta_y, tol * std::max(1.0, a.beta_y));
            EXPECT_NEAR(a.alpha_y, b.alpha_y, tol * std::max(1.0, a.alpha_y));
            EXPECT_NEAR(a.sigma_y, b.sigma_y, tol * std::max(1.0, a.sigma_y));
            EXPECT_NEAR(a.rho, b.rho, tol);
            EXPECT_NEAR(a.y0, b.y0, tol * std::max(1.0, a.y0));
            EXPECT_NEAR(a.pi0, b.pi0, tol * std::max(1.0, std::abs(a.pi0)));
        }
    }
}

TEST(LimitParams, CorrelationStaysInLeverageBand) {
    const double lower = -1.0 / std::sqrt(2.0);
    for (double beta : {1.0, 1.2, 2.0, 5.0, 20.0, 100.0}) {
        for (double gamma : {1e-3, 0.1, 0.4, 0.8, 1.0}) {
            auto config = desk_config();
            config.agents = ch::AgentLaw::homogeneous(beta, gamma);
            const double rho = ch::limit_params(config).rho;
            EXPECT_GT(rho, lower) << "beta=" << beta << " gamma=" << gamma;
            EXPECT_LE(rho, 0.0) << "beta=" << beta << " gamma=" << gamma;
        }
    }
}

TEST(LimitParams, RejectsNonCriticalAlpha) {
    auto config = desk_config();
    config.alpha_override = 2.0 * (1.0 + 1e-9);
    EXPECT_THROW((void)ch::limit_params(config), ch::NonCriticalAlpha);
    config.alpha_override = 2.0 * (1.0 + 1e-13);
    EXPECT_NO_THROW((void)ch::limit_params(config));
}

TEST(LimitParams, RejectsLinearReference) {
    auto config = desk_config();
    config.intensity = ch::linear_reference(1.0);
    EXPECT_THROW((void)ch::limit_params(config), ch::UnsupportedIntensity);
}

TEST(LimitParams, RejectsZeroMeanGamma) {
    auto config = desk_config();
    config.agents = ch::AgentLaw::homogeneous(2.0, 0.0);
    config.alpha_override = 1.0;
    EXPECT_THROW((void)ch::limit_params(config), ch::UnsupportedAgentLaw);
}

TEST(Intensity, SaturatingExponentialShape) {
    const ch::IntensityFn f = ch::saturating_exponential(1.5, 2.0);
    EXPECT_DOUBLE_EQ(f.value(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(f.value(0.0), 0.0);
    EXPECT_NEAR(f.value(2.0), 1.5 * 2.0 * (1.0 - std::exp(-1.0)), 1e-15);
    EXPECT_DOUBLE_EQ(f.derivative_at_zero(), 1.5);
    EXPECT_DOUBLE_EQ(f.second_derivative_at_zero(), -0.75);
    EXPECT_DOUBLE_EQ(f.supremum(), 3.0);
}

TEST(Intensity, LinearReferenceShape) {
    const ch::IntensityFn f = ch::linear_reference(2.0);
    EXPECT_DOUBLE_EQ(f.value(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(f.value(3.0), 6.0);
    EXPECT_DOUBLE_EQ(f.derivative_at_zero(), 2.0);
    EXPECT_DOUBLE_EQ(f.second_derivative_at_zero(), 0.0);
    EXPECT_TRUE(std::isinf(f.supremum()));
}

TEST(Intensity, ConcaveBelowTangentAndLipschitz) {
    for (const ch::IntensityFn& f :
         {ch::saturating_exponential(1.0, 1.0), ch::saturating_exponential(2.0, 0.3),
          ch::linear_reference(1.7)}) {
        const double fp = f.derivative_at_zero();
        double prev_x = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            const double x = 5.0 * static_cast<double>(k) / 1000.0;
            EXPECT_LE(f.value(x), fp * x * (1.0 + 1e-12) + 1e-15);
            EXPECT_LE(std::abs(f.value(x) - f.value(prev_x)),
                      fp * (x - prev_x) + 1e-12 * std::max(1.0, fp * x));
            prev_x = x;
        }
    }
}

TEST(Intensity, DerivativesMatchFiniteDifferences) {
    // One-sided second-order stencils: f vanishes left of the origin, so the
    // derivative being checked is the right-derivative.
    for (const ch::IntensityFn& f :
         {ch::saturating_exponential(1.0, 1.0), ch::saturating_exponential(3.0, 0.5)}) {
        const double h = 1e-5;
        const double d1 = (-3.0 * f.value(0.0) + 4.0 * f.value(h) - f.value(2.0 * h)) / (2.0 * h);
        const double d2 =
            (2.0 * f.value(0.0) - 5.0 * f.value(h) + 4.0 * f.value(2.0 * h) - f.value(3.0 * h)) /
            (h * h);
        EXPECT_NEAR(d1, f.derivative_at_zero(), 1e-6 * std::abs(f.derivative_at_zero()));
        EXPECT_NEAR(d2, f.second_derivative_at_zero(),
                    1e-6 * std::abs(f.second_derivative_at_zero()));
    }
}

TEST(AgentLaw, ValidationRejectsBadParameters) {
    EXPECT_THROW((void)ch::AgentLaw::homogeneous(0.5, 0.5), std::invalid_argument);
    EXPECT_THROW((void)ch::AgentLaw::homogeneous(2.0, 1.5), std::invalid_argument);
    EXPECT_THROW((void)ch::AgentLaw::homogeneous(2.0, -0.1), std::invalid_argument);
    EXPECT_THROW((void)ch::AgentLaw::self_exciting(2.0, 0.5, 0.0), std::invalid_argument);
    EXPECT_THROW((void)ch::AgentLaw::inhomogeneous({}), std::invalid_argument);
    EXPECT_THROW((void)ch::AgentLaw::inhomogeneous({{2.0, 0.5, 0.7}, {1.0, 1.0, 0.2}}),
                 std::invalid_argument);
    EXPECT_THROW((void)ch::AgentLaw::inhomogeneous({{2.0, 0.5, 1.2}, {1.0, 1.0, -0.2}}),
                 std::invalid_argument);
    EXPECT_NO_THROW((void)ch::AgentLaw::inhomogeneous({{2.0, 0.5, 0.5}, {1.0, 1.0, 0.5}}));
}

TEST(AgentLaw, IntensityValidation) {
    EXPECT_THROW((void)ch::saturating_exponential(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW((void)ch::saturating_exponential(1.0, -1.0), std::invalid_argument);
    EXPECT_THROW((void)ch::linear_reference(-2.0), std::invalid_argument);
}

TEST(AgentLaw, ConfigValidation) {
    auto config = desk_config();
    config.signal.b_minus = -0.5;
    EXPECT_THROW(ch::validate(config), std::invalid_argument);
    config = desk_config();
    config.n_agents = 0;
    EXPECT_THROW(ch::validate(config), std::invalid_argument);
    config = desk_config();
    config.horizon_macro = 0.0;
    EXPECT_THROW(ch::validate(config), std::invalid_argument);
    config = desk_config();
    config.alpha_override = -1.0;
    EXPECT_THROW(ch::validate(config), std::invalid_argument);
    EXPECT_NO_THROW(ch::validate(desk_config()));
}

TEST(Population, LargestRemainderCounts) {
    const auto law = ch::AgentLaw::inhomogeneous({{1.0, 1.0, 0.5}, {3.0, 0.5, 0.5}});
    EXPECT_EQ(ch::atom_counts(law, 4), (std::vector<std::size_t>{2, 2}));
    EXPECT_EQ(ch::atom_counts(law, 3), (std::vector<std::size_t>{2, 1}));

    const auto thirds = ch::AgentLaw::inhomogeneous(
        {{1.0, 1.0, 1.0 / 3.0}, {2.0, 0.5, 1.0 / 3.0}, {3.0, 0.25, 1.0 / 3.0}});
    EXPECT_EQ(ch::atom_counts(thirds, 10), (std::vector<std::size_t>{4, 3, 3}));
    const auto counts = ch::atom_counts(thirds, 100001);
    EXPECT_EQ(counts[0] + counts[1] + counts[2], 100001u);
}

TEST(Population, EmpiricalAveragesApproachLaw) {
    const auto law = ch::AgentLaw::inhomogeneous({{1.0, 1.0, 0.4}, {3.0, 0.5, 0.6}});
    const ch::PopulationAverages exact = ch::law_averages(law);
    for (std::size_t n : {7u, 100u, 999u, 10000u}) {
        const ch::PopulationAverages emp = ch::empirical_averages(law, n);
        const double bound = 1.5 * 2.0 / static_cast<double>(n);
        EXPECT_NEAR(emp.beta_gamma_bar, exact.beta_gamma_bar, bound);
        EXPECT_NEAR(emp.gamma_bar, exact.gamma_bar, bound);
    }
    const ch::PopulationAverages law_only = ch::empirical_averages(law, 1000000);
    EXPECT_NEAR(law_only.beta_gamma_bar, exact.beta_gamma_bar, 1e-5);
}

TEST(ModelConfig, EffectiveAlphaAndHorizon) {
    auto config = desk_config();
    EXPECT_DOUBLE_EQ(config.effective_alpha(), 2.0);
    config.alpha_override = 3.5;
    EXPECT_DOUBLE_EQ(config.effective_alpha(), 3.5);
    config.n_agents = 2;
    config.horizon_macro = std::sqrt(2.0);
    EXPECT_NEAR(config.micro_horizon(), 2.0, 1e-15);
}
