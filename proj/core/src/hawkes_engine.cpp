#include "critical_hawkes/hawkes_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "critical_hawkes/rng.hpp"

namespace critical_hawkes {

namespace {

/// Reactivity weights of one population group. The buy-side argument of the
/// intensity is m+ + bg*m-, the sell-side one gamma*m+ + om*m-.
struct Group {
    double count{0.0};
    double bg{0.0};
    double gamma{0.0};
    double om{0.0};  // 1 + (beta - 1) * gamma
    std::size_t first_agent{0};
    std::size_t n_agents{0};
};

std::vector<Group> make_groups(const ModelConfig& config) {
    std::vector<Group> groups;
    if (config.agents.kind == AgentLawKind::Inhomogeneous) {
        const auto counts = atom_counts(config.agents, config.n_agents);
        std::size_t base = 0;
        for (std::size_t g = 0; g < counts.size(); ++g) {
            const AgentAtom& atom = config.agents.atoms[g];
            Group group;
            group.count = static_cast<double>(counts[g]);
            group.bg = atom.beta * atom.gamma;
            group.gamma = atom.gamma;
            group.om = 1.0 + (atom.beta - 1.0) * atom.gamma;
            group.first_agent = base;
            group.n_agents = counts[g];
            base += counts[g];
            groups.push_back(group);
        }
    } else {
        Group group;
        group.count = static_cast<double>(config.n_agents);
        group.bg = config.agents.beta * config.agents.gamma;
        group.gamma = config.agents.gamma;
        group.om = 1.0 + (config.agents.beta - 1.0) * config.agents.gamma;
        group.first_agent = 0;
        group.n_agents = config.n_agents;
        groups.push_back(group);
    }
    return groups;
}

/// Fenwick (binary indexed) tree over nonnegative component rates with
/// prefix-guided selection, used to pick one of 2N self-exciting components
/// in O(log N).
class RateTree {
public:
    void assign(std::vector<double> leaves) {
        leaves_ = std::move(leaves);
        n_ = leaves_.size();
        tree_.assign(n_ + 1, 0.0);
        for (std::size_t i = 1; i <= n_; ++i) {
            tree_[i] += leaves_[i - 1];
            const std::size_t parent = i + (i & (~i + 1));
            if (parent <= n_) {
                tree_[parent] += tree_[i];
            }
        }
        highbit_ = std::size_t{1};
        while ((highbit_ << 1) <= n_) {
            highbit_ <<= 1;
        }
        total_ = 0.0;
        for (double leaf : leaves_) {
            total_ += leaf;
        }
    }

    void update(std::size_t index, double value) {
        const double delta = value - leaves_[index];
        leaves_[index] = value;
        total_ += delta;
        for (std::size_t i = index + 1; i <= n_; i += i & (~i + 1)) {
            tree_[i] += delta;
        }
    }

    [[nodiscard]] double total() const { return total_; }

    /// First index whose prefix sum exceeds w, along with the residual of w
    /// inside that leaf. Returns n (one past the end) if w exhausts the tree.
    [[nodiscard]] std::pair<std::size_t, double> locate(double w) const {
        std::size_t idx = 0;
        for (std::size_t step = highbit_; step > 0; step >>= 1) {
            const std::size_t next = idx + step;
            if (next <= n_ && tree_[next] <= w) {
                idx = next;
                w -= tree_[next];
            }
        }
        return {idx, w};
    }

private:
    std::vector<double> leaves_{};
    std::vector<double> tree_{};
    std::size_t n_{0};
    std::size_t highbit_{1};
    double total_{0.0};
};

struct CommonSetup {
    double alpha{0.0};
    double sqrt_n{0.0};
    double inv_n{0.0};
    double micro_horizon{0.0};
    double window{0.0};
    double fp_plus{0.0};   // (b^+ / N) / alpha
    double fp_minus{0.0};  // (b^- / N) / alpha
    double a_n_plus{0.0};
    double a_n_minus{0.0};
};

CommonSetup make_setup(const ModelConfig& config) {
    validate(config);
    CommonSetup s;
    s.alpha = config.effective_alpha();
    if (!(s.alpha > 0.0) || !std::isfinite(s.alpha)) {
        throw std::invalid_argument("kernel rate alpha must be positive and finite");
    }
    s.sqrt_n = std::sqrt(static_cast<double>(config.n_agents));
    s.inv_n = 1.0 / static_cast<double>(config.n_agents);
    s.micro_horizon = config.micro_horizon();
    s.window = std::min(1.0 / s.alpha, 0.1 * s.micro_horizon);
    s.fp_plus = config.signal.b_plus * s.inv_n / s.alpha;
    s.fp_minus = config.signal.b_minus * s.inv_n / s.alpha;
    s.a_n_plus = config.signal.a_plus / s.sqrt_n;
    s.a_n_minus = config.signal.a_minus / s.sqrt_n;
    return s;
}

/// Shared bookkeeping for both engine variants: grid allocation, event
/// recording, budget checks.
class PathRecorder {
public:
    PathRecorder(const ModelConfig& config, const CommonSetup& setup, const EngineOptions& options,
                 bool with_compensator)
        : sqrt_n_(setup.sqrt_n), options_(options), with_compensator_(with_compensator) {
        record_.config = config;
        const std::size_t n_grid = config.grid_points;
        record_.grid.resize(n_grid + 1);
        const double macro_step = config.horizon_macro / static_cast<double>(n_grid);
        for (std::size_t k = 0; k < n_grid; ++k) {
            record_.grid[k] = static_cast<double>(k) * macro_step;
        }
        record_.grid[n_grid] = config.horizon_macro;
        record_.m_plus.reserve(n_grid + 1);
        record_.m_minus.reserve(n_grid + 1);
        record_.count_diff.reserve(n_grid + 1);
        record_.count_sum.reserve(n_grid + 1);
        if (with_compensator_) {
            record_.intensity_integral_plus.reserve(n_grid + 1);
            record_.intensity_integral_minus.reserve(n_grid + 1);
        }
    }

    [[nodiscard]] double grid_micro(std::size_t k) const { return record_.grid[k] * sqrt_n_; }
    [[nodiscard]] std::size_t next_grid() const { return next_grid_; }
    [[nodiscard]] std::size_t grid_samples() const { return record_.grid.size(); }

    void emit(double m_plus, double m_minus, std::uint64_t count_plus, std::uint64_t count_minus,
              double integral_plus, double integral_minus) {
        record_.m_plus.push_back(m_plus);
        record_.m_minus.push_back(m_minus);
        record_.count_diff.push_back(static_cast<std::int64_t>(count_plus) -
                                     static_cast<std::int64_t>(count_minus));
        record_.count_sum.push_back(count_plus + count_minus);
        if (with_compensator_) {
            record_.intensity_integral_plus.push_back(integral_plus);
            record_.intensity_integral_minus.push_back(integral_minus);
        }
        ++next_grid_;
    }

    void record_event(double t_micro, std::uint32_t agent_id, OrderSign sign) {
        ++record_.n_events;
        ++record_.n_accepted;
        if (record_.n_events > options_.event_budget) {
            throw EventBudgetExceeded("event budget exceeded; parameterization likely unstable");
        }
        if (options_.record_events && record_.events.size() < options_.max_recorded_events) {
            record_.events.push_back({t_micro, agent_id, sign});
        }
    }

    void count_proposal() { ++record_.n_proposals; }

    [[nodiscard]] HawkesPathRecord take() && { return std::move(record_); }

private:
    double sqrt_n_;
    const EngineOptions& options_;
    bool with_compensator_;
    HawkesPathRecord record_{};
    std::size_t next_grid_{0};
};

/// Exact simulation of the homogeneous / inhomogeneous variants. The state
/// (m+, m-) is Markov; a window-constant dominating rate feeds an
/// accept/reject loop, and the population-mean intensity is integrated with
/// composite Simpson quadrature between state changes.
class GroupedEngine {
public:
    GroupedEngine(const ModelConfig& config, std::uint64_t path_seed, const EngineOptions& options)
        : config_(config),
          setup_(make_setup(config)),
          groups_(make_groups(config)),
          rng_(path_seed),
          recorder_(config, setup_, options, true) {
        m_plus_ = setup_.a_n_plus;
        m_minus_ = setup_.a_n_minus;
    }

    HawkesPathRecord run() {
        while (t_anchor_ < setup_.micro_horizon) {
            run_window();
        }
        flush_grid(setup_.micro_horizon);
        return std::move(recorder_).take();
    }

private:
    /// Sum of buy/sell rates over all groups at the given means.
    [[nodiscard]] std::pair<double, double> total_rates(double mp, double mm) const {
        double plus = 0.0;
        double minus = 0.0;
        for (const Group& g : groups_) {
            plus += g.count * config_.intensity.value(mp + g.bg * mm);
            minus += g.count * config_.intensity.value(g.gamma * mp + g.om * mm);
        }
        return {plus, minus};
    }

    /// Means flowed to offset dt past the anchor, given e = exp(-alpha dt).
    [[nodiscard]] double flow_plus(double e) const {
        return setup_.fp_plus + (m_plus_ - setup_.fp_plus) * e;
    }
    [[nodiscard]] double flow_minus(double e) const {
        return setup_.fp_minus + (m_minus_ - setup_.fp_minus) * e;
    }

    /// Composite Simpson quadrature of the population-mean intensities from
    /// the cursor to `target` (no state change in between). Offsets are
    /// measured from the anchor, where the means are exact.
    void integrate_to(double target) {
        const double from = t_cursor_ - t_anchor_;
        const double to = target - t_anchor_;
        if (to <= from) {
            return;
        }
        const double h_max = 0.25 / setup_.alpha;
        const auto n_sub =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((to - from) / h_max)));
        const double h = (to - from) / static_cast<double>(n_sub);
        auto rates_at = [&](double offset) {
            const double e = std::exp(-setup_.alpha * offset);
            return total_rates(flow_plus(e), flow_minus(e));
        };
        double left = from;
        auto [lp, lm] = rates_at(left);
        for (std::size_t k = 0; k < n_sub; ++k) {
            const double right = (k + 1 == n_sub) ? to : left + h;
            const auto [cp, cm] = rates_at(0.5 * (left + right));
            const auto [rp, rm] = rates_at(right);
            const double w = (right - left) / 6.0;
            integral_plus_ += w * (lp + 4.0 * cp + rp) * setup_.inv_n;
            integral_minus_ += w * (lm + 4.0 * cm + rm) * setup_.inv_n;
            left = right;
            lp = rp;
            lm = rm;
        }
        t_cursor_ = target;
    }

    /// Emit every grid sample with time <= target (left limits), integrating
    /// the compensator up to each grid time along the way.
    void flush_grid(double target) {
        while (recorder_.next_grid() < recorder_.grid_samples() &&
               recorder_.grid_micro(recorder_.next_grid()) <= target) {
            const double tg = recorder_.grid_micro(recorder_.next_grid());
            integrate_to(tg);
            const double e = std::exp(-setup_.alpha * (tg - t_anchor_));
            recorder_.emit(flow_plus(e), flow_minus(e), count_plus_, count_minus_, integral_plus_,
                           integral_minus_);
        }
    }

    /// Move the anchored state (and quadrature cursor) to `target`, assuming
    /// no events in between.
    void advance_state(double target) {
        flush_grid(target);
        integrate_to(target);
        const double e = std::exp(-setup_.alpha * (target - t_anchor_));
        m_plus_ = flow_plus(e);
        m_minus_ = flow_minus(e);
        t_anchor_ = target;
    }

    void run_window() {
        if (!std::isfinite(m_plus_) || !std::isfinite(m_minus_)) {
            throw NonFiniteState("order-flow means left the finite range");
        }
        const double w_end = std::min(t_anchor_ + setup_.window, setup_.micro_horizon);
        const auto [bp, bm] =
            total_rates(std::max(m_plus_, setup_.fp_plus), std::max(m_minus_, setup_.fp_minus));
        const double dominating = bp + bm;
        if (!std::isfinite(dominating)) {
            throw NonFiniteState("dominating rate left the finite range");
        }
        if (dominating <= 0.0) {
            advance_state(w_end);
            return;
        }
        double t_prop = t_anchor_;
        while (true) {
            t_prop += rng_.exponential(dominating);
            if (t_prop >= w_end) {
                advance_state(w_end);
                return;
            }
            recorder_.count_proposal();
            const double e = std::exp(-setup_.alpha * (t_prop - t_anchor_));
            const double mp = flow_plus(e);
            const double mm = flow_minus(e);
            double w = rng_.uniform01() * dominating;
            // One uniform selects the component and accepts/rejects: walk the
            // cumulative rates, buy components first, then sell components.
            std::size_t chosen = groups_.size();
            OrderSign sign = OrderSign::Buy;
            double rate = 0.0;
            for (std::size_t g = 0; g < groups_.size() && chosen == groups_.size(); ++g) {
                rate = groups_[g].count * config_.intensity.value(mp + groups_[g].bg * mm);
                if (w < rate) {
                    chosen = g;
                    sign = OrderSign::Buy;
                } else {
                    w -= rate;
                }
            }
            for (std::size_t g = 0; g < groups_.size() && chosen == groups_.size(); ++g) {
                rate = groups_[g].count *
                       config_.intensity.value(groups_[g].gamma * mp + groups_[g].om * mm);
                if (w < rate) {
                    chosen = g;
                    sign = OrderSign::Sell;
                } else {
                    w -= rate;
                }
            }
            if (chosen == groups_.size()) {
                continue;  // rejected; keep proposing inside the window
            }
            // The residual inside the accepted component is uniform on it;
            // reuse it to pick the acting agent within the group.
            const Group& group = groups_[chosen];
            const double frac = rate > 0.0 ? w / rate : 0.0;
            const auto offset =
                std::min(group.n_agents - 1,
                         static_cast<std::size_t>(frac * static_cast<double>(group.n_agents)));
            advance_state(t_prop);
            if (sign == OrderSign::Buy) {
                m_plus_ += setup_.inv_n;
                ++count_plus_;
            } else {
                m_minus_ += setup_.inv_n;
                ++count_minus_;
            }
            recorder_.record_event(t_prop, static_cast<std::uint32_t>(group.first_agent + offset),
                                   sign);
            return;  // bound is stale after a jump; open a fresh window
        }
    }

    ModelConfig config_;
    CommonSetup setup_;
    std::vector<Group> groups_;
    RandomStream rng_;
    PathRecorder recorder_;
    double m_plus_{0.0};
    double m_minus_{0.0};
    double t_anchor_{0.0};
    double t_cursor_{0.0};
    std::uint64_t count_plus_{0};
    std::uint64_t count_minus_{0};
    double integral_plus_{0.0};
    double integral_minus_{0.0};
};

/// Exact simulation of the self-exciting variant. Each agent carries her own
/// history term, so there are 2N components; their window bounds live in a
/// Fenwick tree, and only queried agents are flowed to the candidate time.
class SelfExcitingEngine {
public:
    SelfExcitingEngine(const ModelConfig& config, std::uint64_t path_seed,
                       const EngineOptions& options)
        : config_(config),
          setup_(make_setup(config)),
          options_(options),
          rng_(path_seed),
          recorder_(config, setup_, options, false),
          agents_(config.n_agents) {
        m_plus_ = setup_.a_n_plus;
        m_minus_ = setup_.a_n_minus;
        bg_ = config.agents.beta * config.agents.gamma;
        gamma_ = config.agents.gamma;
        om_ = 1.0 + (config.agents.beta - 1.0) * config.agents.gamma;
        kscale_ = config.agents.kappa / setup_.sqrt_n;
    }

    HawkesPathRecord run() {
        while (t_anchor_ < setup_.micro_horizon) {
            run_window();
        }
        flush_grid(setup_.micro_horizon);
        return std::move(recorder_).take();
    }

private:
    [[nodiscard]] double base_plus(double t) const {
        return setup_.fp_plus + (setup_.a_n_plus - setup_.fp_plus) * std::exp(-setup_.alpha * t);
    }
    [[nodiscard]] double base_minus(double t) const {
        return setup_.fp_minus + (setup_.a_n_minus - setup_.fp_minus) * std::exp(-setup_.alpha * t);
    }

    void flush_grid(double target) {
        while (recorder_.next_grid() < recorder_.grid_samples() &&
               recorder_.grid_micro(recorder_.next_grid()) <= target) {
            const double tg = recorder_.grid_micro(recorder_.next_grid());
            const double e = std::exp(-setup_.alpha * (tg - t_anchor_));
            recorder_.emit(setup_.fp_plus + (m_plus_ - setup_.fp_plus) * e,
                           setup_.fp_minus + (m_minus_ - setup_.fp_minus) * e, count_plus_,
                           count_minus_, 0.0, 0.0);
        }
    }

    void advance_state(double target) {
        flush_grid(target);
        const double e = std::exp(-setup_.alpha * (target - t_anchor_));
        m_plus_ = setup_.fp_plus + (m_plus_ - setup_.fp_plus) * e;
        m_minus_ = setup_.fp_minus + (m_minus_ - setup_.fp_minus) * e;
        t_anchor_ = target;
    }

    /// Window-constant per-component bounds: group means bounded by their
    /// flow supremum plus the jump slack for up-to-cap events, the common
    /// external part by its flow supremum, and each agent's own term by its
    /// current (decaying) value.
    void rebuild(double t0) {
        if (!std::isfinite(m_plus_) || !std::isfinite(m_minus_)) {
            throw NonFiniteState("order-flow means left the finite range");
        }
        const double cap_slack = static_cast<double>(options_.window_event_cap) * setup_.inv_n;
        bound_ap_ = std::max(m_plus_, setup_.fp_plus) + cap_slack;
        bound_am_ = std::max(m_minus_, setup_.fp_minus) + cap_slack;
        bound_bp_ = std::max(base_plus(t0), setup_.fp_plus);
        bound_bm_ = std::max(base_minus(t0), setup_.fp_minus);
        std::vector<double> leaves(2 * config_.n_agents);
        for (std::size_t i = 0; i < config_.n_agents; ++i) {
            AgentState& agent = agents_[i];
            const double decay = std::exp(-setup_.alpha * (t0 - agent.last_update));
            agent.x_plus *= decay;
            agent.x_minus *= decay;
            agent.last_update = t0;
            leaves[i] = buy_bound(agent);
            leaves[config_.n_agents + i] = sell_bound(agent);
        }
        tree_.assign(std::move(leaves));
        events_since_rebuild_ = 0;
    }

    [[nodiscard]] double buy_bound(const AgentState& agent) const {
        return config_.intensity.value(
            bound_ap_ + bg_ * bound_am_ +
            kscale_ * ((bound_bp_ + agent.x_plus) + bg_ * (bound_bm_ + agent.x_minus)));
    }
    [[nodiscard]] double sell_bound(const AgentState& agent) const {
        return config_.intensity.value(
            gamma_ * bound_ap_ + om_ * bound_am_ +
            kscale_ * (gamma_ * (bound_bp_ + agent.x_plus) + om_ * (bound_bm_ + agent.x_minus)));
    }

    void run_window() {
        rebuild(t_anchor_);
        const double w_end = std::min(t_anchor_ + setup_.window, setup_.micro_horizon);
        double dominating = tree_.total();
        if (!std::isfinite(dominating)) {
            throw NonFiniteState("dominating rate left the finite range");
        }
        if (dominating <= 0.0) {
            advance_state(w_end);
            return;
        }
        double t_prop = t_anchor_;
        while (true) {
            t_prop += rng_.exponential(dominating);
            if (t_prop >= w_end) {
                advance_state(w_end);
                return;
            }
            recorder_.count_proposal();
            const auto [component, residual] = tree_.locate(rng_.uniform01() * dominating);
            if (component >= 2 * config_.n_agents) {
                continue;  // prefix sums numerically exhausted; reject
            }
            const bool is_buy = component < config_.n_agents;
            const std::size_t agent_id = is_buy ? component : component - config_.n_agents;
            const AgentState& agent = agents_[agent_id];
            // True intensity of the selected component at the candidate time.
            const double eg = std::exp(-setup_.alpha * (t_prop - t_anchor_));
            const double mp = setup_.fp_plus + (m_plus_ - setup_.fp_plus) * eg;
            const double mm = setup_.fp_minus + (m_minus_ - setup_.fp_minus) * eg;
            const double own_decay = std::exp(-setup_.alpha * (t_prop - agent.last_update));
            const double xp = base_plus(t_prop) + agent.x_plus * own_decay;
            const double xm = base_minus(t_prop) + agent.x_minus * own_decay;
            const double arg = is_buy
                                   ? mp + bg_ * mm + kscale_ * (xp + bg_ * xm)
                                   : gamma_ * mp + om_ * mm + kscale_ * (gamma_ * xp + om_ * xm);
            if (residual >= config_.intensity.value(arg)) {
                continue;  // rejected
            }
            advance_state(t_prop);
            AgentState& acting = agents_[agent_id];
            const double refresh = std::exp(-setup_.alpha * (t_prop - acting.last_update));
            acting.x_plus *= refresh;
            acting.x_minus *= refresh;
            acting.last_update = t_prop;
            if (is_buy) {
                acting.x_plus += 1.0;
                m_plus_ += setup_.inv_n;
                ++count_plus_;
            } else {
                acting.x_minus += 1.0;
                m_minus_ += setup_.inv_n;
                ++count_minus_;
            }
            tree_.update(agent_id, buy_bound(acting));
            tree_.update(config_.n_agents + agent_id, sell_bound(acting));
            recorder_.record_event(t_prop, static_cast<std::uint32_t>(agent_id),
                                   is_buy ? OrderSign::Buy : OrderSign::Sell);
            ++events_since_rebuild_;
            if (events_since_rebuild_ >= options_.window_event_cap) {
                return;  // jump slack exhausted; rebuild the bounds
            }
            // The acting agent's bound grew, so refresh the dominating rate
            // before drawing the next proposal.
            dominating = tree_.total();
            if (!std::isfinite(dominating)) {
                throw NonFiniteState("dominating rate left the finite range");
            }
        }
    }

    ModelConfig config_;
    CommonSetup setup_;
    EngineOptions options_;
    RandomStream rng_;
    PathRecorder recorder_;
    std::vector<AgentState> agents_;
    RateTree tree_;
    double m_plus_{0.0};
    double m_minus_{0.0};
    double t_anchor_{0.0};
    std::uint64_t count_plus_{0};
    std::uint64_t count_minus_{0};
    double bg_{0.0};
    double gamma_{0.0};
    double om_{0.0};
    double kscale_{0.0};
    double bound_ap_{0.0};
    double bound_am_{0.0};
    double bound_bp_{0.0};
    double bound_bm_{0.0};
    std::size_t events_since_rebuild_{0};
};

}  // namespace

double inter_event_flow(double m_t0, double fixed_point, double alpha, double dt) {
    return fixed_point + (m_t0 - fixed_point) * std::exp(-alpha * dt);
}

std::vector<double> component_intensities(const ModelConfig& config,
                                          const SufficientState& state) {
    if (config.agents.kind == AgentLawKind::SelfExciting) {
        throw std::invalid_argument(
            "self-exciting component intensities need the per-agent states");
    }
    const std::vector<Group> groups = make_groups(config);
    std::vector<double> rates;
    rates.reserve(2 * groups.size());
    for (const Group& g : groups) {
        rates.push_back(g.count * config.intensity.value(state.m_plus + g.bg * state.m_minus));
    }
    for (const Group& g : groups) {
        rates.push_back(g.count *
                        config.intensity.value(g.gamma * state.m_plus + g.om * state.m_minus));
    }
    return rates;
}

std::vector<double> component_intensities(const ModelConfig& config, const SufficientState& state,
                                          const std::vector<AgentState>& agents) {
    if (config.agents.kind != AgentLawKind::SelfExciting) {
        return component_intensities(config, state);
    }
    if (agents.size() != config.n_agents) {
        throw std::invalid_argument("need one AgentState per agent");
    }
    const CommonSetup setup = make_setup(config);
    const double bg = config.agents.beta * config.agents.gamma;
    const double gamma = config.agents.gamma;
    const double om = 1.0 + (config.agents.beta - 1.0) * config.agents.gamma;
    const double kscale = config.agents.kappa / setup.sqrt_n;
    const double base_p =
        setup.fp_plus + (setup.a_n_plus - setup.fp_plus) * std::exp(-setup.alpha * state.t_micro);
    const double base_m = setup.fp_minus +
                          (setup.a_n_minus - setup.fp_minus) * std::exp(-setup.alpha * state.t_micro);
    std::vector<double> rates(2 * config.n_agents);
    for (std::size_t i = 0; i < config.n_agents; ++i) {
        const double decay = std::exp(-setup.alpha * (state.t_micro - agents[i].last_update));
        const double xp = base_p + agents[i].x_plus * decay;
        const double xm = base_m + agents[i].x_minus * decay;
        rates[i] =
            config.intensity.value(state.m_plus + bg * state.m_minus + kscale * (xp + bg * xm));
        rates[config.n_agents + i] = config.intensity.value(
            gamma * state.m_plus + om * state.m_minus + kscale * (gamma * xp + om * xm));
    }
    return rates;
}

double rejection_bound(const ModelConfig& config, const SufficientState& state) {
    const CommonSetup setup = make_setup(config);
    SufficientState bounded = state;
    bounded.m_plus = std::max(state.m_plus, setup.fp_plus);
    bounded.m_minus = std::max(state.m_minus, setup.fp_minus);
    double total = 0.0;
    for (double rate : component_intensities(config, bounded)) {
        total += rate;
    }
    return total;
}

HawkesPathRecord simulate_path(const ModelConfig& config, std::uint64_t path_seed,
                               const EngineOptions& options) {
    if (config.agents.kind == AgentLawKind::SelfExciting) {
        return SelfExcitingEngine(config, path_seed, options).run();
    }
    return GroupedEngine(config, path_seed, options).run();
}

}  // namespace critical_hawkes
