#include "critical_hawkes/config_file.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace critical_hawkes {

namespace {

struct RawValue {
    std::string text;
    int line{0};
};

[[nodiscard]] std::string_view trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

/// Key-value store for one file, with single-consumption bookkeeping so that
/// leftovers can be reported as unknown keys.
class KeyTable {
public:
    KeyTable(std::string_view text, std::string_view origin) : origin_(origin) {
        std::string_view rest = text;
        int line = 0;
        while (!rest.empty()) {
            ++line;
            const auto eol = rest.find('\n');
            std::string_view raw = rest.substr(0, eol);
            rest = eol == std::string_view::npos ? std::string_view{} : rest.substr(eol + 1);
            if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
                raw = raw.substr(0, hash);
            }
            const std::string_view stripped = trim(raw);
            if (stripped.empty()) {
                continue;
            }
            const auto eq = stripped.find('=');
            if (eq == std::string_view::npos) {
                fail(line, "expected 'key = value', got '" + std::string(stripped) + "'");
            }
            const std::string key{trim(stripped.substr(0, eq))};
            const std::string value{trim(stripped.substr(eq + 1))};
            if (key.empty()) {
                fail(line, "missing key before '='");
            }
            if (value.empty()) {
                fail(line, "missing value for key '" + key + "'");
            }
            const auto [it, inserted] = entries_.emplace(key, RawValue{value, line});
            if (!inserted) {
                fail(line, "duplicate key '" + key + "' (first given on line " +
                               std::to_string(it->second.line) + ")");
            }
        }
    }

    [[nodiscard]] std::optional<RawValue> take(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        RawValue value = it->second;
        entries_.erase(it);
        return value;
    }

    [[nodiscard]] RawValue require(const std::string& key) {
        auto value = take(key);
        if (!value) {
            fail_file("missing required key '" + key + "'");
        }
        return *value;
    }

    [[nodiscard]] bool contains(const std::string& key) const { return entries_.count(key) > 0; }

    void reject_leftovers() const {
        const RawValue* first = nullptr;
        std::string first_key;
        for (const auto& [key, value] : entries_) {
            if (first == nullptr || value.line < first->line) {
                first = &value;
                first_key = key;
            }
        }
        if (first != nullptr) {
            fail(first->line, "unrecognized key '" + first_key + "'");
        }
    }

    [[noreturn]] void fail(int line, const std::string& message) const {
        throw ConfigParseError(origin_ + ":" + std::to_string(line) + ": " + message);
    }

    [[noreturn]] void fail_file(const std::string& message) const {
        throw ConfigParseError(origin_ + ": " + message);
    }

    [[nodiscard]] double as_double(const std::string& key, const RawValue& raw) const {
        const char* begin = raw.text.data();
        const char* end = begin + raw.text.size();
        double parsed = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, parsed);
        if (ec != std::errc{} || ptr != end) {
            fail(raw.line, "key '" + key + "': '" + raw.text + "' is not a number");
        }
        return parsed;
    }

    template <typename Integer>
    [[nodiscard]] Integer as_integer(const std::string& key, const RawValue& raw) const {
        const char* begin = raw.text.data();
        const char* end = begin + raw.text.size();
        Integer parsed = 0;
        const auto [ptr, ec] = std::from_chars(begin, end, parsed);
        if (ec != std::errc{} || ptr != end) {
            fail(raw.line, "key '" + key + "': '" + raw.text +
                               "' is not an integer in the representable range");
        }
        return parsed;
    }

    [[nodiscard]] double take_double(const std::string& key, double fallback) {
        const auto raw = take(key);
        return raw ? as_double(key, *raw) : fallback;
    }

    [[nodiscard]] double require_double(const std::string& key) {
        const auto raw = require(key);
        return as_double(key, raw);
    }

    template <typename Integer>
    [[nodiscard]] Integer take_integer(const std::string& key, Integer fallback) {
        const auto raw = take(key);
        return raw ? as_integer<Integer>(key, *raw) : fallback;
    }

    void reject_if_present(const std::string& key, const std::string& reason) {
        if (const auto raw = take(key)) {
            fail(raw->line, "key '" + key + "' " + reason);
        }
    }

private:
    std::string origin_;
    std::map<std::string, RawValue> entries_;
};

[[nodiscard]] IntensityFn parse_intensity(KeyTable& table) {
    std::string kind = "saturating_exponential";
    int kind_line = 0;
    if (const auto raw = table.take("intensity.kind")) {
        kind = raw->text;
        kind_line = raw->line;
    }
    const double p = table.take_double("intensity.p", 1.0);
    if (kind == "saturating_exponential") {
        return saturating_exponential(p, table.take_double("intensity.s", 1.0));
    }
    if (kind == "linear") {
        table.reject_if_present("intensity.s", "does not apply to the linear intensity");
        return linear_reference(p);
    }
    table.fail(kind_line, "key 'intensity.kind': '" + kind +
                              "' is not one of saturating_exponential, linear");
}

[[nodiscard]] AgentLaw parse_agents(KeyTable& table) {
    const RawValue law = table.require("agents.law");
    if (law.text == "homogeneous" || law.text == "self_exciting") {
        table.reject_if_present("agents.atoms", "applies only to the inhomogeneous law");
        const double beta = table.require_double("agents.beta");
        const double gamma = table.require_double("agents.gamma");
        if (law.text == "homogeneous") {
            table.reject_if_present("agents.kappa", "applies only to the self_exciting law");
            return AgentLaw::homogeneous(beta, gamma);
        }
        return AgentLaw::self_exciting(beta, gamma, table.require_double("agents.kappa"));
    }
    if (law.text != "inhomogeneous") {
        table.fail(law.line, "key 'agents.law': '" + law.text +
                                 "' is not one of homogeneous, inhomogeneous, self_exciting");
    }
    table.reject_if_present("agents.beta", "applies only to the single-atom laws");
    table.reject_if_present("agents.gamma", "applies only to the single-atom laws");
    table.reject_if_present("agents.kappa", "applies only to the self_exciting law");
    const RawValue count_raw = table.require("agents.atoms");
    const auto n_atoms = table.as_integer<std::size_t>("agents.atoms", count_raw);
    if (n_atoms == 0) {
        table.fail(count_raw.line, "key 'agents.atoms': need at least one atom");
    }
    std::vector<AgentAtom> atoms(n_atoms);
    for (std::size_t i = 0; i < n_atoms; ++i) {
        const std::string prefix = "agents.atom." + std::to_string(i) + ".";
        atoms[i].beta = table.require_double(prefix + "beta");
        atoms[i].gamma = table.require_double(prefix + "gamma");
        atoms[i].weight = table.require_double(prefix + "weight");
    }
    return AgentLaw::inhomogeneous(std::move(atoms));
}

}  // namespace

RunConfig parse_run_config(std::string_view text, std::string_view origin) {
    KeyTable table(text, origin);
    RunConfig config;

    config.model.n_agents = table.as_integer<std::size_t>("model.n_agents",
                                                          table.require("model.n_agents"));
    config.model.horizon_macro = table.take_double("model.horizon", 1.0);
    config.model.grid_points = table.take_integer<std::size_t>("model.grid_points", 512);
    config.model.seed = table.take_integer<std::uint64_t>("model.seed", 0);
    if (const auto raw = table.take("model.alpha_override")) {
        config.model.alpha_override = table.as_double("model.alpha_override", *raw);
    }

    try {
        config.model.intensity = parse_intensity(table);
        config.model.agents = parse_agents(table);
    } catch (const std::invalid_argument& bad) {
        table.fail_file(bad.what());
    }

    config.model.signal.a_plus = table.take_double("signal.a_plus", 0.0);
    config.model.signal.a_minus = table.take_double("signal.a_minus", 0.0);
    config.model.signal.b_plus = table.take_double("signal.b_plus", 0.0);
    config.model.signal.b_minus = table.take_double("signal.b_minus", 0.0);

    if (const auto raw = table.take("sde.scheme")) {
        if (raw->text == "full_truncation") {
            config.sde_scheme = SdeSchemeKind::FullTruncationEuler;
        } else if (raw->text == "reflected") {
            config.sde_scheme = SdeSchemeKind::ReflectedEuler;
        } else {
            table.fail(raw->line, "key 'sde.scheme': '" + raw->text +
                                      "' is not one of full_truncation, reflected");
        }
    }
    config.sde_steps_per_point = table.take_integer<std::size_t>("sde.steps_per_point", 32);
    if (config.sde_steps_per_point == 0) {
        table.fail_file("key 'sde.steps_per_point' must be positive");
    }

    table.reject_leftovers();

    try {
        validate(config.model);
    } catch (const std::invalid_argument& bad) {
        table.fail_file(bad.what());
    }
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigParseError(path.string() + ": cannot open for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str(), path.string());
}

}  // namespace critical_hawkes
