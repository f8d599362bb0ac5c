#include "mixedosc/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace mixedosc {

namespace {

using nlohmann::json;

double require_positive(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const double v = j.at(key).get<double>();
    if (!(v > 0.0)) throw ConfigError(std::string("config: ") + key + " must be positive");
    return v;
}

} // namespace

MixedFeedbackParams Config::params() const {
    MixedFeedbackParams p{k, beta, tau_p, tau_n,
                          TransferFunction(Polynomial(plant_num), Polynomial(plant_den))};
    return p;
}

ReferenceSignal Config::reference() const {
    if (pulses.has_value())
        return ReferenceSignal::pulse_train(pulses->amplitudes, pulses->starts, pulses->durations,
                                            r_constant);
    return ReferenceSignal::constant(r_constant);
}

Config config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }

    try {
        Config cfg;
        if (j.contains("plant")) {
            const auto& p = j.at("plant");
            cfg.plant_num = p.at("num").get<std::vector<double>>();
            cfg.plant_den = p.at("den").get<std::vector<double>>();
            if (cfg.plant_den.empty() || cfg.plant_num.empty())
                throw ConfigError("config: plant num/den must be nonempty");
        }
        if (j.contains("controller")) {
            const auto& c = j.at("controller");
            cfg.tau_p = require_positive(c, "tau_p", cfg.tau_p);
            cfg.tau_n = require_positive(c, "tau_n", cfg.tau_n);
            if (c.contains("k")) cfg.k = c.at("k").get<double>();
            if (c.contains("beta")) cfg.beta = c.at("beta").get<double>();
            if (cfg.k < 0.0) throw ConfigError("config: k must be >= 0");
            if (cfg.beta < 0.0 || cfg.beta > 1.0) throw ConfigError("config: beta must be in [0,1]");
        }
        if (j.contains("lambda")) {
            cfg.lambda = j.at("lambda").get<double>();
            if (cfg.lambda < 0.0) throw ConfigError("config: lambda must be >= 0");
        }
        if (j.contains("reference")) {
            const auto& r = j.at("reference");
            if (r.contains("constant")) cfg.r_constant = r.at("constant").get<double>();
            if (r.contains("pulses")) {
                PulseSpec ps;
                const auto& p = r.at("pulses");
                ps.amplitudes = p.at("amplitudes").get<std::vector<double>>();
                ps.starts = p.at("starts").get<std::vector<double>>();
                ps.durations = p.at("durations").get<std::vector<double>>();
                if (ps.amplitudes.size() != ps.starts.size() ||
                    ps.starts.size() != ps.durations.size())
                    throw ConfigError("config: pulse arrays must have equal length");
                cfg.pulses = std::move(ps);
            }
        }
        if (j.contains("saturation")) {
            const auto& s = j.at("saturation");
            if (s.contains("kind") && s.at("kind").get<std::string>() != "tanh")
                throw ConfigError("config: only the tanh saturation is configurable here");
            cfg.saturation_bound = require_positive(s, "bound", 1.0);
        }
        if (j.contains("grids")) {
            const auto& g = j.at("grids");
            if (g.contains("beta")) {
                const auto& b = g.at("beta");
                cfg.beta_min = b.value("min", cfg.beta_min);
                cfg.beta_max = b.value("max", cfg.beta_max);
                cfg.beta_points = b.value("points", cfg.beta_points);
            }
            if (g.contains("k")) {
                const auto& kk = g.at("k");
                cfg.k_min = kk.value("min", cfg.k_min);
                cfg.k_max = kk.value("max", cfg.k_max);
                cfg.k_points = kk.value("points", cfg.k_points);
                if (!(cfg.k_min > 0.0)) throw ConfigError("config: k grid minimum must be > 0");
            }
            if (g.contains("omega")) {
                const auto& o = g.at("omega");
                cfg.omega_grid.omega_min = o.value("min", cfg.omega_grid.omega_min);
                cfg.omega_grid.omega_max = o.value("max", cfg.omega_grid.omega_max);
                cfg.omega_grid.points = o.value("points", cfg.omega_grid.points);
            }
            if (cfg.beta_points < 2 || cfg.k_points < 2)
                throw ConfigError("config: grid resolutions must be >= 2");
            if (!(cfg.beta_min < cfg.beta_max) || !(cfg.k_min < cfg.k_max))
                throw ConfigError("config: grid bounds must be ordered");
        }
        if (j.contains("lmi")) {
            const auto& l = j.at("lmi");
            if (l.contains("epsilon") && !l.at("epsilon").is_null())
                cfg.lmi.epsilon = l.at("epsilon").get<double>();
            if (l.contains("nu") && !l.at("nu").is_null()) cfg.lmi.nu = l.at("nu").get<double>();
            if (l.contains("gamma") && !l.at("gamma").is_null())
                cfg.lmi.gamma = l.at("gamma").get<double>();
            if (l.contains("mu") && !l.at("mu").is_null()) cfg.lmi.mu = l.at("mu").get<double>();
            if (l.contains("vertex_perturbation")) {
                const auto& v = l.at("vertex_perturbation");
                cfg.lmi.tau_p_pct = v.value("tau_p_pct", cfg.lmi.tau_p_pct);
                cfg.lmi.tau_n_pct = v.value("tau_n_pct", cfg.lmi.tau_n_pct);
            }
            cfg.lmi.instability = l.value("instability_constraint", cfg.lmi.instability);
            if (l.contains("gain_cap") && !l.at("gain_cap").is_null())
                cfg.lmi.gain_cap = l.at("gain_cap").get<double>();
            cfg.lmi.ensure_unique_equilibrium =
                l.value("ensure_unique_equilibrium", cfg.lmi.ensure_unique_equilibrium);
        }
        if (j.contains("simulation")) {
            const auto& s = j.at("simulation");
            if (s.contains("horizon") && !s.at("horizon").is_null())
                cfg.sim.horizon = require_positive(s, "horizon", 0.0);
            cfg.sim.tol = require_positive(s, "tol", cfg.sim.tol);
            if (s.contains("x0")) cfg.sim.x0 = s.at("x0").get<std::vector<double>>();
        }
        if (j.contains("cable")) {
            const auto& c = j.at("cable");
            CableParams cp;
            cp.segments = c.value("segments", 15);
            cp.r1 = require_positive(c, "r1", 100.0);
            cp.r2 = require_positive(c, "r2", 400.0);
            cp.cm = require_positive(c, "cm", 1e-4);
            cp.validate();
            cfg.cable = cp;
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();

        // Cross-validate the loop parameters early so commands fail fast.
        cfg.params().validate();
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed field: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json(text);
}

} // namespace mixedosc
