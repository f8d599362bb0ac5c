#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mixedosc/cable.hpp"
#include "mixedosc/dominance.hpp"
#include "mixedosc/mixed_feedback.hpp"
#include "mixedosc/simulation.hpp"

namespace mixedosc {

/// Config file was missing, unparsable or schema-invalid (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

struct PulseSpec {
    std::vector<double> amplitudes;
    std::vector<double> starts;
    std::vector<double> durations;
};

struct Config {
    // Plant: rational coefficients (ascending powers of s).
    std::vector<double> plant_num{1.0};
    std::vector<double> plant_den{1.0, 0.01};

    double tau_p = 0.1;
    double tau_n = 1.0;
    double k = 5.0;
    double beta = 0.4;
    double lambda = 50.0;

    double r_constant = 0.0;
    std::optional<PulseSpec> pulses;

    double saturation_bound = 1.0;

    double beta_min = 0.0, beta_max = 1.0;
    int beta_points = 100;
    double k_min = 0.1, k_max = 1000.0;
    int k_points = 120;
    FrequencyGrid omega_grid;

    struct Lmi {
        std::optional<double> epsilon;
        std::optional<double> nu;
        std::optional<double> gamma;
        std::optional<double> mu;
        double tau_p_pct = 20.0; // parametric-vertex perturbation
        double tau_n_pct = 20.0;
        bool instability = true;
        std::optional<double> gain_cap;
        bool ensure_unique_equilibrium = true;
    } lmi;

    struct Sim {
        std::optional<double> horizon; // default 200 * tau_n
        double tol = 1e-6;
        std::vector<double> x0; // default 0.1 on the first plant state
    } sim;

    std::optional<CableParams> cable;

    std::uint64_t seed = 1;

    MixedFeedbackParams params() const;
    ReferenceSignal reference() const;
    double horizon() const { return sim.horizon.value_or(200.0 * tau_n); }
};

Config config_from_json(const std::string& text);
Config load_config(const std::filesystem::path& path);

} // namespace mixedosc
