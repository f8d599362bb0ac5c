#include "mixedosc/dominance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "mixedosc/equilibria.hpp"
#include "mixedosc/errors.hpp"
#include "mixedosc/linalg.hpp"

namespace mixedosc {

namespace {

int resolve_threads(int requested, int work_items) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("MIXEDOSC_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return std::max(1, std::min(n, work_items));
}

} // namespace

std::string to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::ZeroDominant: return "ZeroDominant";
        case RegionLabel::TwoDomStableEq: return "TwoDomStableEq";
        case RegionLabel::Oscillation: return "Oscillation";
        case RegionLabel::OscillationPlusFixedPoints: return "OscillationPlusFixedPoints";
        case RegionLabel::NoCertificate: return "NoCertificate";
    }
    return "NoCertificate";
}

std::optional<RegionLabel> region_label_from_string(const std::string& s) {
    if (s == "ZeroDominant") return RegionLabel::ZeroDominant;
    if (s == "TwoDomStableEq") return RegionLabel::TwoDomStableEq;
    if (s == "Oscillation") return RegionLabel::Oscillation;
    if (s == "OscillationPlusFixedPoints") return RegionLabel::OscillationPlusFixedPoints;
    if (s == "NoCertificate") return RegionLabel::NoCertificate;
    return std::nullopt;
}

CircleTestResult circle_criterion(const TransferFunction& g, double lambda, double k_sector,
                                  const FrequencyGrid& grid) {
    if (k_sector <= 0.0) throw InvalidInput("circle_criterion: K_sector must be positive");
    CircleTestResult result;
    result.shifted_unstable_poles = count_poles_right_of(minimal_form(g), -lambda);
    const FrequencyExtremum m = shifted_min_real(g, lambda, grid);
    result.attained_min_real = m.value;
    result.omega_at_min = m.omega;
    const double threshold = -1.0 / k_sector;
    if (m.value > threshold) {
        result.ok = true;
        DominanceCertificate cert;
        cert.p = result.shifted_unstable_poles;
        cert.lambda = lambda;
        cert.method = DominanceCertificate::Method::Circle;
        cert.margin = m.value - threshold;
        cert.attained_min_real = m.value;
        cert.omega_at_min = m.omega;
        result.certificate = cert;
    }
    return result;
}

namespace {

double gain_bound_from_min_real(double beta, double lambda, const MixedFeedbackParams& params,
                                const FrequencyGrid& grid) {
    MixedFeedbackParams unit = params;
    unit.k = 1.0;
    unit.beta = beta;
    const TransferFunction loop = make_loop_tf(unit);
    const FrequencyExtremum m = shifted_min_real(loop, lambda, grid);
    if (m.value >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / m.value;
}

} // namespace

double k0_gain_bound(double beta, const MixedFeedbackParams& params, const FrequencyGrid& grid) {
    return gain_bound_from_min_real(beta, 0.0, params, grid);
}

double k2_gain_bound(double beta, double lambda, const MixedFeedbackParams& params,
                     const FrequencyGrid& grid) {
    MixedFeedbackParams unit = params;
    unit.k = 1.0;
    unit.beta = beta;
    const TransferFunction loop = make_loop_tf(unit);
    const int unstable = count_poles_right_of(minimal_form(loop), -lambda);
    if (unstable != 2)
        throw PreconditionFailed("k2_gain_bound: the rate must split exactly two poles to the "
                                 "right of -lambda (got " + std::to_string(unstable) + ")");
    const FrequencyExtremum m = shifted_min_real(loop, lambda, grid);
    if (m.value >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / m.value;
}

double default_rate_heuristic(const MixedFeedbackParams& params) {
    MixedFeedbackParams unit = params;
    unit.k = 1.0;
    const TransferFunction loop = make_loop_tf(unit);
    auto poles = loop.poles();
    std::sort(poles.begin(), poles.end(),
              [](const auto& a, const auto& b) { return a.real() < b.real(); });
    if (poles.size() < 2) throw InvalidInput("default_rate_heuristic: need at least two poles");
    return std::sqrt(std::abs(poles[0].real()) * std::abs(poles[1].real()));
}

DominanceMapResult dominance_map(const MixedFeedbackParams& params, const DominanceMapConfig& cfg) {
    if (cfg.beta_points < 2 || cfg.k_points < 2)
        throw InvalidInput("dominance_map: grid resolutions must be >= 2");

    DominanceMapResult result;
    result.betas.resize(cfg.beta_points);
    for (int i = 0; i < cfg.beta_points; ++i)
        result.betas[i] = cfg.beta_min +
                          (cfg.beta_max - cfg.beta_min) * static_cast<double>(i) / (cfg.beta_points - 1);
    result.ks.resize(cfg.k_points);
    const double lk0 = std::log(cfg.k_min), lk1 = std::log(cfg.k_max);
    for (int j = 0; j < cfg.k_points; ++j)
        result.ks[j] = std::exp(lk0 + (lk1 - lk0) * static_cast<double>(j) / (cfg.k_points - 1));

    result.labels.assign(static_cast<std::size_t>(cfg.beta_points) * cfg.k_points,
                         RegionLabel::NoCertificate);
    result.k0_curve.assign(cfg.beta_points, std::numeric_limits<double>::quiet_NaN());
    result.k2_curve.assign(cfg.beta_points, std::numeric_limits<double>::quiet_NaN());

    const int threads = resolve_threads(cfg.threads, cfg.beta_points);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= cfg.beta_points) return;
            const double beta = result.betas[i];
            double k0 = std::numeric_limits<double>::quiet_NaN();
            double k2 = std::numeric_limits<double>::quiet_NaN();
            try {
                k0 = k0_gain_bound(beta, params, cfg.omega_grid);
            } catch (const Error&) {
            }
            try {
                k2 = k2_gain_bound(beta, cfg.lambda, params, cfg.omega_grid);
            } catch (const Error&) {
            }
            result.k0_curve[i] = k0;
            result.k2_curve[i] = k2;
            for (int j = 0; j < cfg.k_points; ++j) {
                RegionLabel label = RegionLabel::NoCertificate;
                try {
                    MixedFeedbackParams point = params;
                    point.k = result.ks[j];
                    point.beta = beta;
                    label = classify_region_with_bounds(point, cfg.r, k0, k2);
                } catch (const Error&) {
                    label = RegionLabel::NoCertificate;
                }
                result.labels[static_cast<std::size_t>(i) * cfg.k_points + j] = label;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return result;
}

std::vector<std::vector<std::complex<double>>> root_locus(double beta,
                                                          const MixedFeedbackParams& params,
                                                          const std::vector<double>& gain_grid,
                                                          double sigma) {
    if (sigma < 0.0 || sigma > 1.0) throw InvalidInput("root_locus: sigma must be in [0, 1]");
    for (std::size_t i = 1; i < gain_grid.size(); ++i)
        if (!(gain_grid[i] > gain_grid[i - 1]))
            throw InvalidInput("root_locus: gain grid must be strictly ascending");
    for (double k : gain_grid)
        if (!std::isfinite(k) || k < 0.0) throw InvalidInput("root_locus: gains must be finite and >= 0");

    const StateSpace plant = to_state_space(params.plant);
    const int n = plant.order();
    MixedFeedbackParams base = params;
    base.k = 0.0;
    base.validate(false);
    const ClosedLoopSystem sys = assemble_closed_loop(
        plant, params.tau_p, params.tau_n, feedback_row(0.0, beta, n), Saturation::tanh_default(),
        AssembleOptions{.enforce_time_scale = false, .default_port = false});

    std::vector<std::vector<std::complex<double>>> loci;
    loci.reserve(gain_grid.size());
    for (double k : gain_grid) {
        const Eigen::RowVectorXd K = feedback_row(k, beta, n);
        loci.push_back(eigenvalues(sys.A + sigma * (sys.B1 * K)));
    }
    return loci;
}

} // namespace mixedosc
