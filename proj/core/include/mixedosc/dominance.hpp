#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixedosc/frequency.hpp"
#include "mixedosc/mixed_feedback.hpp"

namespace mixedosc {

/// Certificate of p-dominance with rate lambda. Circle-method certificates
/// record the attained minimum of Re G(j*omega - lambda); LMI certificates
/// carry the storage matrix P.
struct DominanceCertificate {
    int p = 0;
    double lambda = 0.0;
    enum class Method { Circle, LMI } method = Method::Circle;
    std::optional<Eigen::MatrixXd> P;
    double margin = 0.0; // strictness: distance to the failing boundary
    double attained_min_real = 0.0;
    double omega_at_min = 0.0;
};

enum class RegionLabel {
    ZeroDominant,
    TwoDomStableEq,
    Oscillation,
    OscillationPlusFixedPoints,
    NoCertificate,
};

std::string to_string(RegionLabel label);
std::optional<RegionLabel> region_label_from_string(const std::string& s);

struct CircleTestResult {
    bool ok = false;
    std::optional<DominanceCertificate> certificate;
    double attained_min_real = 0.0;
    double omega_at_min = 0.0;
    int shifted_unstable_poles = 0;
};

/// Circle criterion for dominance: success when the shifted Nyquist locus of
/// G stays strictly right of the vertical line through -1/K_sector; the
/// dominance degree is the shifted unstable pole count.
CircleTestResult circle_criterion(const TransferFunction& g, double lambda,
                                  double k_sector = 1.0, const FrequencyGrid& grid = {});

/// Largest gain below which the loop is 0-dominant with rate 0
/// (+infinity when the locus of G(s,1,beta) never crosses Re = 0).
double k0_gain_bound(double beta, const MixedFeedbackParams& params,
                     const FrequencyGrid& grid = {});

/// Largest gain below which the loop is 2-dominant with rate lambda.
/// Throws PreconditionFailed unless G(s - lambda, 1, beta) has exactly two
/// unstable poles.
double k2_gain_bound(double beta, double lambda, const MixedFeedbackParams& params,
                     const FrequencyGrid& grid = {});

/// Default rate heuristic: geometric mean of the magnitudes of the two
/// leftmost controller-side poles of the loop.
double default_rate_heuristic(const MixedFeedbackParams& params);

struct DominanceMapConfig {
    double beta_min = 0.0, beta_max = 1.0;
    int beta_points = 100;
    double k_min = 0.1, k_max = 1000.0;
    int k_points = 120; // log-spaced
    double lambda = 50.0;
    double r = 0.0;
    FrequencyGrid omega_grid;
    int threads = 0; // 0: decide from hardware / env override
};

struct DominanceMapResult {
    std::vector<double> betas;
    std::vector<double> ks;
    std::vector<RegionLabel> labels;  // row-major: [beta_index * k_points + k_index]
    std::vector<double> k0_curve;     // per beta; +inf allowed
    std::vector<double> k2_curve;     // per beta; +inf allowed, NaN when precondition fails

    RegionLabel at(int beta_index, int k_index) const {
        return labels[static_cast<std::size_t>(beta_index) * ks.size() +
                      static_cast<std::size_t>(k_index)];
    }
};

/// (k, beta)-plane dominance map. params supplies plant and time constants;
/// its k/beta fields are ignored. Per-point failures label NoCertificate.
DominanceMapResult dominance_map(const MixedFeedbackParams& params, const DominanceMapConfig& cfg);

/// Eigenvalues of the linearized loop A + sigma * B1 * K(k, beta) for each
/// gain in the grid (sigma is the saturation slope, in [0, 1]).
std::vector<std::vector<std::complex<double>>> root_locus(double beta,
                                                          const MixedFeedbackParams& params,
                                                          const std::vector<double>& gain_grid,
                                                          double sigma = 1.0);

} // namespace mixedosc
