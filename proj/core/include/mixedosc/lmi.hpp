#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixedosc/linalg.hpp"

namespace mixedosc {

enum class BlockKind { Symmetric, Rectangular, Scalar };

struct BlockSpec {
    std::string name;
    BlockKind kind = BlockKind::Scalar;
    int rows = 1;
    int cols = 1;

    int param_count() const;
};

using BlockValues = std::vector<Eigen::MatrixXd>;

/// One affine symmetric-matrix constraint F(blocks). Strict constraints are
/// required <= -eps*I; non-strict ones (supply certificates whose epsilon
/// lives inside the map, on the state block only) are required <= 0 up to a
/// small numerical slack.
struct LMIConstraint {
    std::string name;
    int dim = 0;
    std::function<Eigen::MatrixXd(const BlockValues&)> map;
    bool strict = true;
};

/// Affine feasibility problem over structured decision blocks. Constraints
/// must be affine in the blocks; this is validated by a two-point linearity
/// probe when the problem is compiled.
struct LMIProblem {
    std::vector<BlockSpec> blocks;
    std::vector<LMIConstraint> constraints;
    double eps = 1e-6;
    // Metadata carried for certificates.
    double lambda = 0.0;
    std::vector<Eigen::MatrixXd> vertices;

    int total_params() const;
    BlockValues zero_blocks() const;
    BlockValues unpack(const Eigen::VectorXd& y) const;
    Eigen::VectorXd pack(const BlockValues& values) const;
};

struct LMISolution {
    BlockValues blocks;
    Eigen::VectorXd y;
    std::vector<double> residuals; // max eigenvalue per constraint
    std::vector<Inertia> block_inertia; // meaningful for symmetric blocks
};

struct SolveReport {
    bool feasible = false;
    double best_residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::string message;
};

struct LMIOptions {
    std::uint64_t seed = 1;
    int max_outer = 60;
    int max_inner = 500;
    double target_margin_factor = 2.0;
    std::optional<BlockValues> initial;
    bool validate_affine = true;
};

struct SolveOutcome {
    std::optional<LMISolution> solution;
    SolveReport report;
};

/// Searches for a strictly feasible point (all residuals <= -eps) by
/// annealed smoothed-max-eigenvalue minimization with BFGS descent.
/// Deterministic for a fixed seed.
SolveOutcome solve_feasibility(const LMIProblem& problem, const LMIOptions& options = {});

/// Max-eigenvalue residual of every constraint at the given block values.
std::vector<double> constraint_residuals(const LMIProblem& problem, const BlockValues& values);

/// Default strictness margin: 1e-6 * max(1, max_i ||A_i||).
double default_epsilon(const std::vector<Eigen::MatrixXd>& vertices);

/// Smallest x in [lo, hi] with feasible(x) true, assuming monotone
/// feasibility; 12 bisection steps to ~1e-3 relative. feasible(hi) must
/// hold on entry.
double bisect_threshold(const std::function<bool(double)>& feasible, double lo, double hi,
                        int iterations = 12);

} // namespace mixedosc
