#include "mixedosc/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mixedosc/errors.hpp"

namespace mixedosc {

int BlockSpec::param_count() const {
    switch (kind) {
        case BlockKind::Symmetric: return rows * (rows + 1) / 2;
        case BlockKind::Rectangular: return rows * cols;
        case BlockKind::Scalar: return 1;
    }
    return 0;
}

int LMIProblem::total_params() const {
    int n = 0;
    for (const auto& b : blocks) n += b.param_count();
    return n;
}

BlockValues LMIProblem::zero_blocks() const {
    BlockValues out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back(Eigen::MatrixXd::Zero(b.rows, b.cols));
    return out;
}

BlockValues LMIProblem::unpack(const Eigen::VectorXd& y) const {
    if (y.size() != total_params()) throw InvalidInput("LMIProblem::unpack: size mismatch");
    BlockValues out = zero_blocks();
    int k = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const BlockSpec& spec = blocks[b];
        if (spec.kind == BlockKind::Symmetric) {
            for (int i = 0; i < spec.rows; ++i)
                for (int j = i; j < spec.rows; ++j) {
                    out[b](i, j) = y(k);
                    out[b](j, i) = y(k);
                    ++k;
                }
        } else {
            for (int i = 0; i < spec.rows; ++i)
                for (int j = 0; j < spec.cols; ++j) out[b](i, j) = y(k++);
        }
    }
    return out;
}

Eigen::VectorXd LMIProblem::pack(const BlockValues& values) const {
    if (values.size() != blocks.size()) throw InvalidInput("LMIProblem::pack: block count mismatch");
    Eigen::VectorXd y(total_params());
    int k = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const BlockSpec& spec = blocks[b];
        if (values[b].rows() != spec.rows || values[b].cols() != spec.cols)
            throw InvalidInput("LMIProblem::pack: block shape mismatch for " + spec.name);
        if (spec.kind == BlockKind::Symmetric) {
            for (int i = 0; i < spec.rows; ++i)
                for (int j = i; j < spec.rows; ++j) y(k++) = 0.5 * (values[b](i, j) + values[b](j, i));
        } else {
            for (int i = 0; i < spec.rows; ++i)
                for (int j = 0; j < spec.cols; ++j) y(k++) = values[b](i, j);
        }
    }
    return y;
}

double default_epsilon(const std::vector<Eigen::MatrixXd>& vertices) {
    double scale = 1.0;
    for (const auto& a : vertices) scale = std::max(scale, a.norm());
    return 1e-6 * scale;
}

namespace {

// Compiled affine form F_j(y) = F0_j + sum_k y_k * Fk_j.
struct CompiledConstraint {
    std::string name;
    int dim = 0;
    Eigen::MatrixXd F0;
    std::vector<Eigen::MatrixXd> basis;
    bool strict = true;
    double threshold = 0.0; // residual acceptance level
    double goal = 0.0;      // optimization target (a bit below threshold)

    Eigen::MatrixXd value(const Eigen::VectorXd& y) const {
        Eigen::MatrixXd F = F0;
        for (int k = 0; k < y.size(); ++k)
            if (y(k) != 0.0) F.noalias() += y(k) * basis[static_cast<std::size_t>(k)];
        return F;
    }
};

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M, const std::string& who) {
    if (M.rows() != M.cols()) throw InvalidInput("LMI constraint " + who + " is not square");
    const double defect = (M - M.transpose()).norm();
    if (defect > 1e-8 * std::max(1.0, M.norm()))
        throw InvalidInput("LMI constraint " + who + " is not symmetric");
    return 0.5 * (M + M.transpose());
}

std::vector<CompiledConstraint> compile(const LMIProblem& problem, bool validate_affine,
                                        std::uint64_t seed) {
    const int d = problem.total_params();
    std::vector<CompiledConstraint> out;
    out.reserve(problem.constraints.size());
    const BlockValues zeros = problem.zero_blocks();
    for (const auto& c : problem.constraints) {
        CompiledConstraint cc;
        cc.name = c.name;
        cc.strict = c.strict;
        cc.F0 = symmetrized(c.map(zeros), c.name);
        cc.dim = static_cast<int>(cc.F0.rows());
        if (c.dim > 0 && c.dim != cc.dim)
            throw InvalidInput("LMI constraint " + c.name + ": declared dim mismatch");
        cc.basis.resize(static_cast<std::size_t>(d));
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(d);
        for (int k = 0; k < d; ++k) {
            unit(k) = 1.0;
            cc.basis[static_cast<std::size_t>(k)] =
                symmetrized(c.map(problem.unpack(unit)), c.name) - cc.F0;
            unit(k) = 0.0;
        }
        out.push_back(std::move(cc));
    }

    if (validate_affine && d > 0) {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Eigen::VectorXd ya(d), yb(d);
        for (int k = 0; k < d; ++k) {
            ya(k) = dist(rng);
            yb(k) = dist(rng);
        }
        for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
            const auto& c = problem.constraints[j];
            const Eigen::MatrixXd lhs = symmetrized(c.map(problem.unpack(ya + yb)), c.name);
            const Eigen::MatrixXd rhs = symmetrized(c.map(problem.unpack(ya)), c.name) +
                                        symmetrized(c.map(problem.unpack(yb)), c.name) - out[j].F0;
            const double scale = std::max({1.0, lhs.norm(), rhs.norm()});
            if ((lhs - rhs).norm() > 1e-7 * scale)
                throw InvalidInput("LMI constraint " + c.name + " failed the linearity probe");
        }
    }
    return out;
}

struct Objective {
    double value = 0.0;
    double max_eig = -std::numeric_limits<double>::infinity();  // raw, over all constraints
    double violation = -std::numeric_limits<double>::infinity(); // max residual - threshold
    double goal_gap = -std::numeric_limits<double>::infinity();  // max residual - goal
    Eigen::VectorXd grad;
};

// Smoothed max of goal-shifted eigenvalues across all constraints:
//   f_T(y) = m + T * log sum_{j,k} exp((lambda_jk - goal_j - m)/T).
Objective evaluate(const std::vector<CompiledConstraint>& constraints, const Eigen::VectorXd& y,
                   double temperature) {
    Objective obj;
    obj.grad = Eigen::VectorXd::Zero(y.size());

    std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> decomps;
    decomps.reserve(constraints.size());
    for (const auto& c : constraints) {
        decomps.emplace_back(c.value(y));
        if (decomps.back().info() != Eigen::Success)
            throw NumericalSingularity("LMI solver: eigendecomposition failed");
        const double res = decomps.back().eigenvalues().maxCoeff();
        obj.max_eig = std::max(obj.max_eig, res);
        obj.violation = std::max(obj.violation, res - c.threshold);
        obj.goal_gap = std::max(obj.goal_gap, res - c.goal);
    }

    double shifted_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < constraints.size(); ++j)
        shifted_max = std::max(shifted_max,
                               decomps[j].eigenvalues().maxCoeff() - constraints[j].goal);
    double wsum = 0.0;
    for (std::size_t j = 0; j < constraints.size(); ++j) {
        const auto& ev = decomps[j].eigenvalues();
        for (int k = 0; k < ev.size(); ++k)
            wsum += std::exp((ev(k) - constraints[j].goal - shifted_max) / temperature);
    }
    obj.value = shifted_max + temperature * std::log(wsum);

    for (std::size_t j = 0; j < constraints.size(); ++j) {
        const auto& ev = decomps[j].eigenvalues();
        const auto& V = decomps[j].eigenvectors();
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(constraints[j].dim, constraints[j].dim);
        for (int k = 0; k < ev.size(); ++k) {
            const double w =
                std::exp((ev(k) - constraints[j].goal - shifted_max) / temperature) / wsum;
            if (w > 1e-300) W.noalias() += w * (V.col(k) * V.col(k).transpose());
        }
        for (int i = 0; i < y.size(); ++i) {
            const Eigen::MatrixXd& Fi = constraints[j].basis[static_cast<std::size_t>(i)];
            obj.grad(i) += (W.array() * Fi.array()).sum();
        }
    }
    return obj;
}

double max_violation(const std::vector<CompiledConstraint>& constraints,
                     const Eigen::VectorXd& y) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& c : constraints) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.value(y), Eigen::EigenvaluesOnly);
        m = std::max(m, es.eigenvalues().maxCoeff() - c.threshold);
    }
    return m;
}

} // namespace

SolveOutcome solve_feasibility(const LMIProblem& problem, const LMIOptions& options) {
    if (problem.constraints.empty()) throw InvalidInput("solve_feasibility: no constraints");
    if (problem.eps <= 0.0) throw InvalidInput("solve_feasibility: eps must be positive");
    const int d = problem.total_params();
    if (d == 0) throw InvalidInput("solve_feasibility: no decision parameters");

    std::vector<CompiledConstraint> constraints =
        compile(problem, options.validate_affine, options.seed);
    for (auto& c : constraints) {
        if (c.strict) {
            c.threshold = -problem.eps;
            c.goal = -options.target_margin_factor * problem.eps;
        } else {
            c.threshold = 1e-9 * std::max(1.0, c.F0.norm());
            c.goal = 0.0;
        }
    }

    Eigen::VectorXd y(d);
    if (options.initial.has_value()) {
        y = problem.pack(*options.initial);
    } else {
        std::mt19937_64 rng(options.seed);
        std::uniform_real_distribution<double> dist(-0.1, 0.1);
        for (int k = 0; k < d; ++k) y(k) = dist(rng);
    }

    SolveOutcome outcome;
    double best_violation = max_violation(constraints, y);
    Eigen::VectorXd best_y = y;

    double temperature = std::max(1e-3, 0.5 * best_violation);
    const double temp_floor = std::max(1e-12, 1e-3 * problem.eps);
    int total_iters = 0;

    for (int outer = 0; outer < options.max_outer; ++outer) {
        Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
        Objective obj = evaluate(constraints, y, temperature);
        bool done = false;

        for (int inner = 0; inner < options.max_inner; ++inner) {
            ++total_iters;
            if (obj.violation < best_violation) {
                best_violation = obj.violation;
                best_y = y;
            }
            if (obj.goal_gap <= 0.0) {
                done = true;
                break;
            }
            const double gnorm = obj.grad.norm();
            if (gnorm <= 1e-12 * std::max(1.0, std::abs(obj.value))) break;

            Eigen::VectorXd dir = -(H * obj.grad);
            double slope = dir.dot(obj.grad);
            if (slope >= 0.0) { // fall back to steepest descent
                dir = -obj.grad;
                slope = -gnorm * gnorm;
            }
            // Keep single steps from running far outside the current scale.
            const double dnorm = dir.norm();
            const double cap = 4.0 * std::max(1.0, y.norm());
            if (dnorm > cap) {
                dir *= cap / dnorm;
                slope *= cap / dnorm;
            }

            double alpha = 1.0;
            Objective next;
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                next = evaluate(constraints, y + alpha * dir, temperature);
                if (next.value <= obj.value + 1e-4 * alpha * slope) {
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;

            const Eigen::VectorXd s = alpha * dir;
            const Eigen::VectorXd yk = next.grad - obj.grad;
            const double sy = s.dot(yk);
            if (sy > 1e-12 * s.norm() * yk.norm()) {
                const Eigen::VectorXd Hy = H * yk;
                const double yHy = yk.dot(Hy);
                H += ((sy + yHy) / (sy * sy)) * (s * s.transpose()) -
                     (Hy * s.transpose() + s * Hy.transpose()) / sy;
            }
            y += s;
            obj = next;
        }
        if (done) break;
        if (temperature <= temp_floor) break;
        temperature = std::max(temp_floor, temperature * 0.2);
    }
    outcome.report.iterations = total_iters;

    const double final_violation = max_violation(constraints, best_y);
    double final_residual = -std::numeric_limits<double>::infinity();
    for (const auto& c : constraints) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.value(best_y),
                                                          Eigen::EigenvaluesOnly);
        final_residual = std::max(final_residual, es.eigenvalues().maxCoeff());
    }
    outcome.report.best_residual = final_residual;
    if (final_violation <= 0.0) {
        outcome.report.feasible = true;
        outcome.report.message = "feasible";
        LMISolution sol;
        sol.y = best_y;
        sol.blocks = problem.unpack(best_y);
        for (const auto& c : constraints) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.value(best_y),
                                                              Eigen::EigenvaluesOnly);
            sol.residuals.push_back(es.eigenvalues().maxCoeff());
        }
        for (std::size_t b = 0; b < problem.blocks.size(); ++b) {
            if (problem.blocks[b].kind == BlockKind::Symmetric)
                sol.block_inertia.push_back(inertia_of(sol.blocks[b]));
            else
                sol.block_inertia.push_back(Inertia{});
        }
        outcome.solution = std::move(sol);
    } else {
        outcome.report.message = "infeasible: best max-eigenvalue residual " +
                                 std::to_string(final_residual) + " (violation " +
                                 std::to_string(final_violation) + ")";
    }
    return outcome;
}

std::vector<double> constraint_residuals(const LMIProblem& problem, const BlockValues& values) {
    std::vector<double> out;
    out.reserve(problem.constraints.size());
    for (const auto& c : problem.constraints) {
        const Eigen::MatrixXd F = symmetrized(c.map(values), c.name);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F, Eigen::EigenvaluesOnly);
        out.push_back(es.eigenvalues().maxCoeff());
    }
    return out;
}

double bisect_threshold(const std::function<bool(double)>& feasible, double lo, double hi,
                        int iterations) {
    if (!(hi > lo)) throw InvalidInput("bisect_threshold: need hi > lo");
    if (!feasible(hi)) throw InvalidInput("bisect_threshold: feasible(hi) must hold");
    double best = hi;
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            best = mid;
            hi = mid;
        } else {
            lo = mid;
        }
        if ((hi - lo) <= 1e-3 * std::max(1.0, std::abs(hi))) break;
    }
    return best;
}

} // namespace mixedosc
