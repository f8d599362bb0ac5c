#include "mixedosc/synthesis.hpp"

#include <cmath>

#include "mixedosc/errors.hpp"
#include "mixedosc/frequency.hpp"

namespace mixedosc {

namespace {

int count_right_of_rate(const Eigen::MatrixXd& A, double lambda) {
    try {
        return count_poles_right_of(eigenvalues(A), -lambda);
    } catch (const ShiftedAxisPole&) {
        throw PreconditionFailed("design: a vertex eigenvalue lies on the -lambda axis");
    }
}

Eigen::MatrixXd sym2(const Eigen::MatrixXd& M) { return M + M.transpose(); }

// Shared assembly of the block constraints; captures copies of the spec data.
void add_y_form_constraints(LMIProblem& problem, const DesignSpec& spec) {
    const int n = static_cast<int>(spec.vertices.front().rows());
    const Eigen::MatrixXd B1 = spec.B1;
    const int m1 = static_cast<int>(B1.cols());

    for (std::size_t v = 0; v < spec.vertices.size(); ++v) {
        const Eigen::MatrixXd A = spec.vertices[v];
        const double lambda = spec.lambda;
        const std::string tag = "_v" + std::to_string(v);

        if (spec.kind == "nominal") {
            problem.constraints.push_back(
                {"dom_open" + tag, n, [A, lambda](const BlockValues& b) -> Eigen::MatrixXd {
                     return sym2(A * b[0]) + 2.0 * lambda * b[0];
                 }});
            problem.constraints.push_back(
                {"dom_closed" + tag, n,
                 [A, B1, lambda](const BlockValues& b) -> Eigen::MatrixXd {
                     return sym2(A * b[0]) + sym2(B1 * b[1]) + 2.0 * lambda * b[0];
                 }});
        } else if (spec.kind == "robust") {
            const Eigen::MatrixXd B2 = spec.B2;
            const Eigen::MatrixXd C2 = spec.C2;
            const double gamma = spec.gamma;
            const int m2 = static_cast<int>(B2.cols());
            const int p2 = static_cast<int>(C2.rows());
            auto block = [A, B1, B2, C2, lambda, gamma, n, m2, p2](const BlockValues& b,
                                                                   bool closed) {
                Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n + m2 + p2, n + m2 + p2);
                Eigen::MatrixXd lyap = sym2(A * b[0]) + 2.0 * lambda * b[0];
                if (closed) lyap += sym2(B1 * b[1]);
                F.topLeftCorner(n, n) = lyap;
                F.block(0, n, n, m2) = B2;
                F.block(n, 0, m2, n) = B2.transpose();
                F.block(0, n + m2, n, p2) = b[0] * C2.transpose();
                F.block(n + m2, 0, p2, n) = C2 * b[0];
                F.block(n, n, m2, m2) = -gamma * Eigen::MatrixXd::Identity(m2, m2);
                F.block(n + m2, n + m2, p2, p2) = -gamma * Eigen::MatrixXd::Identity(p2, p2);
                return F;
            };
            problem.constraints.push_back({"gain_open" + tag, n + m2 + p2,
                                           [block](const BlockValues& b) { return block(b, false); }});
            problem.constraints.push_back({"gain_closed" + tag, n + m2 + p2,
                                           [block](const BlockValues& b) { return block(b, true); }});
        } else if (spec.kind == "passive") {
            const Eigen::MatrixXd B2 = spec.B2;
            const Eigen::MatrixXd C2 = spec.C2;
            const double mu = spec.mu;
            const int m2 = static_cast<int>(B2.cols());
            auto block = [A, B1, B2, C2, lambda, mu, n, m2](const BlockValues& b, bool closed) {
                Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n + m2, n + m2);
                Eigen::MatrixXd lyap = sym2(A * b[0]) + 2.0 * lambda * b[0];
                if (closed) lyap += sym2(B1 * b[1]);
                F.topLeftCorner(n, n) = lyap;
                const Eigen::MatrixXd off = B2 - b[0] * C2.transpose();
                F.block(0, n, n, m2) = off;
                F.block(n, 0, m2, n) = off.transpose();
                F.block(n, n, m2, m2) = -mu * Eigen::MatrixXd::Identity(m2, m2);
                return F;
            };
            problem.constraints.push_back({"passive_open" + tag, n + m2,
                                           [block](const BlockValues& b) { return block(b, false); }});
            problem.constraints.push_back({"passive_closed" + tag, n + m2,
                                           [block](const BlockValues& b) { return block(b, true); }});
        }

        if (spec.instability) {
            problem.constraints.push_back(
                {"unstable_origin" + tag, n, [A, B1](const BlockValues& b) -> Eigen::MatrixXd {
                     return sym2(A * b[0]) + sym2(B1 * b[1]);
                 }});
        }
        if (spec.gain_cap.has_value()) {
            const Eigen::MatrixXd B2 = spec.B2;
            const Eigen::MatrixXd C2 = spec.C2;
            const double cap = *spec.gain_cap;
            const int m2 = static_cast<int>(B2.cols());
            const int p2 = static_cast<int>(C2.rows());
            problem.constraints.push_back(
                {"gain_cap" + tag, n + m2 + p2,
                 [A, B1, B2, C2, cap, n, m2, p2](const BlockValues& b) {
                     Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n + m2 + p2, n + m2 + p2);
                     F.topLeftCorner(n, n) = sym2(A * b[0]) + sym2(B1 * b[1]);
                     F.block(0, n, n, m2) = B2;
                     F.block(n, 0, m2, n) = B2.transpose();
                     F.block(0, n + m2, n, p2) = b[0] * C2.transpose();
                     F.block(n + m2, 0, p2, n) = C2 * b[0];
                     F.block(n, n, m2, m2) = -cap * Eigen::MatrixXd::Identity(m2, m2);
                     F.block(n + m2, n + m2, p2, p2) = -cap * Eigen::MatrixXd::Identity(p2, p2);
                     return F;
                 }});
        }
    }

    if (spec.z_norm_bound.has_value()) {
        const double nu = *spec.z_norm_bound;
        const int zr = m1, zc = n;
        problem.constraints.push_back(
            {"z_norm", zr + zc, [nu, zr, zc](const BlockValues& b) {
                 Eigen::MatrixXd F = Eigen::MatrixXd::Zero(zr + zc, zr + zc);
                 F.topLeftCorner(zr, zr) = -nu * Eigen::MatrixXd::Identity(zr, zr);
                 F.block(0, zr, zr, zc) = b[1];
                 F.block(zr, 0, zc, zr) = b[1].transpose();
                 F.bottomRightCorner(zc, zc) = -Eigen::MatrixXd::Identity(zc, zc);
                 return F;
             }});
    }
}

void add_p_form_constraints(LMIProblem& problem, const DesignSpec& spec) {
    const int n = static_cast<int>(spec.vertices.front().rows());
    const Eigen::MatrixXd B = spec.B2;
    const Eigen::MatrixXd C = spec.C2;
    const Eigen::MatrixXd D = spec.D2;
    const int m = static_cast<int>(B.cols());
    const int p = static_cast<int>(C.rows());
    // Strictness lives on the state block only (supply inequalities may be
    // structurally marginal in the input/output directions).
    const double eps_state = problem.eps;

    for (std::size_t v = 0; v < spec.vertices.size(); ++v) {
        const Eigen::MatrixXd A = spec.vertices[v];
        const double lambda = spec.lambda;
        const std::string tag = "_v" + std::to_string(v);

        if (spec.kind == "pgain") {
            const double gamma = spec.gamma;
            problem.constraints.push_back(
                {"pgain" + tag, n + m + p,
                 [A, B, C, D, lambda, gamma, eps_state, n, m, p](const BlockValues& b) {
                     Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n + m + p, n + m + p);
                     F.topLeftCorner(n, n) = sym2(A.transpose() * b[0]) + 2.0 * lambda * b[0] +
                                             eps_state * Eigen::MatrixXd::Identity(n, n);
                     F.block(0, n, n, m) = b[0] * B;
                     F.block(n, 0, m, n) = B.transpose() * b[0];
                     F.block(0, n + m, n, p) = C.transpose();
                     F.block(n + m, 0, p, n) = C;
                     F.block(n, n, m, m) = -gamma * Eigen::MatrixXd::Identity(m, m);
                     F.block(n, n + m, m, p) = D.transpose();
                     F.block(n + m, n, p, m) = D;
                     F.block(n + m, n + m, p, p) = -gamma * Eigen::MatrixXd::Identity(p, p);
                     return F;
                 }});
        } else { // "passivity"
            const double mu = spec.mu;
            const double alpha = spec.alpha;
            if (alpha > 0.0) {
                problem.constraints.push_back(
                    {"passivity" + tag, n + m + p,
                     [A, B, C, D, lambda, mu, alpha, eps_state, n, m, p](const BlockValues& b) {
                         Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n + m + p, n + m + p);
                         F.topLeftCorner(n, n) = sym2(A.transpose() * b[0]) +
                                                 2.0 * lambda * b[0] +
                                                 eps_state * Eigen::MatrixXd::Identity(n, n);
                         const Eigen::MatrixXd off = b[0] * B - C.transpose();
                         F.block(0, n, n, m) = off;
                         F.block(n, 0, m, n) = off.transpose();
                         F.block(0, n + m, n, p) = C.transpose();
                         F.block(n + m, 0, p, n) = C;
                         F.block(n, n, m, m) =
                             -(D + D.transpose()) - mu * Eigen::MatrixXd::Identity(m, m);
                         F.block(n, n + m, m, p) = D.transpose();
                         F.block(n + m, n, p, m) = D;
                         F.block(n + m, n + m, p, p) = -(1.0 / alpha) * Eigen::MatrixXd::Identity(p, p);
                         return F;
                     }});
            } else {
                problem.constraints.push_back(
                    {"passivity" + tag, n + m,
                     [A, B, C, D, lambda, mu, eps_state, n, m](const BlockValues& b) {
                         Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n + m, n + m);
                         F.topLeftCorner(n, n) = sym2(A.transpose() * b[0]) +
                                                 2.0 * lambda * b[0] +
                                                 eps_state * Eigen::MatrixXd::Identity(n, n);
                         const Eigen::MatrixXd off = b[0] * B - C.transpose();
                         F.block(0, n, n, m) = off;
                         F.block(n, 0, m, n) = off.transpose();
                         F.block(n, n, m, m) =
                             -(D + D.transpose()) - mu * Eigen::MatrixXd::Identity(m, m);
                         return F;
                     }});
            }
        }
    }
}

} // namespace

LMIProblem build_problem(const DesignSpec& spec) {
    if (spec.vertices.empty()) throw InvalidInput("build_problem: empty vertex list");
    const int n = static_cast<int>(spec.vertices.front().rows());
    for (const auto& A : spec.vertices)
        if (A.rows() != n || A.cols() != n)
            throw InvalidInput("build_problem: vertex dimension mismatch");

    LMIProblem problem;
    problem.eps = spec.eps > 0.0 ? spec.eps : default_epsilon(spec.vertices);
    problem.lambda = spec.lambda;
    problem.vertices = spec.vertices;

    if (spec.kind == "nominal" || spec.kind == "robust" || spec.kind == "passive") {
        if (spec.B1.rows() != n || spec.B1.cols() < 1)
            throw InvalidInput("build_problem: B1 must be n x m");
        if (spec.kind != "nominal" || spec.gain_cap.has_value()) {
            if (spec.B2.rows() != n || spec.C2.cols() != n)
                throw InvalidInput("build_problem: port dimensions must match the state");
        }
        problem.blocks.push_back({"Y", BlockKind::Symmetric, n, n});
        problem.blocks.push_back(
            {"Z", BlockKind::Rectangular, static_cast<int>(spec.B1.cols()), n});
        add_y_form_constraints(problem, spec);
    } else if (spec.kind == "pgain" || spec.kind == "passivity") {
        if (spec.B2.rows() != n || spec.C2.cols() != n || spec.D2.rows() != spec.C2.rows() ||
            spec.D2.cols() != spec.B2.cols())
            throw InvalidInput("build_problem: (B, C, D) dimensions must match the state");
        if (spec.kind == "passivity" && spec.alpha < 0.0)
            throw InvalidInput("build_problem: passivity excess alpha must be >= 0");
        problem.blocks.push_back({"P", BlockKind::Symmetric, n, n});
        add_p_form_constraints(problem, spec);
        for (auto& c : problem.constraints) c.strict = false;
    } else {
        throw InvalidInput("build_problem: unknown kind '" + spec.kind + "'");
    }
    return problem;
}

namespace {

BlockValues initial_y_form(const DesignSpec& spec, const LMIProblem& problem) {
    BlockValues init = problem.zero_blocks();
    const int n = static_cast<int>(spec.vertices.front().rows());
    try {
        const Eigen::MatrixXd M =
            spec.vertices.front() + spec.lambda * Eigen::MatrixXd::Identity(n, n);
        init[0] = solve_lyapunov_like(M, Eigen::MatrixXd::Identity(n, n));
    } catch (const Error&) {
        init[0] = Eigen::MatrixXd::Identity(n, n);
    }
    // Port designs live at the port's scale (the off-diagonal pairs B2 with
    // Y*C2^T); start there instead of walking orders of magnitude.
    if (spec.kind == "passive" && spec.B2.size() > 0) {
        const double port = spec.B2.norm() / std::max(1.0, spec.C2.norm());
        const double now = init[0].norm();
        if (now > 0.0 && port > now) init[0] *= port / now;
    }
    return init;
}

DesignResult solve_design(DesignSpec spec, const DesignOptions& options) {
    const int n = static_cast<int>(spec.vertices.front().rows());
    for (const auto& A : spec.vertices) {
        const int split = count_right_of_rate(A, spec.lambda);
        if (split != 2)
            throw PreconditionFailed(
                "design: rate must leave exactly two vertex eigenvalues right of -lambda (got " +
                std::to_string(split) + ")");
    }
    if (spec.eps <= 0.0) spec.eps = default_epsilon(spec.vertices);

    LMIProblem problem = build_problem(spec);
    LMIOptions lmi_options;
    lmi_options.seed = options.seed;
    lmi_options.initial =
        options.initial_guess.has_value() ? *options.initial_guess : initial_y_form(spec, problem);

    SolveOutcome outcome = solve_feasibility(problem, lmi_options);
    if (!outcome.report.feasible)
        throw Infeasible("design (" + spec.kind + "): " + outcome.report.message,
                         outcome.report.best_residual);

    DesignResult result;
    result.spec = spec;
    result.seed = options.seed;
    result.Y = outcome.solution->blocks[0];
    result.Z = outcome.solution->blocks[1];
    result.residuals = outcome.solution->residuals;

    const SymmetricEigen ydec = symmetric_eigendecomposition(result.Y);
    result.inertia = ydec.inertia;
    if (result.inertia.neg != 2 || result.inertia.zero != 0 || result.inertia.pos != n - 2)
        throw InertiaMismatch("design: Y inertia (" + std::to_string(result.inertia.neg) + "," +
                              std::to_string(result.inertia.zero) + "," +
                              std::to_string(result.inertia.pos) + ") != (2,0," +
                              std::to_string(n - 2) + ")");

    Eigen::FullPivLU<Eigen::MatrixXd> lu(result.Y);
    if (!lu.isInvertible()) throw InertiaMismatch("design: Y is numerically singular");
    const Eigen::MatrixXd Yinv = lu.inverse();
    result.P = 0.5 * (Yinv + Yinv.transpose());
    result.K = (result.Z * Yinv).row(0);
    result.dc_gain =
        -(result.Z * Yinv * spec.vertices.front().partialPivLu().solve(spec.B1))(0, 0);

    const double untransformed = recheck_untransformed(result);
    if (!(untransformed < 0.0))
        throw NumericalSingularity("design: untransformed P-form re-check failed (max eig " +
                                   std::to_string(untransformed) + ")");

    double worst = -std::numeric_limits<double>::infinity();
    for (double r : result.residuals) worst = std::max(worst, r);
    result.certificate.p = 2;
    result.certificate.lambda = spec.lambda;
    result.certificate.method = DominanceCertificate::Method::LMI;
    result.certificate.P = result.P;
    result.certificate.margin = -worst;
    return result;
}

bool design_acceptable(const DesignResult& r, const DesignOptions& options) {
    if (options.ensure_unique_equilibrium && !(r.dc_gain < 1.0)) return false;
    return r.K.cwiseAbs().maxCoeff() <= options.gain_sanity;
}

// Feasibility alone can return a needlessly large-scale (Y, Z); tighten the
// Z-norm cap geometrically (warm-starting each round from the previous
// solution with Z rescaled onto the cap) until the gains are sane and the
// DC-gain goal holds.
DesignResult solve_design_with_polish(DesignSpec spec, DesignOptions options) {
    DesignResult current = solve_design(spec, options);
    if (design_acceptable(current, options)) return current;

    double nu = current.Z.squaredNorm();
    const double z_floor = 1e-12 * std::max(1.0, nu);
    for (int attempt = 0; attempt < 40 && nu > z_floor; ++attempt) {
        nu *= 0.25;
        DesignSpec tightened = spec;
        tightened.z_norm_bound = nu;
        DesignOptions warm = options;
        BlockValues guess;
        guess.push_back(current.Y);
        guess.push_back(current.Z * std::sqrt(nu / std::max(current.Z.squaredNorm(), 1e-300)) *
                        0.999);
        warm.initial_guess = guess;
        try {
            current = solve_design(tightened, warm);
        } catch (const Error&) {
            break; // cap too tight for the constraint set
        }
        if (design_acceptable(current, options)) return current;
    }
    throw Infeasible("design: no polished solution met the gain/DC goals",
                     current.dc_gain);
}

DesignSpec make_base_spec(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B1, double lambda,
                          const DesignOptions& options) {
    DesignSpec spec;
    spec.vertices.push_back(A);
    for (const auto& V : options.extra_vertices) spec.vertices.push_back(V);
    spec.B1 = B1;
    spec.lambda = lambda;
    spec.instability = options.instability_constraint;
    spec.z_norm_bound = options.z_norm_bound;
    spec.gain_cap = options.gain_cap;
    if (options.eps.has_value()) spec.eps = *options.eps;
    return spec;
}

} // namespace

DesignResult design_2dominant(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, double lambda,
                              const DesignOptions& options) {
    DesignSpec spec = make_base_spec(A, B, lambda, options);
    spec.kind = "nominal";
    return solve_design_with_polish(std::move(spec), options);
}

DesignResult design_robust(const Eigen::MatrixXd& A, const Eigen::VectorXd& B1,
                           const Eigen::MatrixXd& B2, const Eigen::MatrixXd& C2, double lambda,
                           double gamma, const DesignOptions& options) {
    if (gamma <= 0.0) throw InvalidInput("design_robust: gamma must be positive");
    DesignSpec spec = make_base_spec(A, B1, lambda, options);
    spec.kind = "robust";
    spec.B2 = B2;
    spec.C2 = C2;
    spec.gamma = gamma;
    return solve_design_with_polish(std::move(spec), options);
}

DesignResult design_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& B1,
                            const Eigen::MatrixXd& B2, const Eigen::MatrixXd& C2, double lambda,
                            double mu, const DesignOptions& options) {
    DesignSpec spec = make_base_spec(A, B1, lambda, options);
    spec.kind = "passive";
    spec.B2 = B2;
    spec.C2 = C2;
    spec.mu = mu;
    return solve_design_with_polish(std::move(spec), options);
}

PrecompensatorResult design_precompensator(const Eigen::MatrixXd& A0, const Eigen::MatrixXd& B0,
                                           double lambda, std::optional<double> gamma,
                                           const Eigen::MatrixXd& C0, std::uint64_t seed) {
    const int n = static_cast<int>(A0.rows());
    if (A0.rows() != A0.cols() || B0.rows() != n)
        throw InvalidInput("design_precompensator: dimension mismatch");
    const int m = static_cast<int>(B0.cols());

    Eigen::MatrixXd ctrb(n, n * m);
    Eigen::MatrixXd block = B0;
    for (int i = 0; i < n; ++i) {
        ctrb.middleCols(i * m, m) = block;
        block = A0 * block;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ctrb);
    if (lu.rank() < n)
        throw UncontrollablePair("design_precompensator: (A0, B0) is not controllable");

    LMIProblem problem;
    problem.eps = default_epsilon({A0});
    problem.lambda = lambda;
    problem.vertices = {A0};
    problem.blocks.push_back({"Y0", BlockKind::Symmetric, n, n});
    problem.blocks.push_back({"Z0", BlockKind::Rectangular, m, n});
    problem.constraints.push_back(
        {"positive_definite", n,
         [](const BlockValues& b) -> Eigen::MatrixXd { return -b[0]; }});
    {
        const Eigen::MatrixXd A = A0, B = B0;
        problem.constraints.push_back(
            {"precomp", n, [A, B, lambda](const BlockValues& b) -> Eigen::MatrixXd {
                 return sym2(A * b[0]) + sym2(B * b[1]) + 2.0 * lambda * b[0];
             }});
    }
    if (gamma.has_value()) {
        if (C0.cols() != n) throw InvalidInput("design_precompensator: C0 required with gamma");
        const Eigen::MatrixXd A = A0, B = B0, C = C0;
        const double g = *gamma;
        const int p = static_cast<int>(C.rows());
        problem.constraints.push_back(
            {"precomp_gain", n + m + p, [A, B, C, g, lambda, n, m, p](const BlockValues& b) {
                 Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n + m + p, n + m + p);
                 F.topLeftCorner(n, n) = sym2(A * b[0]) + sym2(B * b[1]) + 2.0 * lambda * b[0];
                 F.block(0, n, n, m) = B;
                 F.block(n, 0, m, n) = B.transpose();
                 F.block(0, n + m, n, p) = b[0] * C.transpose();
                 F.block(n + m, 0, p, n) = C * b[0];
                 F.block(n, n, m, m) = -g * Eigen::MatrixXd::Identity(m, m);
                 F.block(n + m, n + m, p, p) = -g * Eigen::MatrixXd::Identity(p, p);
                 return F;
             }});
    }

    LMIOptions lmi_options;
    lmi_options.seed = seed;
    BlockValues init = problem.zero_blocks();
    init[0] = Eigen::MatrixXd::Identity(n, n);
    lmi_options.initial = init;

    SolveOutcome outcome = solve_feasibility(problem, lmi_options);
    if (!outcome.report.feasible)
        throw Infeasible("design_precompensator: " + outcome.report.message,
                         outcome.report.best_residual);

    PrecompensatorResult result;
    result.Y0 = outcome.solution->blocks[0];
    result.Z0 = outcome.solution->blocks[1];
    result.K0 = result.Z0 * result.Y0.inverse();
    result.residuals = outcome.solution->residuals;
    return result;
}

namespace {

SupplyCertificate solve_supply(DesignSpec spec, const Inertia& target, std::uint64_t seed) {
    if (spec.eps <= 0.0) spec.eps = default_epsilon(spec.vertices);
    LMIProblem problem = build_problem(spec);
    LMIOptions options;
    options.seed = seed;
    BlockValues init = problem.zero_blocks();
    const int n = static_cast<int>(spec.vertices.front().rows());
    try {
        const Eigen::MatrixXd M =
            (spec.vertices.front() + spec.lambda * Eigen::MatrixXd::Identity(n, n)).transpose();
        init[0] = solve_lyapunov_like(M, Eigen::MatrixXd::Identity(n, n));
    } catch (const Error&) {
        init[0] = Eigen::MatrixXd::Identity(n, n);
    }
    options.initial = init;

    SolveOutcome outcome = solve_feasibility(problem, options);
    if (!outcome.report.feasible)
        throw Infeasible("verify (" + spec.kind + "): " + outcome.report.message,
                         outcome.report.best_residual);

    SupplyCertificate cert;
    cert.spec = spec;
    cert.P = outcome.solution->blocks[0];
    cert.residuals = outcome.solution->residuals;
    cert.inertia = inertia_of(cert.P);
    if (!(cert.inertia == target))
        throw InertiaMismatch("verify (" + spec.kind + "): storage inertia (" +
                              std::to_string(cert.inertia.neg) + "," +
                              std::to_string(cert.inertia.zero) + "," +
                              std::to_string(cert.inertia.pos) + ") missed the target");
    return cert;
}

} // namespace

SupplyCertificate verify_p_gain(const std::vector<Eigen::MatrixXd>& vertices,
                                const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
                                const Eigen::MatrixXd& D, double lambda, double gamma,
                                const Inertia& target, std::optional<double> eps,
                                std::uint64_t seed) {
    if (gamma <= 0.0) throw InvalidInput("verify_p_gain: gamma must be positive");
    DesignSpec spec;
    spec.kind = "pgain";
    spec.vertices = vertices;
    spec.B2 = B;
    spec.C2 = C;
    spec.D2 = D;
    spec.lambda = lambda;
    spec.gamma = gamma;
    if (eps.has_value()) spec.eps = *eps;
    return solve_supply(std::move(spec), target, seed);
}

SupplyCertificate verify_passivity(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                   const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
                                   double lambda, double alpha, double mu, const Inertia& target,
                                   std::optional<double> eps, std::uint64_t seed) {
    if (alpha < 0.0) throw InvalidInput("verify_passivity: alpha must be >= 0");
    DesignSpec spec;
    spec.kind = "passivity";
    spec.vertices = {A};
    spec.B2 = B;
    spec.C2 = C;
    spec.D2 = D;
    spec.lambda = lambda;
    spec.alpha = alpha;
    spec.mu = mu;
    if (eps.has_value()) spec.eps = *eps;
    return solve_supply(std::move(spec), target, seed);
}

double recheck_untransformed(const DesignResult& result) {
    const Eigen::MatrixXd& P = result.P;
    const int n = static_cast<int>(P.rows());
    const Eigen::MatrixXd BK = result.spec.B1 * result.K.matrix();
    double worst = -std::numeric_limits<double>::infinity();
    auto max_eig = [](const Eigen::MatrixXd& M) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()),
                                                          Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    };
    for (const auto& A : result.spec.vertices) {
        const Eigen::MatrixXd shifted = A + result.spec.lambda * Eigen::MatrixXd::Identity(n, n);
        worst = std::max(worst, max_eig(shifted.transpose() * P + P * shifted));
        const Eigen::MatrixXd closed = shifted + BK;
        worst = std::max(worst, max_eig(closed.transpose() * P + P * closed));
        if (result.spec.instability) {
            const Eigen::MatrixXd origin = A + BK;
            worst = std::max(worst, max_eig(origin.transpose() * P + P * origin));
        }
    }
    return worst;
}

} // namespace mixedosc
