#include "mixedosc/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mixedosc/certificate.hpp"
#include "mixedosc/equilibria.hpp"
#include "mixedosc/robustness.hpp"

namespace mixedosc::cli {

namespace {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw Error("cannot open output file " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::filesystem::path with_suffix(const std::filesystem::path& path, const std::string& suffix) {
    std::filesystem::path out = path;
    const std::string stem = out.stem().string();
    const std::string ext = out.extension().string();
    out.replace_filename(stem + suffix + ext);
    return out;
}

std::string sign_pattern(const Eigen::MatrixXd& K) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < K.size(); ++i) {
        const double v = K(i / K.cols(), i % K.cols());
        out += v > 0 ? '+' : (v < 0 ? '-' : '0');
        if (i + 1 < K.size()) out += ' ';
    }
    return out + "]";
}

struct DesignInputs {
    Eigen::MatrixXd A;
    Eigen::VectorXd B1;
    Eigen::RowVectorXd C1;
    ClosedLoopSystem open_loop;
};

DesignInputs design_inputs(const Config& cfg) {
    MixedFeedbackParams params = cfg.params();
    const ClosedLoopSystem sys = assemble_closed_loop(params);
    return {sys.A, sys.B1, sys.C1, sys};
}

Eigen::MatrixXd vertex_matrix(const Config& cfg, double tau_p, double tau_n) {
    MixedFeedbackParams params = cfg.params();
    params.tau_p = tau_p;
    params.tau_n = tau_n;
    return assemble_closed_loop(params).A;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

int run_map(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
            std::ostream& log) {
    Config cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        DominanceMapConfig map_cfg;
        map_cfg.beta_min = cfg.beta_min;
        map_cfg.beta_max = cfg.beta_max;
        map_cfg.beta_points = cfg.beta_points;
        map_cfg.k_min = cfg.k_min;
        map_cfg.k_max = cfg.k_max;
        map_cfg.k_points = cfg.k_points;
        map_cfg.lambda = cfg.lambda;
        map_cfg.r = cfg.r_constant;
        map_cfg.omega_grid = cfg.omega_grid;

        const DominanceMapResult map = dominance_map(cfg.params(), map_cfg);

        std::string csv = "k,beta,label\n";
        for (std::size_t i = 0; i < map.betas.size(); ++i)
            for (std::size_t j = 0; j < map.ks.size(); ++j)
                csv += format_double(map.ks[j]) + "," + format_double(map.betas[i]) + "," +
                       to_string(map.at(static_cast<int>(i), static_cast<int>(j))) + "\n";
        write_atomic(out_path, csv);

        std::string curves = "beta,k0,k2\n";
        for (std::size_t i = 0; i < map.betas.size(); ++i)
            curves += format_double(map.betas[i]) + "," + format_double(map.k0_curve[i]) + "," +
                      format_double(map.k2_curve[i]) + "\n";
        write_atomic(with_suffix(out_path, "_curves"), curves);

        log << "map: " << map.betas.size() << " x " << map.ks.size() << " points -> "
            << out_path.string() << "\n";
        return kExitOk;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run_design(const std::string& variant, const std::filesystem::path& config_path,
               const std::filesystem::path& out_path, std::ostream& log) {
    Config cfg;
    try {
        cfg = load_config(config_path);
        if (variant != "nominal" && variant != "parametric" && variant != "robust" &&
            variant != "passive")
            throw ConfigError("design: unknown variant '" + variant + "'");
        if (variant == "robust" && !cfg.lmi.gamma.has_value())
            throw ConfigError("design robust: config lmi.gamma is required");
        if (variant == "passive" && !cfg.lmi.mu.has_value())
            throw ConfigError("design passive: config lmi.mu is required");
        if (variant == "passive" && !cfg.cable.has_value())
            throw ConfigError("design passive: config cable section (port data) is required");
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const DesignInputs in = design_inputs(cfg);
        DesignOptions options;
        options.instability_constraint = cfg.lmi.instability;
        options.z_norm_bound = cfg.lmi.nu;
        options.gain_cap = cfg.lmi.gain_cap;
        options.eps = cfg.lmi.epsilon;
        options.seed = cfg.seed;
        options.ensure_unique_equilibrium = cfg.lmi.ensure_unique_equilibrium;

        DesignResult result = [&]() {
            if (variant == "nominal") {
                return design_2dominant(in.A, in.B1, cfg.lambda, options);
            }
            if (variant == "parametric") {
                const double dp = cfg.lmi.tau_p_pct / 100.0;
                const double dn = cfg.lmi.tau_n_pct / 100.0;
                for (double sp : {-dp, dp})
                    for (double sn : {-dn, dn})
                        options.extra_vertices.push_back(vertex_matrix(
                            cfg, cfg.tau_p * (1.0 + sp), cfg.tau_n * (1.0 + sn)));
                return design_2dominant(in.A, in.B1, cfg.lambda, options);
            }
            if (variant == "robust") {
                // Default multiplicative-output ports installed by assembly.
                return design_robust(in.A, in.B1, in.open_loop.B2, in.open_loop.C2, cfg.lambda,
                                     *cfg.lmi.gamma, options);
            }
            // passive: membrane current port B2 = [1/c0, 0, 0]^T, voltage row C2 = C1.
            Eigen::VectorXd b2 = Eigen::VectorXd::Zero(in.A.rows());
            b2(0) = 1.0 / cfg.cable->cm; // C0 = Cm on the membrane node
            Eigen::MatrixXd c2 = in.C1;
            return design_passive(in.A, in.B1, b2, c2, cfg.lambda, *cfg.lmi.mu, options);
        }();

        const CertificateDocument doc = make_certificate(result);
        save_certificate(doc, out_path);

        double worst = -std::numeric_limits<double>::infinity();
        for (double r : result.residuals) worst = std::max(worst, r);
        log << "design " << variant << ": feasible\n";
        log << "  inertia(Y) = (" << result.inertia.neg << "," << result.inertia.zero << ","
            << result.inertia.pos << ")\n";
        log << "  max residual = " << format_double(worst) << " (eps = "
            << format_double(result.spec.eps) << ")\n";
        log << "  K = [";
        for (Eigen::Index i = 0; i < result.K.size(); ++i) {
            log << format_double(result.K(i));
            if (i + 1 < result.K.size()) log << ", ";
        }
        log << "]  sign pattern " << sign_pattern(result.K) << "\n";
        log << "  dc_gain = " << format_double(result.dc_gain)
            << (result.dc_gain < 1.0 ? " < 1 (unique unstable equilibrium)" : " >= 1") << "\n";
        log << "  certificate -> " << out_path.string() << "\n";
        return kExitOk;
    } catch (const InertiaMismatch& e) {
        log << "error: " << e.what() << "\n";
        return kExitInertia;
    } catch (const Infeasible& e) {
        log << "error: " << e.what() << " (best residual " << format_double(e.best_residual())
            << ")\n";
        return kExitInfeasible;
    } catch (const PreconditionFailed& e) {
        log << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run_simulate(const std::filesystem::path& config_path,
                 const std::optional<std::filesystem::path>& cert_path,
                 const std::filesystem::path& out_path, std::ostream& log) {
    Config cfg;
    std::optional<CertificateDocument> cert;
    try {
        cfg = load_config(config_path);
        if (cert_path.has_value()) {
            cert = load_certificate(*cert_path);
            const Eigen::Index n = design_inputs(cfg).A.rows();
            if (cert->K.size() != n)
                throw ConfigError("simulate: certificate K dimension does not match the config");
        }
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        MixedFeedbackParams params = cfg.params();
        const StateSpace plant = to_state_space(params.plant);
        Eigen::RowVectorXd K;
        if (cert.has_value()) {
            Eigen::MatrixXd Km = cert->K;
            if (Km.rows() != 1) Km.transposeInPlace();
            K = Km.row(0);
        } else {
            K = feedback_row(cfg.k, cfg.beta, plant.order());
        }
        ClosedLoopSystem sys =
            assemble_closed_loop(plant, cfg.tau_p, cfg.tau_n, K,
                                 Saturation::tanh_default(cfg.saturation_bound));

        int n_states = sys.order();
        std::optional<InterconnectedSystem> combined;
        if (cfg.cable.has_value()) {
            Eigen::VectorXd b2 = Eigen::VectorXd::Zero(sys.order());
            b2(0) = 1.0 / cfg.cable->cm;
            sys.B2 = b2;
            sys.C2 = sys.C1;
            combined = interconnect(sys, *cfg.cable);
            n_states = combined->sys.order();
        }
        const ClosedLoopSystem& simsys = combined.has_value() ? combined->sys : sys;

        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n_states);
        if (!cfg.sim.x0.empty()) {
            if (static_cast<int>(cfg.sim.x0.size()) > n_states)
                throw InvalidInput("simulate: x0 has more entries than states");
            for (std::size_t i = 0; i < cfg.sim.x0.size(); ++i) x0(static_cast<int>(i)) = cfg.sim.x0[i];
        } else {
            x0(0) = 0.1;
        }

        const SimTrace trace = integrate(simsys, x0, cfg.reference(), cfg.horizon(), cfg.sim.tol);
        const OscillationVerdict verdict = classify_trace(trace);

        std::string csv = "t,y,r";
        for (int i = 1; i <= n_states; ++i) csv += ",x" + std::to_string(i);
        csv += "\n";
        for (std::size_t s = 0; s < trace.size(); ++s) {
            csv += format_double(trace.t[s]) + "," + format_double(trace.y[s]) + "," +
                   format_double(trace.r[s]);
            for (int i = 0; i < n_states; ++i) csv += "," + format_double(trace.x[s](i));
            csv += "\n";
        }
        write_atomic(out_path, csv);

        if (combined.has_value()) {
            std::string nodes = "t";
            for (int i = 0; i <= combined->cable_segments; ++i) nodes += ",v" + std::to_string(i);
            nodes += "\n";
            for (std::size_t s = 0; s < trace.size(); ++s) {
                nodes += format_double(trace.t[s]);
                for (int i = 0; i <= combined->cable_segments; ++i)
                    nodes += "," + format_double(combined->node_voltage(trace.x[s], i));
                nodes += "\n";
            }
            write_atomic(with_suffix(out_path, "_nodes"), nodes);
        }

        std::ostringstream line;
        line << "verdict=" << to_string(verdict.kind);
        switch (verdict.kind) {
            case VerdictKind::Converged:
                line << " value=" << format_double(verdict.value);
                break;
            case VerdictKind::Oscillating:
                line << " amplitude=" << format_double(verdict.amplitude)
                     << " period=" << format_double(verdict.period);
                break;
            case VerdictKind::SwitchedEquilibrium:
                line << " old=" << format_double(verdict.old_value)
                     << " new=" << format_double(verdict.new_value);
                break;
            case VerdictKind::Undetermined:
                line << " diagnostics=\"" << verdict.diagnostics << "\"";
                break;
        }
        log << line.str() << "\n";
        return kExitOk;
    } catch (const IntegrationFailure& e) {
        log << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run_verify(const std::filesystem::path& cert_path, const std::filesystem::path& config_path,
               std::ostream& log) {
    Config cfg;
    CertificateDocument doc;
    try {
        cfg = load_config(config_path);
        doc = load_certificate(cert_path);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const Eigen::Index n = design_inputs(cfg).A.rows();
        if (doc.spec.vertices.empty() || doc.spec.vertices.front().rows() != n) {
            log << "error: certificate dimensions do not match the config\n";
            return kExitConfig;
        }
        std::string why;
        if (!certificate_passes(doc, &why)) {
            log << "verify: FAIL (" << why << ")\n";
            return kExitResidual;
        }
        const std::vector<double> residuals = recompute_residuals(doc);
        double worst = -std::numeric_limits<double>::infinity();
        for (double r : residuals) worst = std::max(worst, r);
        log << "verify: OK (max residual " << format_double(worst) << " <= -eps, inertia ("
            << doc.inertia.neg << "," << doc.inertia.zero << "," << doc.inertia.pos << "))\n";
        return kExitOk;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace mixedosc::cli
