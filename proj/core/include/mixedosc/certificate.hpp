#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mixedosc/synthesis.hpp"

namespace mixedosc {

/// Self-contained record of a synthesis (or supply-verification) run: the
/// problem data needed to rebuild every LMI constraint plus the solution
/// blocks, so verification recomputes residuals from scratch.
struct CertificateDocument {
    int version = 1;
    DesignSpec spec;
    Eigen::MatrixXd Y; // empty for P-form (verify) certificates
    Eigen::MatrixXd Z;
    Eigen::MatrixXd K;
    Eigen::MatrixXd P;
    Inertia inertia;
    std::vector<double> residuals;
    std::uint64_t seed = 1;
};

CertificateDocument make_certificate(const DesignResult& result);
CertificateDocument make_certificate(const SupplyCertificate& cert, std::uint64_t seed = 1);

std::string certificate_to_json(const CertificateDocument& doc);
CertificateDocument certificate_from_json(const std::string& text);

void save_certificate(const CertificateDocument& doc, const std::filesystem::path& path);
CertificateDocument load_certificate(const std::filesystem::path& path);

/// Rebuilds the constraint set from the stored problem data and evaluates
/// every residual at the stored solution blocks.
std::vector<double> recompute_residuals(const CertificateDocument& doc);

/// True when every recomputed residual is <= -eps (tiny slack for roundtrip
/// rounding) and the stored inertia matches a fresh eigendecomposition.
bool certificate_passes(const CertificateDocument& doc, std::string* why = nullptr);

} // namespace mixedosc
