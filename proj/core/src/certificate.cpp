#include "mixedosc/certificate.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mixedosc/errors.hpp"

namespace mixedosc {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& M) {
    json j;
    j["rows"] = M.rows();
    j["cols"] = M.cols();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(M.size()));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index jj = 0; jj < M.cols(); ++jj) data.push_back(M(i, jj));
    j["data"] = data; // row-major
    return j;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw InvalidInput("certificate: matrix payload size mismatch");
    Eigen::MatrixXd M(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index jj = 0; jj < cols; ++jj) M(i, jj) = data[k++];
    return M;
}

json optional_double_to_json(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

double optional_double_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null())
        return std::numeric_limits<double>::quiet_NaN();
    return j.at(key).get<double>();
}

} // namespace

CertificateDocument make_certificate(const DesignResult& result) {
    CertificateDocument doc;
    doc.spec = result.spec;
    doc.Y = result.Y;
    doc.Z = result.Z;
    doc.K = result.K;
    doc.P = result.P;
    doc.inertia = result.inertia;
    doc.residuals = result.residuals;
    doc.seed = result.seed;
    return doc;
}

CertificateDocument make_certificate(const SupplyCertificate& cert, std::uint64_t seed) {
    CertificateDocument doc;
    doc.spec = cert.spec;
    doc.P = cert.P;
    doc.inertia = cert.inertia;
    doc.residuals = cert.residuals;
    doc.seed = seed;
    return doc;
}

std::string certificate_to_json(const CertificateDocument& doc) {
    json j;
    j["version"] = doc.version;
    j["kind"] = doc.spec.kind;
    j["lambda"] = doc.spec.lambda;
    j["epsilon"] = doc.spec.eps;
    j["instability"] = doc.spec.instability;
    j["gamma"] = optional_double_to_json(doc.spec.gamma);
    j["mu"] = optional_double_to_json(doc.spec.mu);
    j["alpha"] = optional_double_to_json(doc.spec.alpha);
    if (doc.spec.z_norm_bound.has_value()) j["nu"] = *doc.spec.z_norm_bound;
    else j["nu"] = nullptr;
    if (doc.spec.gain_cap.has_value()) j["gain_cap"] = *doc.spec.gain_cap;
    else j["gain_cap"] = nullptr;

    json vertices = json::array();
    for (const auto& A : doc.spec.vertices) vertices.push_back(matrix_to_json(A));
    j["vertices"] = vertices;
    j["B1"] = matrix_to_json(doc.spec.B1);
    j["B2"] = matrix_to_json(doc.spec.B2);
    j["C2"] = matrix_to_json(doc.spec.C2);
    j["D2"] = matrix_to_json(doc.spec.D2);

    j["Y"] = matrix_to_json(doc.Y);
    j["Z"] = matrix_to_json(doc.Z);
    j["K"] = matrix_to_json(doc.K);
    j["P"] = matrix_to_json(doc.P);
    j["inertia"] = {doc.inertia.neg, doc.inertia.zero, doc.inertia.pos};
    j["residuals"] = doc.residuals;
    j["seed"] = doc.seed;
    return j.dump(2) + "\n";
}

CertificateDocument certificate_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("certificate: JSON parse error: ") + e.what());
    }
    try {
        CertificateDocument doc;
        doc.version = j.at("version").get<int>();
        doc.spec.kind = j.at("kind").get<std::string>();
        doc.spec.lambda = j.at("lambda").get<double>();
        doc.spec.eps = j.at("epsilon").get<double>();
        doc.spec.instability = j.at("instability").get<bool>();
        doc.spec.gamma = optional_double_from_json(j, "gamma");
        doc.spec.mu = optional_double_from_json(j, "mu");
        doc.spec.alpha = optional_double_from_json(j, "alpha");
        if (j.contains("nu") && !j.at("nu").is_null())
            doc.spec.z_norm_bound = j.at("nu").get<double>();
        if (j.contains("gain_cap") && !j.at("gain_cap").is_null())
            doc.spec.gain_cap = j.at("gain_cap").get<double>();
        for (const auto& v : j.at("vertices")) doc.spec.vertices.push_back(matrix_from_json(v));
        doc.spec.B1 = matrix_from_json(j.at("B1"));
        doc.spec.B2 = matrix_from_json(j.at("B2"));
        doc.spec.C2 = matrix_from_json(j.at("C2"));
        doc.spec.D2 = matrix_from_json(j.at("D2"));
        doc.Y = matrix_from_json(j.at("Y"));
        doc.Z = matrix_from_json(j.at("Z"));
        doc.K = matrix_from_json(j.at("K"));
        doc.P = matrix_from_json(j.at("P"));
        const auto inertia = j.at("inertia").get<std::vector<int>>();
        if (inertia.size() != 3) throw InvalidInput("certificate: inertia must have 3 entries");
        doc.inertia = Inertia{inertia[0], inertia[1], inertia[2]};
        doc.residuals = j.at("residuals").get<std::vector<double>>();
        doc.seed = j.at("seed").get<std::uint64_t>();
        return doc;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("certificate: missing or malformed field: ") + e.what());
    }
}

void save_certificate(const CertificateDocument& doc, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw InvalidInput("save_certificate: cannot open " + tmp.string());
        out << certificate_to_json(doc);
    }
    std::filesystem::rename(tmp, path);
}

CertificateDocument load_certificate(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("load_certificate: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return certificate_from_json(text);
}

std::vector<double> recompute_residuals(const CertificateDocument& doc) {
    const LMIProblem problem = build_problem(doc.spec);
    BlockValues values;
    if (doc.spec.kind == "pgain" || doc.spec.kind == "passivity") {
        values.push_back(doc.P);
    } else {
        values.push_back(doc.Y);
        values.push_back(doc.Z);
    }
    return constraint_residuals(problem, values);
}

bool certificate_passes(const CertificateDocument& doc, std::string* why) {
    std::vector<double> residuals;
    try {
        residuals = recompute_residuals(doc);
    } catch (const Error& e) {
        if (why) *why = e.what();
        return false;
    }
    const double slack = 1e-9 * std::max(1.0, doc.spec.eps);
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (!(residuals[i] <= -doc.spec.eps + slack)) {
            if (why)
                *why = "constraint " + std::to_string(i) + " residual " +
                       std::to_string(residuals[i]) + " violates -epsilon";
            return false;
        }
    }
    const Eigen::MatrixXd& S = (doc.spec.kind == "pgain" || doc.spec.kind == "passivity")
                                   ? doc.P
                                   : doc.Y;
    const Inertia fresh = inertia_of(S);
    if (!(fresh == doc.inertia)) {
        if (why) *why = "stored inertia disagrees with recomputation";
        return false;
    }
    return true;
}

} // namespace mixedosc
