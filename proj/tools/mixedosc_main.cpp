#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mixedosc/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mixed-feedback oscillator design toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string cert_path;

    CLI::App* analyze = app.add_subcommand("analyze", "frequency-domain analyses");
    analyze->require_subcommand(1);
    CLI::App* map = analyze->add_subcommand("map", "dominance map over the (k, beta) plane");
    map->add_option("--config", config_path, "JSON config")->required();
    map->add_option("--out", out_path, "output CSV (labels; bounds go to *_curves.csv)")->required();

    CLI::App* design = app.add_subcommand("design", "LMI state-feedback synthesis");
    std::string variant;
    design->add_option("variant", variant, "nominal | parametric | robust | passive")->required();
    design->add_option("--config", config_path, "JSON config")->required();
    design->add_option("--out", out_path, "certificate JSON output")->required();

    CLI::App* simulate = app.add_subcommand("simulate", "integrate the closed loop");
    simulate->add_option("--config", config_path, "JSON config")->required();
    simulate->add_option("--cert", cert_path, "optional design certificate (uses its K)");
    simulate->add_option("--out", out_path, "trace CSV output")->required();

    CLI::App* verify = app.add_subcommand("verify", "re-verify a certificate from scratch");
    verify->add_option("--cert", cert_path, "certificate JSON")->required();
    verify->add_option("--config", config_path, "JSON config")->required();

    CLI11_PARSE(app, argc, argv);

    if (map->parsed()) return mixedosc::cli::run_map(config_path, out_path, std::cout);
    if (design->parsed())
        return mixedosc::cli::run_design(variant, config_path, out_path, std::cout);
    if (simulate->parsed()) {
        std::optional<std::filesystem::path> cert;
        if (!cert_path.empty()) cert = cert_path;
        return mixedosc::cli::run_simulate(config_path, cert, out_path, std::cout);
    }
    if (verify->parsed()) return mixedosc::cli::run_verify(cert_path, config_path, std::cout);
    return 1;
}
