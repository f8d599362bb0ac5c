#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mixedosc/config.hpp"

namespace mixedosc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInfeasible = 4;
inline constexpr int kExitInertia = 5;
inline constexpr int kExitResidual = 6;

/// Shortest-width, 17-significant-digit, locale-independent formatting used
/// for every CSV field (deterministic across runs).
std::string format_double(double v);

int run_map(const std::filesystem::path& config_path, const std::filesystem::path& out_path,
            std::ostream& log);

int run_design(const std::string& variant, const std::filesystem::path& config_path,
               const std::filesystem::path& out_path, std::ostream& log);

int run_simulate(const std::filesystem::path& config_path,
                 const std::optional<std::filesystem::path>& cert_path,
                 const std::filesystem::path& out_path, std::ostream& log);

int run_verify(const std::filesystem::path& cert_path,
               const std::filesystem::path& config_path, std::ostream& log);

} // namespace mixedosc::cli
