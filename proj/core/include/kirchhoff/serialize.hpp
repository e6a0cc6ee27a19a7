#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "kirchhoff/analysis.hpp"
#include "kirchhoff/energies.hpp"
#include "kirchhoff/integrate.hpp"

namespace kirchhoff {

/// %.17g; undefined values render as an empty field.
std::string format_number(double value);

/// Header `t,u_1..u_N,up_1..up_N[,alpha]`.
std::string trajectory_csv(const Trajectory& traj);
/// Header `t,theta_1..theta_N,thetap_1..thetap_N`.
std::string corrector_csv(const CorrectorTrajectory& corr);
/// Header `t,<channel names...>`.
std::string energy_csv(const EnergySeries& series);
std::string apriori_csv(std::span<const AprioriSample> samples);
std::string floor_csv(std::span<const FloorSample> samples);
std::string error_csv(const ErrorSeries& errors);

/// {config, entries: [{quantity, kind, predicted_exponent, fitted_exponent, verdict, margin}]}
/// config must hold a serialized JSON value.
std::string report_json(const VerificationReport& report, std::string_view config_json);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

void write_text_file(const std::filesystem::path& path, std::string_view contents);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace kirchhoff
