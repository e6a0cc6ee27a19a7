#include "kirchhoff/serialize.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

std::string format_number(double value) {
  if (!is_defined(value)) return {};
  std::array<char, 40> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%.17g", value);
  return buffer.data();
}

namespace {

void append_row(std::string& out, double t, std::span<const ModalVector> columns,
                std::span<const double> extra = {}) {
  out += format_number(t);
  for (const auto& vec : columns)
    for (double v : vec) {
      out += ',';
      out += format_number(v);
    }
  for (double v : extra) {
    out += ',';
    out += format_number(v);
  }
  out += '\n';
}

void append_indexed_header(std::string& out, std::string_view prefix, std::size_t n) {
  for (std::size_t k = 1; k <= n; ++k) {
    out += ',';
    out += prefix;
    out += std::to_string(k);
  }
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  const std::size_t n = traj.u.empty() ? 0 : traj.u.front().size();
  std::string out = "t";
  append_indexed_header(out, "u_", n);
  append_indexed_header(out, "up_", n);
  if (traj.alpha) out += ",alpha";
  out += '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const std::array<ModalVector, 2> cols{traj.u[i], traj.uprime[i]};
    if (traj.alpha) {
      const double a = (*traj.alpha)[i];
      append_row(out, traj.times[i], cols, std::span<const double>(&a, 1));
    } else {
      append_row(out, traj.times[i], cols);
    }
  }
  return out;
}

std::string corrector_csv(const CorrectorTrajectory& corr) {
  const std::size_t n = corr.theta.empty() ? 0 : corr.theta.front().size();
  std::string out = "t";
  append_indexed_header(out, "theta_", n);
  append_indexed_header(out, "thetap_", n);
  out += '\n';
  for (std::size_t i = 0; i < corr.times.size(); ++i) {
    const std::array<ModalVector, 2> cols{corr.theta[i], corr.theta_prime[i]};
    append_row(out, corr.times[i], cols);
  }
  return out;
}

std::string energy_csv(const EnergySeries& series) {
  std::string out = "t";
  for (const auto& ch : series.channels) {
    out += ',';
    out += ch.name;
  }
  out += '\n';
  std::vector<double> row(series.channels.size());
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    for (std::size_t c = 0; c < series.channels.size(); ++c) row[c] = series.channels[c].values[i];
    append_row(out, series.times[i], {}, row);
  }
  return out;
}

std::string apriori_csv(std::span<const AprioriSample> samples) {
  std::string out = "t,lhs_basic,lhs_basicplus,rhs\n";
  for (const auto& s : samples) {
    const std::array<double, 3> row{s.lhs_basic, s.lhs_basicplus, s.rhs};
    append_row(out, s.t, {}, row);
  }
  return out;
}

std::string floor_csv(std::span<const FloorSample> samples) {
  std::string out = "t,H,floor,margin\n";
  for (const auto& s : samples) {
    const std::array<double, 3> row{s.hamiltonian, s.floor, s.margin};
    append_row(out, s.t, {}, row);
  }
  return out;
}

std::string error_csv(const ErrorSeries& es) {
  std::string out =
      "t,rho_sq,rho_half_sq,rho_one_sq,rprime_sq,rprime_half_sq,"
      "w_rho_half_sq,w_rho_one_sq,w_rprime_sq,integral_low,integral_high\n";
  for (std::size_t i = 0; i < es.times.size(); ++i) {
    const std::array<double, 10> row{es.rho_sq[i],
                                     es.rho_half_sq[i],
                                     es.rho_one_sq[i],
                                     es.rprime_sq[i],
                                     es.rprime_half_sq[i],
                                     es.weighted_rho_half_sq[i],
                                     es.weighted_rho_one_sq[i],
                                     es.weighted_rprime_sq[i],
                                     es.integral_low[i],
                                     es.integral_high[i]};
    append_row(out, es.times[i], {}, row);
  }
  return out;
}

std::string report_json(const VerificationReport& report, std::string_view config_json) {
  nlohmann::ordered_json doc;
  doc["config"] = config_json.empty() ? nlohmann::ordered_json::object()
                                      : nlohmann::ordered_json::parse(config_json);
  doc["bounds_skipped"] = report.bounds_skipped;
  doc["verdict"] = std::string(to_string(report.overall()));
  auto& entries = doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    nlohmann::ordered_json item;
    item["quantity"] = std::string(to_string(e.predicted.quantity));
    item["kind"] = std::string(to_string(e.predicted.kind));
    item["predicted_exponent"] = e.predicted.exponent;
    if (e.predicted.weight_exponent)
      item["weight_exponent"] = *e.predicted.weight_exponent;
    if (e.fitted)
      item["fitted_exponent"] = e.fitted->exponent;
    else
      item["fitted_exponent"] = nullptr;
    item["verdict"] = std::string(to_string(e.verdict));
    item["margin"] = e.margin;
    entries.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

}  // namespace kirchhoff
