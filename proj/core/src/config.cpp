#include "kirchhoff/config.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::Simulate:
      return "simulate";
    case PlanKind::Limit:
      return "limit";
    case PlanKind::SweepEps:
      return "sweep_eps";
    case PlanKind::RegimeGrid:
      return "regime_grid";
    case PlanKind::Verify:
      return "verify";
    case PlanKind::Corrector:
      return "corrector";
  }
  return "unknown";
}

bool ExperimentPlan::coercive() const {
  if (analysis.coercive) return *analysis.coercive;
  return spectrum && coercivity(*spectrum) > 0.0;
}

namespace {

// Typed access to one JSON object; every read is reported with its dotted key.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(label() + ": expected an object");
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : node_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw ConfigError(key_path(key) + ": unknown key");
    }
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)); }

  const json& at(std::string_view key) const {
    if (!has(key)) throw ConfigError(key_path(key) + ": required key is missing");
    return node_.at(std::string(key));
  }

  double number(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(key_path(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key_path(key) + ": must be finite");
    return x;
  }
  double number_or(std::string_view key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::size_t count(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError(key_path(key) + ": expected a nonnegative integer");
    return static_cast<std::size_t>(v.get<long long>());
  }

  bool boolean(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string text(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(key_path(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& item : v) {
      if (!item.is_number()) throw ConfigError(key_path(key) + ": expected an array of numbers");
      out.push_back(item.get<double>());
      if (!std::isfinite(out.back())) throw ConfigError(key_path(key) + ": entries must be finite");
    }
    return out;
  }

  Section child(std::string_view key) const { return Section(at(key), key_path(key)); }

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }

  const json& node_;
  std::string path_;
};

Spectrum parse_spectrum(const Section& s) {
  const std::string kind = s.text("kind");
  if (kind == "list") {
    s.allow({"kind", "values"});
    return Spectrum(s.numbers("values"));
  }
  if (kind == "power_law") {
    s.allow({"kind", "a", "q", "n"});
    return Spectrum::power_law(s.number("a"), s.number("q"), s.count("n"));
  }
  throw ConfigError(s.key_path("kind") + ": expected 'list' or 'power_law'");
}

Nonlinearity parse_nonlinearity(const Section& s) {
  const std::string kind = s.text("kind");
  if (kind == "power") {
    s.allow({"kind", "gamma"});
    Nonlinearity nl = PowerNonlinearity{s.number("gamma")};
    validate(nl);
    return nl;
  }
  if (kind == "table") {
    s.allow({"kind", "points"});
    const json& pts = s.at("points");
    const std::string where = s.key_path("points");
    if (!pts.is_array()) throw ConfigError(where + ": expected an array of [sigma, m] pairs");
    std::vector<std::pair<double, double>> points;
    for (const auto& item : pts) {
      if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
        throw ConfigError(where + ": expected an array of [sigma, m] pairs");
      points.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
    try {
      return TableNonlinearity(std::move(points));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(s.key_path("kind") + ": expected 'power' or 'table'");
}

Dissipation parse_dissipation(const Section& s) {
  const std::string kind = s.text("kind");
  Dissipation dis;
  if (kind == "power") {
    s.allow({"kind", "p"});
    dis = PowerLawDissipation{s.number("p")};
  } else if (kind == "constant") {
    s.allow({"kind", "delta"});
    dis = ConstantDissipation{s.number("delta")};
  } else {
    throw ConfigError(s.key_path("kind") + ": expected 'power' or 'constant'");
  }
  validate(dis);
  return dis;
}

std::size_t default_grid_count(double t_end) {
  // ~400 samples per decade of (1+t)
  return std::max<std::size_t>(
      16, static_cast<std::size_t>(std::ceil(400.0 * std::log10(1.0 + t_end))) + 1);
}

IntegratorSettings parse_settings(const Section& s) {
  s.allow({"rel_tol", "abs_tol", "max_step_factor", "blowup_threshold", "grid"});
  IntegratorSettings out;
  out.rel_tol = s.number_or("rel_tol", out.rel_tol);
  out.abs_tol = s.number_or("abs_tol", out.abs_tol);
  out.max_step_factor = s.number_or("max_step_factor", out.max_step_factor);
  out.blowup_threshold = s.number_or("blowup_threshold", out.blowup_threshold);
  out.grid.t_end = 100.0;
  bool count_given = false;
  if (s.has("grid")) {
    const Section g = s.child("grid");
    g.allow({"kind", "count", "t_end"});
    if (g.has("kind")) {
      const std::string kind = g.text("kind");
      if (kind == "log")
        out.grid.kind = GridKind::Log;
      else if (kind == "linear")
        out.grid.kind = GridKind::Linear;
      else
        throw ConfigError(g.key_path("kind") + ": expected 'log' or 'linear'");
    }
    out.grid.t_end = g.number_or("t_end", out.grid.t_end);
    if (g.has("count")) {
      out.grid.count = g.count("count");
      count_given = true;
    }
  }
  if (!count_given) out.grid.count = default_grid_count(out.grid.t_end);
  out.validate();
  return out;
}

std::vector<double> parse_axis(const Section& s, std::string_view key) {
  const json& v = s.at(key);
  if (v.is_array()) return s.numbers(key);
  const Section r = s.child(key);
  r.allow({"from", "to", "count"});
  const double from = r.number("from"), to = r.number("to");
  const std::size_t n = r.count("count");
  if (n < 1) throw ConfigError(r.key_path("count") + ": must be at least 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = n == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

AnalysisOptions parse_analysis(const Section& s) {
  s.allow({"tol_exponent", "window", "ks", "coercive", "hyperbolic", "check_lower", "oracle_tol",
           "random_instances", "order_target", "order_tol", "weighted_ratio_max",
           "monotone_slack"});
  AnalysisOptions a;
  a.tol_exponent = s.number_or("tol_exponent", a.tol_exponent);
  if (!(a.tol_exponent >= 0.0)) throw ConfigError(s.key_path("tol_exponent") + ": must be >= 0");
  if (s.has("window")) {
    const auto w = s.numbers("window");
    if (w.size() != 2 || !(w[0] >= 0.0) || !(w[0] < w[1]))
      throw ConfigError(s.key_path("window") + ": expected [t_lo, t_hi] with 0 <= t_lo < t_hi");
    a.window = FitWindow{w[0], w[1]};
  }
  if (s.has("ks")) {
    a.ks = s.numbers("ks");
    for (double k : a.ks)
      if (!(k >= 0.0)) throw ConfigError(s.key_path("ks") + ": entries must be nonnegative");
  }
  if (s.has("coercive")) a.coercive = s.boolean("coercive");
  if (s.has("hyperbolic")) a.hyperbolic = s.boolean("hyperbolic");
  if (s.has("check_lower")) a.check_lower = s.boolean("check_lower");
  a.oracle_tol = s.number_or("oracle_tol", a.oracle_tol);
  if (s.has("random_instances")) a.random_instances = s.count("random_instances");
  a.order_target = s.number_or("order_target", a.order_target);
  a.order_tol = s.number_or("order_tol", a.order_tol);
  a.weighted_ratio_max = s.number_or("weighted_ratio_max", a.weighted_ratio_max);
  a.monotone_slack = s.number_or("monotone_slack", a.monotone_slack);
  return a;
}

PlanKind parse_kind(const Section& s) {
  const std::string kind = s.text("kind");
  for (auto k : {PlanKind::Simulate, PlanKind::Limit, PlanKind::SweepEps, PlanKind::RegimeGrid,
                 PlanKind::Verify, PlanKind::Corrector})
    if (kind == to_string(k)) return k;
  throw ConfigError(
      "kind: expected one of simulate, limit, sweep_eps, regime_grid, verify, corrector");
}

ModalVector parse_vector(const Section& s, std::string_view key, const Spectrum& spec) {
  auto values = s.numbers(key);
  if (values.size() != spec.size())
    throw ConfigError(std::string(key) + ": length " + std::to_string(values.size()) +
                      " does not match spectrum size " + std::to_string(spec.size()));
  return ModalVector(std::move(values));
}

}  // namespace

ExperimentPlan load_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  const Section root(doc, "");
  root.allow({"kind", "spectrum", "m", "b", "eps", "eps_list", "u0", "u1", "settings", "analysis",
              "lattice", "jobs", "seed"});

  ExperimentPlan plan;
  plan.kind = parse_kind(root);
  const unsigned hw = std::thread::hardware_concurrency();
  plan.jobs = hw == 0 ? 1 : hw;
  if (root.has("jobs")) {
    plan.jobs = root.count("jobs");
    if (plan.jobs == 0) throw ConfigError("jobs: must be at least 1");
  }
  if (root.has("seed")) plan.seed = root.count("seed");
  plan.settings = root.has("settings") ? parse_settings(root.child("settings"))
                                       : parse_settings(Section(json::object(), "settings"));
  if (root.has("analysis")) plan.analysis = parse_analysis(root.child("analysis"));

  if (plan.kind == PlanKind::RegimeGrid) {
    const Section lattice = root.child("lattice");
    lattice.allow({"gamma", "p", "coercive"});
    plan.lattice.gammas = parse_axis(lattice, "gamma");
    plan.lattice.ps = parse_axis(lattice, "p");
    for (double g : plan.lattice.gammas)
      if (!(g > 0.0)) throw ConfigError("lattice.gamma: entries must be positive");
    for (double p : plan.lattice.ps)
      if (!(p >= 0.0)) throw ConfigError("lattice.p: entries must be nonnegative");
    if (lattice.has("coercive")) plan.lattice.coercive = lattice.boolean("coercive");
    for (const char* key : {"spectrum", "m", "b", "eps", "eps_list", "u0", "u1"})
      if (root.has(key)) throw ConfigError(std::string(key) + ": not used by regime_grid plans");
    return plan;
  }
  if (root.has("lattice")) throw ConfigError("lattice: only used by regime_grid plans");

  plan.spectrum = parse_spectrum(root.child("spectrum"));
  plan.nonlinearity = parse_nonlinearity(root.child("m"));
  plan.dissipation = parse_dissipation(root.child("b"));
  const Spectrum& spec = *plan.spectrum;
  plan.u0 = parse_vector(root, "u0", spec);
  plan.u1 = root.has("u1") ? parse_vector(root, "u1", spec) : ModalVector(spec.size());

  const bool needs_eps = plan.kind == PlanKind::Simulate || plan.kind == PlanKind::Corrector ||
                         (plan.kind == PlanKind::Verify && plan.analysis.hyperbolic);
  if (needs_eps) {
    plan.eps = root.number("eps");
    if (!(*plan.eps > 0.0)) throw ConfigError("eps: must be positive");
  } else if (root.has("eps")) {
    plan.eps = root.number("eps");
    if (!(*plan.eps > 0.0)) throw ConfigError("eps: must be positive");
  }

  if (plan.kind == PlanKind::SweepEps) {
    plan.eps_list = root.numbers("eps_list");
    if (plan.eps_list.size() < 4) throw ConfigError("eps_list: at least 4 values are required");
    for (std::size_t i = 0; i < plan.eps_list.size(); ++i) {
      if (!(plan.eps_list[i] > 0.0)) throw ConfigError("eps_list: entries must be positive");
      if (i > 0 && !(plan.eps_list[i] < plan.eps_list[i - 1]))
        throw ConfigError("eps_list: must be strictly decreasing");
    }
    if (plan.eps_list.front() < 100.0 * plan.eps_list.back())
      throw ConfigError("eps_list: must span at least two decades");
  } else if (root.has("eps_list")) {
    throw ConfigError("eps_list: only used by sweep_eps plans");
  }
  return plan;
}

std::string canonical_json(const ExperimentPlan& plan) {
  ordered_json doc;
  doc["kind"] = std::string(to_string(plan.kind));
  if (plan.kind == PlanKind::RegimeGrid) {
    doc["lattice"] = {{"gamma", plan.lattice.gammas},
                      {"p", plan.lattice.ps},
                      {"coercive", plan.lattice.coercive}};
  } else {
    const auto ev = plan.spectrum->eigenvalues();
    doc["spectrum"] = {{"kind", "list"}, {"values", std::vector<double>(ev.begin(), ev.end())}};
    if (const auto* power = std::get_if<PowerNonlinearity>(&*plan.nonlinearity)) {
      doc["m"] = {{"kind", "power"}, {"gamma", power->gamma}};
    } else {
      const auto& table = std::get<TableNonlinearity>(*plan.nonlinearity);
      ordered_json pts = ordered_json::array();
      for (const auto& [s, m] : table.points()) pts.push_back({s, m});
      doc["m"] = {{"kind", "table"}, {"points", pts}};
    }
    if (const auto* d = std::get_if<PowerLawDissipation>(&*plan.dissipation))
      doc["b"] = {{"kind", "power"}, {"p", d->p}};
    else
      doc["b"] = {{"kind", "constant"}, {"delta", std::get<ConstantDissipation>(*plan.dissipation).delta}};
    if (plan.eps) doc["eps"] = *plan.eps;
    if (!plan.eps_list.empty()) doc["eps_list"] = plan.eps_list;
    doc["u0"] = std::vector<double>(plan.u0.begin(), plan.u0.end());
    doc["u1"] = std::vector<double>(plan.u1.begin(), plan.u1.end());
  }
  const auto& st = plan.settings;
  doc["settings"] = {{"rel_tol", st.rel_tol},
                     {"abs_tol", st.abs_tol},
                     {"max_step_factor", st.max_step_factor},
                     {"blowup_threshold", st.blowup_threshold},
                     {"grid",
                      {{"kind", st.grid.kind == GridKind::Log ? "log" : "linear"},
                       {"count", st.grid.count},
                       {"t_end", st.grid.t_end}}}};
  const auto& a = plan.analysis;
  ordered_json analysis = {{"tol_exponent", a.tol_exponent}};
  if (a.window) analysis["window"] = {a.window->t_lo, a.window->t_hi};
  analysis["ks"] = a.ks;
  if (a.coercive) analysis["coercive"] = *a.coercive;
  analysis["hyperbolic"] = a.hyperbolic;
  if (a.check_lower) analysis["check_lower"] = *a.check_lower;
  analysis["oracle_tol"] = a.oracle_tol;
  analysis["random_instances"] = a.random_instances;
  analysis["order_target"] = a.order_target;
  analysis["order_tol"] = a.order_tol;
  analysis["weighted_ratio_max"] = a.weighted_ratio_max;
  analysis["monotone_slack"] = a.monotone_slack;
  doc["analysis"] = analysis;
  doc["seed"] = plan.seed;
  return doc.dump();
}

}  // namespace kirchhoff
