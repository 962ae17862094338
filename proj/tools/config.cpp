#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rnlw/criteria.hpp"
#include "rnlw/errors.hpp"

namespace rnlw::cli {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string where(const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.is_null() || m.line < 0) return "override";
  return "line " + std::to_string(m.line + 1);
}

[[noreturn]] void fail(const std::string& key, const YAML::Node& n, const std::string& what) {
  throw ConfigError(where(n) + ", key '" + key + "': " + what);
}

template <class T>
T convert(const std::string& key, const YAML::Node& n) {
  if (!n.IsScalar()) fail(key, n, "expected a scalar");
  if constexpr (std::is_same_v<T, double>) {
    const auto s = n.Scalar();
    if (s == "inf" || s == "infinity" || s == ".inf") return INFINITY;
  }
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, n, "cannot read '" + n.Scalar() + "'");
  }
}

// Walks one mapping; unknown keys are errors.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) fail(path_.empty() ? "<root>" : path_, node_, "expected a mapping");
  }

  bool has(const std::string& key) const { return node_.IsMap() && node_[key].IsDefined() && !node_[key].IsNull(); }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (has(key)) out = convert<T>(full(key), node_[key]);
  }

  template <class T>
  void require(const std::string& key, T& out) {
    seen_.insert(key);
    if (!has(key)) throw ConfigError("missing required key '" + full(key) + "'");
    out = convert<T>(full(key), node_[key]);
  }

  template <class T>
  void get_list(const std::string& key, std::vector<T>& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const auto n = node_[key];
    if (!n.IsSequence()) fail(full(key), n, "expected a list");
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(convert<T>(full(key), n[i]));
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    return Section(has(key) ? node_[key] : YAML::Node(), full(key));
  }

  // list of mappings
  std::vector<Section> items(const std::string& key) {
    seen_.insert(key);
    std::vector<Section> out;
    if (!has(key)) return out;
    const auto n = node_[key];
    if (!n.IsSequence()) fail(full(key), n, "expected a list");
    for (std::size_t i = 0; i < n.size(); ++i) out.emplace_back(n[i], full(key) + "[" + std::to_string(i) + "]");
    return out;
  }

  void finish() const {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (!seen_.count(k)) fail(full(k), kv.first, "unknown key");
    }
  }

  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

Side parse_side(const std::string& key, const std::string& s) {
  if (s == "upper") return Side::Upper;
  if (s == "lower") return Side::Lower;
  if (s == "two_sided") return Side::TwoSided;
  throw ConfigError("key '" + key + "': side must be upper, lower or two_sided, not '" + s + "'");
}

const char* side_name(Side s) {
  switch (s) {
    case Side::Upper: return "upper";
    case Side::Lower: return "lower";
    default: return "two_sided";
  }
}

void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i, const YAML::Node& value) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = value;
    return;
  }
  if (!node[parts[i]].IsDefined() || !node[parts[i]].IsMap()) node[parts[i]] = YAML::Node(YAML::NodeType::Map);
  set_path(node[parts[i]], parts, i + 1, value);
}

void apply_override(YAML::Node& root, const std::string& ov) {
  const auto eq = ov.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + ov + "' is not key=value");
  const std::string key = ov.substr(0, eq);
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string p; std::getline(ss, p, '.');) {
    if (p.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    parts.push_back(p);
  }
  YAML::Node value;
  try {
    value = YAML::Load(ov.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError("override '" + key + "': " + e.msg);
  }
  if (!root.IsDefined() || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  set_path(root, parts, 0, value);
}

nlohmann::ordered_json num(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  for (const auto& ov : overrides) apply_override(root, ov);

  RunConfig c;
  Section top(root, "");
  std::string name;
  top.require("scenario", name);
  const auto base = named_scenario(name);
  if (!base) throw ConfigError("key 'scenario': unknown scenario '" + name + "' (unforced, forced, small, zero)");
  c.scenario = *base;
  top.require("output_dir", c.output_dir);
  top.get("seed", c.seed);
  c.scenario.seed = c.seed;
  top.get("input", c.input);

  {
    auto s = top.sub("grid");
    s.get("radius", c.scenario.radius);
    s.get("points", c.scenario.points);
    s.finish();
    if (!(c.scenario.radius > 0.0) || c.scenario.points < 8) throw ConfigError("key 'grid': need radius > 0 and points >= 8");
  }
  {
    auto s = top.sub("solver");
    auto& p = c.scenario.solver;
    s.get("dt", p.dt);
    s.get("cfl", p.cfl);
    s.get("horizon", p.horizon);
    s.get("report_stride", p.report_stride);
    s.get("dealias", p.dealias);
    s.get("blowup_threshold", p.blowup_threshold);
    s.get("sign", p.sign);
    s.get("check_domain", p.check_domain);
    s.get("domain_tol", p.domain_tol);
    s.finish();
  }
  {
    auto s = top.sub("data");
    s.get("amplitude", c.scenario.amplitude);
    s.get("forcing_amplitude", c.scenario.forcing_amplitude);
    s.get("band_hi", c.scenario.band_hi);
    s.get("cutoff", c.scenario.cutoff);
    s.get("gamma", c.scenario.gamma);
    s.finish();
  }
  {
    auto s = top.sub("randomization");
    auto& r = c.randomization;
    r.gamma = c.scenario.gamma;
    s.get("gamma", r.gamma);
    s.get("shell_max", r.shell_max);
    s.get("cutoff", r.cutoff);
    s.finish();
    r.seed = c.seed;
    try {
      r.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("randomization: ") + e.what());
    }
  }
  {
    auto s = top.sub("norms");
    auto& n = c.norms;
    s.get("delta", n.delta);
    s.get("gamma", n.gamma);
    s.get_list("p_set", n.p_set);
    s.get_list("dyadic_range", n.dyadic_range);
    s.get("k_ladder_max", n.k_ladder_max);
    s.get("z_window", n.z_window);
    s.finish();
    try {
      n.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("norms: ") + e.what());
    }
    c.scenario.norms = n;
  }
  {
    auto s = top.sub("mc");
    auto& m = c.mc;
    m.seed = c.seed;
    std::string kind = "strichartz", side = "upper";
    s.get("kind", kind);
    if (kind == "strichartz")
      m.kind = McKind::Strichartz;
    else if (kind == "profile")
      m.kind = McKind::Profile;
    else
      throw ConfigError("key 'mc.kind': strichartz or profile, not '" + kind + "'");
    s.get("trials", m.trials);
    s.get_list("shell_ladder", m.shell_ladder);
    s.get("gamma", m.gamma);
    s.get_list("sigma_set", m.sigma_set);
    s.get("slope_claim", m.slope_claim);
    s.get("tolerance", m.tolerance);
    s.get("side", side);
    m.side = parse_side("mc.side", side);
    s.get("radius", m.radius);
    s.get("radial_cut", m.radial_cut);
    s.get("points_per_unit", m.points_per_unit);
    s.get("acceptance", c.mc_acceptance);
    for (auto& it : s.items("norms")) {
      NormSpec ns;
      it.require("q", ns.q);
      it.get("p", ns.p);
      it.get("alpha", ns.alpha);
      it.get("t_max", ns.t_max);
      it.finish();
      c.mc_norms.push_back(ns);
    }
    s.finish();
    if (c.mc_norms.empty()) c.mc_norms.push_back(m.norm);
    m.norm = c.mc_norms.front();
  }
  {
    auto s = top.sub("delta_sweep");
    auto& d = c.delta;
    s.get("enabled", c.delta_sweep);
    s.get_list("ladder", d.delta_ladder);
    s.get("shell", d.shell);
    s.get("points_per_unit", d.points_per_unit);
    s.get("window_factor", d.window_factor);
    s.get("radius_factor", d.radius_factor);
    s.get("tolerance", d.tolerance);
    for (auto& it : s.items("claims")) {
      DeltaClaim cl{4.0, INFINITY, 0.25, Side::Lower};
      std::string side = "lower";
      it.require("q", cl.q);
      it.get("p", cl.p);
      it.get("alpha", cl.alpha);
      it.get("side", side);
      it.finish();
      cl.side = parse_side(it.full("side"), side);
      c.delta_claims.push_back(cl);
    }
    s.finish();
    if (c.delta_claims.empty())
      c.delta_claims = {DeltaClaim{4.0, INFINITY, 0.25, Side::Lower}, DeltaClaim{2.0, INFINITY, 0.25, Side::TwoSided}};
  }
  {
    auto s = top.sub("verify");
    c.verify_criteria = verify_criteria();
    s.get_list("criteria", c.verify_criteria);
    s.get("refined", c.refined);
    s.finish();
    for (int id : c.verify_criteria)
      if (id < 1 || id > kCriterionCount) throw ConfigError("key 'verify.criteria': no criterion " + std::to_string(id));
  }
  top.finish();
  return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), overrides);
}

nlohmann::ordered_json RunConfig::to_json() const {
  using J = nlohmann::ordered_json;
  const auto& s = scenario;
  J j;
  j["scenario"] = s.name;
  j["seed"] = seed;
  j["input"] = input;
  j["grid"] = {{"radius", s.radius}, {"points", s.points}};
  j["solver"] = {{"dt", s.solver.dt},
                 {"cfl", s.solver.cfl},
                 {"horizon", s.solver.horizon},
                 {"report_stride", s.solver.report_stride},
                 {"dealias", s.solver.dealias},
                 {"blowup_threshold", s.solver.blowup_threshold},
                 {"sign", s.solver.sign},
                 {"check_domain", s.solver.check_domain},
                 {"domain_tol", s.solver.domain_tol}};
  j["data"] = {{"amplitude", s.amplitude},
               {"forcing_amplitude", s.forcing_amplitude},
               {"band_hi", s.band_hi},
               {"cutoff", s.cutoff},
               {"gamma", s.gamma}};
  j["randomization"] = {{"gamma", randomization.gamma},
                        {"shell_max", randomization.shell_max},
                        {"cutoff", randomization.cutoff}};
  J pset = J::array(), dr = J::array();
  for (double p : norms.p_set) pset.push_back(num(p));
  for (double n : norms.dyadic_range) dr.push_back(n);
  j["norms"] = {{"delta", norms.delta},      {"gamma", norms.gamma},           {"p_set", pset},
                {"dyadic_range", dr},        {"k_ladder_max", norms.k_ladder_max}, {"z_window", norms.z_window}};
  J mn = J::array();
  for (const auto& n : mc_norms) mn.push_back({{"q", num(n.q)}, {"p", num(n.p)}, {"alpha", n.alpha}, {"t_max", n.t_max}});
  j["mc"] = {{"kind", mc.kind == McKind::Strichartz ? "strichartz" : "profile"},
             {"trials", mc.trials},
             {"shell_ladder", mc.shell_ladder},
             {"gamma", mc.gamma},
             {"sigma_set", mc.sigma_set},
             {"slope_claim", mc.slope_claim},
             {"tolerance", mc.tolerance},
             {"side", side_name(mc.side)},
             {"radius", mc.radius},
             {"radial_cut", mc.radial_cut},
             {"points_per_unit", mc.points_per_unit},
             {"acceptance", mc_acceptance},
             {"norms", mn}};
  J cl = J::array();
  for (const auto& c : delta_claims)
    cl.push_back({{"q", num(c.q)}, {"p", num(c.p)}, {"alpha", c.alpha}, {"side", side_name(c.side)}});
  j["delta_sweep"] = {{"enabled", delta_sweep},
                      {"ladder", delta.delta_ladder},
                      {"shell", delta.shell},
                      {"points_per_unit", delta.points_per_unit},
                      {"window_factor", delta.window_factor},
                      {"radius_factor", delta.radius_factor},
                      {"tolerance", delta.tolerance},
                      {"claims", cl}};
  j["verify"] = {{"criteria", verify_criteria}, {"refined", refined}};
  return j;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

}  // namespace rnlw::cli
