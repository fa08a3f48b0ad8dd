// Copyright 2026 The ac3mpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ac3mpc/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ac3mpc/csv.hpp"

namespace ac3mpc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
  bool used = false;
};

struct Parsed {
  std::string origin;
  // section -> key -> entry
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::map<std::string, int> section_lines;
};

Parsed parse_raw(const std::string& text, const std::string& origin) {
  Parsed p;
  p.origin = origin;
  std::istringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(origin, lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError(origin, lineno, "empty section name");
      p.section_lines.emplace(section, lineno);
      p.sections[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(origin, lineno, "expected 'key = value'");
    if (section.empty()) throw ConfigError(origin, lineno, "key outside of any section");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin, lineno, "empty key");
    auto& sec = p.sections[section];
    if (sec.count(key)) throw ConfigError(origin, lineno, "duplicate key '" + key + "'");
    sec[key] = Entry{value, lineno};
  }
  return p;
}

class Binder {
 public:
  Binder(Parsed& p, const std::string& section) : p_(p), section_(section) {
    it_ = p_.sections.find(section);
  }

  bool has(const std::string& key) const {
    return it_ != p_.sections.end() && it_->second.count(key) > 0;
  }

  template <typename T, typename Fn>
  void bind(const std::string& key, T& field, Fn convert) {
    if (it_ == p_.sections.end()) return;
    auto e = it_->second.find(key);
    if (e == it_->second.end()) return;
    e->second.used = true;
    try {
      field = convert(e->second.value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(p_.origin, e->second.line,
                        "bad value for '" + key + "': " + ex.what());
    }
  }

  void number(const std::string& key, double& field) {
    bind(key, field, [](const std::string& v) {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::runtime_error("trailing characters");
      return x;
    });
  }
  void integer(const std::string& key, int& field) {
    bind(key, field, [](const std::string& v) {
      std::size_t pos = 0;
      const int x = std::stoi(v, &pos);
      if (pos != v.size()) throw std::runtime_error("trailing characters");
      return x;
    });
  }
  void integer(const std::string& key, long& field) {
    bind(key, field, [](const std::string& v) {
      std::size_t pos = 0;
      const long x = std::stol(v, &pos);
      if (pos != v.size()) throw std::runtime_error("trailing characters");
      return x;
    });
  }
  void text(const std::string& key, std::string& field) {
    bind(key, field, [](const std::string& v) { return v; });
  }
  void string_list(const std::string& key, std::vector<std::string>& field) {
    bind(key, field, [](const std::string& v) {
      std::vector<std::string> out;
      std::istringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
      }
      return out;
    });
  }
  void int_list(const std::string& key, std::vector<int>& field) {
    std::vector<std::string> raw;
    string_list(key, raw);
    if (has(key)) {
      field.clear();
      for (const auto& s : raw) field.push_back(std::stoi(s));
    }
  }
  void long_list(const std::string& key, std::vector<long>& field) {
    std::vector<std::string> raw;
    string_list(key, raw);
    if (has(key)) {
      field.clear();
      for (const auto& s : raw) field.push_back(std::stol(s));
    }
  }

 private:
  Parsed& p_;
  std::string section_;
  std::map<std::string, std::map<std::string, Entry>>::iterator it_;
};

const std::vector<std::string> kKnownSections = {
    "experiment", "vehicle", "sim", "ocp", "ppo", "reward", "observation", "profiles"};

}  // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  const auto limits_eq = [](const ActuatorLimits& a, const ActuatorLimits& b) {
    return a.a_min == b.a_min && a.a_max == b.a_max && a.omega_min == b.omega_min &&
           a.omega_max == b.omega_max && a.delta_min == b.delta_min && a.delta_max == b.delta_max;
  };
  const auto terrain_eq = [](const TerrainParams& a, const TerrainParams& b) {
    return a.name == b.name && a.traction_eff == b.traction_eff && a.c0 == b.c0 && a.c1 == b.c1 &&
           a.c2 == b.c2 && a.sinkage_sat == b.sinkage_sat;
  };
  if (custom_terrains.size() != o.custom_terrains.size()) return false;
  for (const auto& [name, t] : custom_terrains) {
    auto it = o.custom_terrains.find(name);
    if (it == o.custom_terrains.end() || !terrain_eq(t, it->second)) return false;
  }
  return output_dir == o.output_dir && terrains == o.terrains && controllers == o.controllers &&
         seeds == o.seeds && eval_duration == o.eval_duration &&
         train_terrain == o.train_terrain && train_v0_max == o.train_v0_max && vehicle.wheelbase == o.vehicle.wheelbase &&
         vehicle.rear_axle_dist == o.vehicle.rear_axle_dist &&
         sim.control_dt == o.sim.control_dt && sim.substeps == o.sim.substeps &&
         horizon == o.horizon && ocp_dt == o.ocp_dt && q_phi == o.q_phi && q_delta == o.q_delta &&
         q_v == o.q_v && r_a == o.r_a && r_omega == o.r_omega &&
         terminal_scale == o.terminal_scale && lambda == o.lambda &&
         comp_decay_rate == o.comp_decay_rate && comp_sign == o.comp_sign &&
         limits_eq(limits, o.limits) && v_min == o.v_min && alat_bound == o.alat_bound &&
         a_rl_bound == o.a_rl_bound && accel_scale == o.accel_scale &&
         slack_weight == o.slack_weight && slack_smoothing == o.slack_smoothing &&
         max_iter_cold == o.max_iter_cold && max_iter_warm == o.max_iter_warm &&
         kkt_tol == o.kkt_tol && ppo.n_steps == o.ppo.n_steps && ppo.minibatch == o.ppo.minibatch &&
         ppo.epochs == o.ppo.epochs && ppo.clip_eps == o.ppo.clip_eps &&
         ppo.gamma == o.ppo.gamma && ppo.gae_lambda == o.ppo.gae_lambda &&
         ppo.learning_rate == o.ppo.learning_rate && ppo.entropy_coef == o.ppo.entropy_coef &&
         ppo.value_coef == o.ppo.value_coef && ppo.max_grad_norm == o.ppo.max_grad_norm &&
         ppo.total_steps == o.ppo.total_steps && ppo.checkpoint_steps == o.ppo.checkpoint_steps &&
         reward.w11 == o.reward.w11 && reward.w12 == o.reward.w12 && reward.w13 == o.reward.w13 &&
         reward.w21 == o.reward.w21 && reward.w22 == o.reward.w22 && reward.w23 == o.reward.w23 &&
         reward.w31 == o.reward.w31 && reward.w32 == o.reward.w32 && reward.w33 == o.reward.w33 &&
         reward.n_err == o.reward.n_err && reward.n_sigma == o.reward.n_sigma &&
         reward.n_violate == o.reward.n_violate && reward.v_threshold == o.reward.v_threshold &&
         reward.epsilon_ceiling == o.reward.epsilon_ceiling && reward.a_min == o.reward.a_min &&
         reward.a_max == o.reward.a_max && h_a_ac == o.h_a_ac && h_a_ac3 == o.h_a_ac3 &&
         k_pred == o.k_pred && k_ref == o.k_ref && v_cap == o.v_cap &&
         knot_spacing == o.knot_spacing && amp_lo == o.amp_lo && amp_hi == o.amp_hi;
}

OcpConfig ExperimentConfig::ocp_config() const {
  OcpConfig c;
  c.horizon = horizon;
  c.dt = ocp_dt;
  c.q_diag << 0.0, 0.0, q_phi, q_delta, q_v, 0.0;
  c.p_diag = terminal_scale * c.q_diag;
  c.r_diag << r_a, r_omega;
  c.lambda = lambda;
  c.comp_decay_rate = comp_decay_rate;
  c.comp_sign = (comp_sign == "minus") ? CompensationSign::kMinus : CompensationSign::kPlus;
  c.limits = limits;
  c.v_min = v_min;
  c.alat_min = -alat_bound;
  c.alat_max = alat_bound;
  c.a_rl_bound = a_rl_bound;
  c.accel_scale = accel_scale;
  c.vehicle = vehicle;
  c.slack_weight = slack_weight;
  c.slack_smoothing = slack_smoothing;
  c.max_iter_cold = max_iter_cold;
  c.max_iter_warm = max_iter_warm;
  c.kkt_tol = kkt_tol;
  return c;
}

ObservationSpec ExperimentConfig::observation_spec(AgentVariant variant) const {
  ObservationSpec s;
  s.variant = variant;
  s.h_a = (variant == AgentVariant::kAc3) ? h_a_ac3 : h_a_ac;
  s.k_pred = (variant == AgentVariant::kAc3) ? k_pred : 0;
  s.k_ref = k_ref;
  s.v_scale = v_cap;
  s.e_scale = reward.n_err;
  return s;
}

double ExperimentConfig::agent_bound(ControllerKind kind) const {
  return kind == ControllerKind::kAc ? 1.0 : a_rl_bound;
}

LoopConfig ExperimentConfig::loop_config(ControllerKind kind) const {
  LoopConfig lc;
  lc.kind = kind;
  switch (kind) {
    case ControllerKind::kAc: lc.obs_spec = observation_spec(AgentVariant::kAc); break;
    case ControllerKind::kAc2Mpc: lc.obs_spec = observation_spec(AgentVariant::kAc2); break;
    default: lc.obs_spec = observation_spec(AgentVariant::kAc3); break;
  }
  lc.reward = reward;
  lc.sim = sim;
  lc.limits = limits;
  lc.vehicle = vehicle;
  lc.accel_scale = accel_scale;
  lc.agent_bound = agent_bound(kind);
  return lc;
}

TerrainParams ExperimentConfig::terrain(const std::string& name) const {
  const auto it = custom_terrains.find(name);
  if (it != custom_terrains.end()) return it->second;
  return terrain_preset(name);
}

SpeedProfileSpec ExperimentConfig::profile_spec(ProfileKind kind, std::uint64_t seed) const {
  SpeedProfileSpec s;
  s.kind = kind;
  s.v_cap = v_cap;
  s.duration = eval_duration;
  s.seed = seed;
  s.knot_spacing = knot_spacing;
  s.amp_lo = amp_lo;
  s.amp_hi = amp_hi;
  return s;
}

void ExperimentConfig::validate() const {
  ocp_config().validate();
  ppo.validate();
  if (seeds.empty()) throw ConfigError("experiment: seeds must be non-empty");
  if (eval_duration <= 0.0) throw ConfigError("experiment: eval_duration must be positive");
  if (train_v0_max < 0.0) throw ConfigError("experiment: train_v0_max must be >= 0");
  if (sim.substeps < 1 || sim.control_dt <= 0.0)
    throw ConfigError("sim: control_dt must be positive and substeps >= 1");
  if (h_a_ac < 1 || h_a_ac3 < 1 || k_pred < 1 || k_ref < 1)
    throw ConfigError("observation: history lengths must be >= 1");
  if (h_a_ac3 >= h_a_ac)
    throw ConfigError("observation: the cooperative agent must use a shorter history (h_a_ac3 < h_a_ac)");
  if (v_cap <= 0.0 || amp_lo < 0.0 || amp_hi > v_cap || amp_lo >= amp_hi)
    throw ConfigError("profiles: need 0 <= amp_lo < amp_hi <= v_cap");
  for (const auto& [name, t] : custom_terrains) {
    if (!(t.traction_eff > 0.0 && t.traction_eff <= 1.0))
      throw ConfigError("terrain." + name + ": traction_eff must be in (0,1]");
    if (t.c0 < 0.0 || t.c1 < 0.0 || t.c2 < 0.0 || t.sinkage_sat <= 0.0)
      throw ConfigError("terrain." + name + ": resistance coefficients must be >= 0, v_sat > 0");
  }
  for (const auto& name : terrains) terrain(name);
  for (const auto& c : controllers) controller_from_name(c);
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  Parsed p = parse_raw(text, origin);
  ExperimentConfig cfg;

  for (const auto& [section, line] : p.section_lines) {
    if (std::find(kKnownSections.begin(), kKnownSections.end(), section) != kKnownSections.end())
      continue;
    if (section.rfind("terrain.", 0) == 0 && section.size() > 8) continue;
    throw ConfigError(origin, line, "unknown section [" + section + "]");
  }

  {
    Binder b(p, "experiment");
    b.text("output_dir", cfg.output_dir);
    b.string_list("terrains", cfg.terrains);
    b.string_list("controllers", cfg.controllers);
    b.int_list("seeds", cfg.seeds);
    b.number("eval_duration", cfg.eval_duration);
    b.text("train_terrain", cfg.train_terrain);
    b.number("train_v0_max", cfg.train_v0_max);
  }
  {
    Binder b(p, "vehicle");
    b.number("wheelbase", cfg.vehicle.wheelbase);
    b.number("rear_axle_dist", cfg.vehicle.rear_axle_dist);
  }
  {
    Binder b(p, "sim");
    b.number("control_dt", cfg.sim.control_dt);
    b.integer("substeps", cfg.sim.substeps);
  }
  {
    Binder b(p, "ocp");
    b.integer("horizon", cfg.horizon);
    b.number("dt", cfg.ocp_dt);
    b.number("q_phi", cfg.q_phi);
    b.number("q_delta", cfg.q_delta);
    b.number("q_v", cfg.q_v);
    b.number("r_a", cfg.r_a);
    b.number("r_omega", cfg.r_omega);
    b.number("terminal_scale", cfg.terminal_scale);
    b.number("lambda", cfg.lambda);
    b.number("comp_decay_rate", cfg.comp_decay_rate);
    b.text("comp_sign", cfg.comp_sign);
    b.number("a_min", cfg.limits.a_min);
    b.number("a_max", cfg.limits.a_max);
    b.number("omega_min", cfg.limits.omega_min);
    b.number("omega_max", cfg.limits.omega_max);
    b.number("delta_min", cfg.limits.delta_min);
    b.number("delta_max", cfg.limits.delta_max);
    b.number("v_min", cfg.v_min);
    b.number("alat_bound", cfg.alat_bound);
    b.number("a_rl_bound", cfg.a_rl_bound);
    b.number("accel_scale", cfg.accel_scale);
    b.number("slack_weight", cfg.slack_weight);
    b.number("slack_smoothing", cfg.slack_smoothing);
    b.integer("max_iter_cold", cfg.max_iter_cold);
    b.integer("max_iter_warm", cfg.max_iter_warm);
    b.number("kkt_tol", cfg.kkt_tol);
    if (cfg.comp_sign != "plus" && cfg.comp_sign != "minus")
      throw ConfigError(origin + ": ocp.comp_sign must be 'plus' or 'minus'");
  }
  {
    Binder b(p, "ppo");
    b.integer("n_steps", cfg.ppo.n_steps);
    b.integer("minibatch", cfg.ppo.minibatch);
    b.integer("epochs", cfg.ppo.epochs);
    b.number("clip_eps", cfg.ppo.clip_eps);
    b.number("gamma", cfg.ppo.gamma);
    b.number("gae_lambda", cfg.ppo.gae_lambda);
    b.number("learning_rate", cfg.ppo.learning_rate);
    b.number("entropy_coef", cfg.ppo.entropy_coef);
    b.number("value_coef", cfg.ppo.value_coef);
    b.number("max_grad_norm", cfg.ppo.max_grad_norm);
    b.integer("total_steps", cfg.ppo.total_steps);
    b.long_list("checkpoint_steps", cfg.ppo.checkpoint_steps);
  }
  {
    Binder b(p, "reward");
    b.number("w11", cfg.reward.w11);
    b.number("w12", cfg.reward.w12);
    b.number("w13", cfg.reward.w13);
    b.number("w21", cfg.reward.w21);
    b.number("w22", cfg.reward.w22);
    b.number("w23", cfg.reward.w23);
    b.number("w31", cfg.reward.w31);
    b.number("w32", cfg.reward.w32);
    b.number("w33", cfg.reward.w33);
    b.number("n_err", cfg.reward.n_err);
    b.number("n_sigma", cfg.reward.n_sigma);
    b.number("n_violate", cfg.reward.n_violate);
    b.number("v_threshold", cfg.reward.v_threshold);
    b.number("epsilon_ceiling", cfg.reward.epsilon_ceiling);
    b.number("a_min", cfg.reward.a_min);
    b.number("a_max", cfg.reward.a_max);
  }
  {
    Binder b(p, "observation");
    b.integer("h_a_ac", cfg.h_a_ac);
    b.integer("h_a_ac3", cfg.h_a_ac3);
    b.integer("k_pred", cfg.k_pred);
    b.integer("k_ref", cfg.k_ref);
  }
  {
    Binder b(p, "profiles");
    b.number("v_cap", cfg.v_cap);
    b.number("knot_spacing", cfg.knot_spacing);
    b.number("amp_lo", cfg.amp_lo);
    b.number("amp_hi", cfg.amp_hi);
  }
  for (const auto& [section, entries] : p.sections) {
    if (section.rfind("terrain.", 0) != 0) continue;
    const std::string name = section.substr(8);
    TerrainParams t;
    t.name = name;
    Binder b(p, section);
    b.number("traction_eff", t.traction_eff);
    b.number("c0", t.c0);
    b.number("c1", t.c1);
    b.number("c2", t.c2);
    b.number("sinkage_sat", t.sinkage_sat);
    cfg.custom_terrains[name] = t;
    (void)entries;
  }

  // Schema check: every provided key must have been consumed.
  for (const auto& [section, entries] : p.sections) {
    for (const auto& [key, entry] : entries) {
      if (!entry.used)
        throw ConfigError(origin, entry.line,
                          "unknown key '" + key + "' in section [" + section + "]");
    }
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream o;
  const auto num = [](double x) { return format_double(x); };
  const auto join_str = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] + (i + 1 < v.size() ? "," : "");
    return s;
  };
  o << "[experiment]\n";
  o << "output_dir = " << cfg.output_dir << "\n";
  o << "terrains = " << join_str(cfg.terrains) << "\n";
  o << "controllers = " << join_str(cfg.controllers) << "\n";
  o << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    o << cfg.seeds[i] << (i + 1 < cfg.seeds.size() ? "," : "");
  o << "\n";
  o << "eval_duration = " << num(cfg.eval_duration) << "\n";
  o << "train_terrain = " << cfg.train_terrain << "\n";
  o << "train_v0_max = " << num(cfg.train_v0_max) << "\n";
  o << "\n[vehicle]\n";
  o << "wheelbase = " << num(cfg.vehicle.wheelbase) << "\n";
  o << "rear_axle_dist = " << num(cfg.vehicle.rear_axle_dist) << "\n";
  o << "\n[sim]\n";
  o << "control_dt = " << num(cfg.sim.control_dt) << "\n";
  o << "substeps = " << cfg.sim.substeps << "\n";
  o << "\n[ocp]\n";
  o << "horizon = " << cfg.horizon << "\n";
  o << "dt = " << num(cfg.ocp_dt) << "\n";
  o << "q_phi = " << num(cfg.q_phi) << "\n";
  o << "q_delta = " << num(cfg.q_delta) << "\n";
  o << "q_v = " << num(cfg.q_v) << "\n";
  o << "r_a = " << num(cfg.r_a) << "\n";
  o << "r_omega = " << num(cfg.r_omega) << "\n";
  o << "terminal_scale = " << num(cfg.terminal_scale) << "\n";
  o << "lambda = " << num(cfg.lambda) << "\n";
  o << "comp_decay_rate = " << num(cfg.comp_decay_rate) << "\n";
  o << "comp_sign = " << cfg.comp_sign << "\n";
  o << "a_min = " << num(cfg.limits.a_min) << "\n";
  o << "a_max = " << num(cfg.limits.a_max) << "\n";
  o << "omega_min = " << num(cfg.limits.omega_min) << "\n";
  o << "omega_max = " << num(cfg.limits.omega_max) << "\n";
  o << "delta_min = " << num(cfg.limits.delta_min) << "\n";
  o << "delta_max = " << num(cfg.limits.delta_max) << "\n";
  o << "v_min = " << num(cfg.v_min) << "\n";
  o << "alat_bound = " << num(cfg.alat_bound) << "\n";
  o << "a_rl_bound = " << num(cfg.a_rl_bound) << "\n";
  o << "accel_scale = " << num(cfg.accel_scale) << "\n";
  o << "slack_weight = " << num(cfg.slack_weight) << "\n";
  o << "slack_smoothing = " << num(cfg.slack_smoothing) << "\n";
  o << "max_iter_cold = " << cfg.max_iter_cold << "\n";
  o << "max_iter_warm = " << cfg.max_iter_warm << "\n";
  o << "kkt_tol = " << num(cfg.kkt_tol) << "\n";
  o << "\n[ppo]\n";
  o << "n_steps = " << cfg.ppo.n_steps << "\n";
  o << "minibatch = " << cfg.ppo.minibatch << "\n";
  o << "epochs = " << cfg.ppo.epochs << "\n";
  o << "clip_eps = " << num(cfg.ppo.clip_eps) << "\n";
  o << "gamma = " << num(cfg.ppo.gamma) << "\n";
  o << "gae_lambda = " << num(cfg.ppo.gae_lambda) << "\n";
  o << "learning_rate = " << num(cfg.ppo.learning_rate) << "\n";
  o << "entropy_coef = " << num(cfg.ppo.entropy_coef) << "\n";
  o << "value_coef = " << num(cfg.ppo.value_coef) << "\n";
  o << "max_grad_norm = " << num(cfg.ppo.max_grad_norm) << "\n";
  o << "total_steps = " << cfg.ppo.total_steps << "\n";
  o << "checkpoint_steps = ";
  for (std::size_t i = 0; i < cfg.ppo.checkpoint_steps.size(); ++i)
    o << cfg.ppo.checkpoint_steps[i] << (i + 1 < cfg.ppo.checkpoint_steps.size() ? "," : "");
  o << "\n";
  o << "\n[reward]\n";
  o << "w11 = " << num(cfg.reward.w11) << "\n";
  o << "w12 = " << num(cfg.reward.w12) << "\n";
  o << "w13 = " << num(cfg.reward.w13) << "\n";
  o << "w21 = " << num(cfg.reward.w21) << "\n";
  o << "w22 = " << num(cfg.reward.w22) << "\n";
  o << "w23 = " << num(cfg.reward.w23) << "\n";
  o << "w31 = " << num(cfg.reward.w31) << "\n";
  o << "w32 = " << num(cfg.reward.w32) << "\n";
  o << "w33 = " << num(cfg.reward.w33) << "\n";
  o << "n_err = " << num(cfg.reward.n_err) << "\n";
  o << "n_sigma = " << num(cfg.reward.n_sigma) << "\n";
  o << "n_violate = " << num(cfg.reward.n_violate) << "\n";
  o << "v_threshold = " << num(cfg.reward.v_threshold) << "\n";
  o << "epsilon_ceiling = " << num(cfg.reward.epsilon_ceiling) << "\n";
  o << "a_min = " << num(cfg.reward.a_min) << "\n";
  o << "a_max = " << num(cfg.reward.a_max) << "\n";
  o << "\n[observation]\n";
  o << "h_a_ac = " << cfg.h_a_ac << "\n";
  o << "h_a_ac3 = " << cfg.h_a_ac3 << "\n";
  o << "k_pred = " << cfg.k_pred << "\n";
  o << "k_ref = " << cfg.k_ref << "\n";
  o << "\n[profiles]\n";
  o << "v_cap = " << num(cfg.v_cap) << "\n";
  o << "knot_spacing = " << num(cfg.knot_spacing) << "\n";
  o << "amp_lo = " << num(cfg.amp_lo) << "\n";
  o << "amp_hi = " << num(cfg.amp_hi) << "\n";
  for (const auto& [name, t] : cfg.custom_terrains) {
    o << "\n[terrain." << name << "]\n";
    o << "traction_eff = " << num(t.traction_eff) << "\n";
    o << "c0 = " << num(t.c0) << "\n";
    o << "c1 = " << num(t.c1) << "\n";
    o << "c2 = " << num(t.c2) << "\n";
    o << "sinkage_sat = " << num(t.sinkage_sat) << "\n";
  }
  return o.str();
}

}  // namespace ac3mpc
