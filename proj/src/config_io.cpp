#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "ipp/scenario.hpp"
#include "ipp/text.hpp"

namespace ipp {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

namespace {

struct Field {
  std::string section;
  std::string key;
  std::function<void(ScenarioConfig&, const YAML::Node&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

double as_double(const YAML::Node& n) { return parse_double(n.as<std::string>()); }

bool as_bool(const YAML::Node& n) {
  const auto s = n.as<std::string>();
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true/false, got '" + s + "'");
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string fmt_vec2(const Vec2& p) {
  return "[" + format_double(p.x()) + ", " + format_double(p.y()) + "]";
}

Vec2 as_vec2(const YAML::Node& n) {
  if (!n.IsSequence() || n.size() != 2) throw std::invalid_argument("expected [x, y]");
  return {as_double(n[0]), as_double(n[1])};
}

template <class Member>
Field number(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](ScenarioConfig& c, const YAML::Node& n) { member(c) = as_double(n); },
          [member](const ScenarioConfig& c) {
            return format_double(member(c));
          }};
}

template <class Member>
Field flag(std::string section, std::string key, Member member) {
  return {std::move(section), std::move(key),
          [member](ScenarioConfig& c, const YAML::Node& n) { member(c) = as_bool(n); },
          [member](const ScenarioConfig& c) {
            return fmt_bool(member(c));
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    using C = ScenarioConfig;
    std::vector<Field> f;
    f.push_back(number("map", "width", [](auto& c) -> auto& { return c.map.width; }));
    f.push_back(number("map", "height", [](auto& c) -> auto& { return c.map.height; }));
    f.push_back(number("map", "cell_dx", [](auto& c) -> auto& { return c.map.cell_dx; }));
    f.push_back(number("map", "cell_dy", [](auto& c) -> auto& { return c.map.cell_dy; }));

    f.push_back({"targets", "count",
                 [](C& c, const YAML::Node& n) { c.targets.count = n.as<int>(); },
                 [](const C& c) { return std::to_string(c.targets.count); }});
    f.push_back(number("targets", "process_noise_std",
                       [](auto& c) -> auto& { return c.targets.process_noise_std; }));
    f.push_back({"targets", "spawn",
                 [](C& c, const YAML::Node& n) {
                   c.targets.spawn.clear();
                   if (!n.IsSequence()) throw std::invalid_argument("expected a list");
                   for (const auto& p : n) c.targets.spawn.push_back(as_vec2(p));
                 },
                 [](const C& c) {
                   std::string s = "[";
                   for (std::size_t i = 0; i < c.targets.spawn.size(); ++i) {
                     if (i) s += ", ";
                     s += fmt_vec2(c.targets.spawn[i]);
                   }
                   return s + "]";
                 }});

    f.push_back(number("wind", "mean_speed", [](auto& c) -> auto& { return c.wind.mean_speed; }));
    f.push_back(number("wind", "mean_dir", [](auto& c) -> auto& { return c.wind.mean_dir; }));
    f.push_back(number("wind", "time_constant",
                       [](auto& c) -> auto& { return c.wind.time_constant; }));
    f.push_back(number("wind", "speed_noise_std",
                       [](auto& c) -> auto& { return c.wind.speed_noise_std; }));
    f.push_back(number("wind", "dir_noise_std",
                       [](auto& c) -> auto& { return c.wind.dir_noise_std; }));
    f.push_back(number("wind", "gamma", [](auto& c) -> auto& { return c.wind.gamma; }));
    f.push_back(number("wind", "speed_min", [](auto& c) -> auto& { return c.wind.speed_min; }));
    f.push_back(number("wind", "speed_max", [](auto& c) -> auto& { return c.wind.speed_max; }));
    f.push_back(flag("wind", "randomize_dir", [](auto& c) -> auto& { return c.wind.randomize_dir; }));

    f.push_back(number("asv", "speed", [](auto& c) -> auto& { return c.asv.speed; }));
    f.push_back({"asv", "start",
                 [](C& c, const YAML::Node& n) {
                   if (n.IsScalar() && n.as<std::string>() == "center") {
                     c.asv.start.reset();
                   } else {
                     c.asv.start = as_vec2(n);
                   }
                 },
                 [](const C& c) { return c.asv.start ? fmt_vec2(*c.asv.start) : "center"; }});
    f.push_back(number("asv", "start_heading",
                       [](auto& c) -> auto& { return c.asv.start_heading; }));

    f.push_back(number("sensor", "a", [](auto& c) -> auto& { return c.sensor.a; }));
    f.push_back(number("sensor", "d", [](auto& c) -> auto& { return c.sensor.d; }));
    f.push_back(number("sensor", "a_prime", [](auto& c) -> auto& { return c.sensor.a_prime; }));
    f.push_back(number("sensor", "d_prime", [](auto& c) -> auto& { return c.sensor.d_prime; }));
    f.push_back(number("sensor", "max_range", [](auto& c) -> auto& { return c.sensor.max_range; }));
    f.push_back(number("sensor", "horizontal_fov",
                       [](auto& c) -> auto& { return c.sensor.horizontal_fov; }));
    f.push_back(number("sensor", "miss_rate", [](auto& c) -> auto& { return c.sensor.miss_rate; }));

    f.push_back(number("mapping", "alpha", [](auto& c) -> auto& { return c.mapping.alpha; }));
    f.push_back(number("mapping", "beta", [](auto& c) -> auto& { return c.mapping.beta; }));
    f.push_back(number("mapping", "p_low", [](auto& c) -> auto& { return c.mapping.p_low; }));
    f.push_back(number("mapping", "p_high", [](auto& c) -> auto& { return c.mapping.p_high; }));
    f.push_back(flag("mapping", "prediction_step",
                     [](auto& c) -> auto& { return c.mapping.prediction_step; }));

    f.push_back(number("predictor", "calm_threshold",
                       [](auto& c) -> auto& { return c.predictor.calm_threshold; }));
    f.push_back({"predictor", "combine",
                 [](C& c, const YAML::Node& n) {
                   const auto s = n.as<std::string>();
                   if (s == "max") c.predictor.combine = KernelCombine::Max;
                   else if (s == "sum_clamp") c.predictor.combine = KernelCombine::SumClamp;
                   else throw std::invalid_argument("expected max|sum_clamp");
                 },
                 [](const C& c) {
                   return std::string(c.predictor.combine == KernelCombine::Max ? "max"
                                                                                : "sum_clamp");
                 }});

    f.push_back({"planner", "kind",
                 [](C& c, const YAML::Node& n) {
                   c.planner.kind = parse_planner_kind(n.as<std::string>());
                 },
                 [](const C& c) { return to_string(c.planner.kind); }});
    f.push_back(number("planner", "horizon", [](auto& c) -> auto& { return c.planner.horizon; }));
    f.push_back({"planner", "weight",
                 [](C& c, const YAML::Node& n) {
                   c.planner.weight = parse_weight_schedule(n.as<std::string>());
                 },
                 [](const C& c) { return to_string(c.planner.weight); }});
    f.push_back({"planner", "entropy_term",
                 [](C& c, const YAML::Node& n) {
                   const auto s = n.as<std::string>();
                   if (s == "reduction") c.planner.entropy_term = EntropyTerm::Reduction;
                   else if (s == "literal") c.planner.entropy_term = EntropyTerm::Literal;
                   else throw std::invalid_argument("expected reduction|literal");
                 },
                 [](const C& c) {
                   return std::string(c.planner.entropy_term == EntropyTerm::Reduction
                                          ? "reduction"
                                          : "literal");
                 }});
    f.push_back({"planner", "tracking_form",
                 [](C& c, const YAML::Node& n) {
                   const auto s = n.as<std::string>();
                   if (s == "literal") c.planner.tracking_form = TrackingForm::Literal;
                   else if (s == "complementary")
                     c.planner.tracking_form = TrackingForm::Complementary;
                   else throw std::invalid_argument("expected literal|complementary");
                 },
                 [](const C& c) {
                   return std::string(c.planner.tracking_form == TrackingForm::Literal
                                          ? "literal"
                                          : "complementary");
                 }});
    f.push_back(number("planner", "prediction_interval",
                       [](auto& c) -> auto& { return c.planner.prediction_interval; }));
    f.push_back({"planner", "depth",
                 [](C& c, const YAML::Node& n) { c.planner.depth = n.as<int>(); },
                 [](const C& c) { return std::to_string(c.planner.depth); }});
    f.push_back({"planner", "heading_changes_deg",
                 [](C& c, const YAML::Node& n) {
                   if (!n.IsSequence()) throw std::invalid_argument("expected a list");
                   c.planner.heading_changes_deg.clear();
                   for (const auto& v : n) c.planner.heading_changes_deg.push_back(as_double(v));
                 },
                 [](const C& c) {
                   std::string s = "[";
                   for (std::size_t i = 0; i < c.planner.heading_changes_deg.size(); ++i) {
                     if (i) s += ", ";
                     s += format_double(c.planner.heading_changes_deg[i]);
                   }
                   return s + "]";
                 }});
    f.push_back({"planner", "receding_waypoints",
                 [](C& c, const YAML::Node& n) { c.planner.receding_waypoints = n.as<int>(); },
                 [](const C& c) { return std::to_string(c.planner.receding_waypoints); }});
    f.push_back(number("planner", "replan_stall",
                       [](auto& c) -> auto& { return c.planner.replan_stall; }));
    f.push_back(number("planner", "max_curvature",
                       [](auto& c) -> auto& { return c.planner.max_curvature; }));
    f.push_back(number("planner", "lawnmower_spacing_factor",
                       [](auto& c) -> auto& { return c.planner.lawnmower_spacing_factor; }));

    f.push_back(number("mission", "budget", [](auto& c) -> auto& { return c.mission.budget; }));
    f.push_back(number("mission", "dt", [](auto& c) -> auto& { return c.mission.dt; }));

    f.push_back(number("metrics", "sigma_g", [](auto& c) -> auto& { return c.metrics.sigma_g; }));
    f.push_back(number("output", "snapshot_every",
                       [](auto& c) -> auto& { return c.output.snapshot_every; }));

    f.push_back({"", "rng_seed",
                 [](C& c, const YAML::Node& n) { c.rng_seed = n.as<std::uint64_t>(); },
                 [](const C& c) { return std::to_string(c.rng_seed); }});
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

void set_field(ScenarioConfig& c, const std::string& section, const std::string& key,
               const YAML::Node& value) {
  const Field* f = find_field(section, key);
  const std::string name = section.empty() ? key : section + "." + key;
  if (!f) throw ConfigError("unknown config key '" + name + "'");
  try {
    f->set(c, value);
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

}  // namespace

std::string serialize_config(const ScenarioConfig& config) {
  std::string out = "# ipp scenario config\n";
  std::string current;
  bool first = true;
  for (const auto& f : fields()) {
    if (f.section.empty()) {
      out += f.key + ": " + f.get(config) + "\n";
      continue;
    }
    if (first || f.section != current) {
      out += f.section + ":\n";
      current = f.section;
      first = false;
    }
    out += "  " + f.key + ": " + f.get(config) + "\n";
  }
  return out;
}

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig c;
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config root must be a mapping");
  for (const auto& kv : root) {
    const auto name = kv.first.as<std::string>();
    if (kv.second.IsMap()) {
      for (const auto& inner : kv.second) {
        set_field(c, name, inner.first.as<std::string>(), inner.second);
      }
    } else {
      set_field(c, "", name, kv.second);
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(ScenarioConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be key=value: " + assignment);
  const std::string name = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  std::string section;
  std::string key = name;
  if (const auto dot = name.find('.'); dot != std::string::npos) {
    section = name.substr(0, dot);
    key = name.substr(dot + 1);
  }
  YAML::Node node;
  try {
    node = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError(name + ": " + e.what());
  }
  set_field(config, section, key, node);
}

}  // namespace ipp
