#include "cofix/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cofix {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << fmt(v[i]);
  }
  return os.str();
}

std::string fmt_vector(const Vector& v) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << fmt(v[i]);
  }
  return os.str();
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + s + "' is not a number");
  }
  if (pos != s.size()) throw std::invalid_argument("'" + s + "' is not a number");
  if (!std::isfinite(v)) throw std::invalid_argument("'" + s + "' is not finite");
  return v;
}

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_number(tok));
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Eigen::Index>(i)] = v[i];
  return x;
}

ScalarSchedule parse_schedule(const std::string& s) {
  if (s.rfind("const:", 0) == 0) return ScalarSchedule::constant(parse_number(s.substr(6)));
  if (s.rfind("power:", 0) == 0) {
    const auto parts = parse_number_list(s.substr(6));
    if (parts.size() != 2)
      throw std::invalid_argument("power schedule expects two values a,p");
    return ScalarSchedule::power(parts[0], parts[1]);
  }
  if (s.rfind("table:", 0) == 0) return ScalarSchedule::table(parse_number_list(s.substr(6)));
  throw std::invalid_argument("schedule '" + s + "' must start with const:, power: or table:");
}

FamilyIndexPolicy build_policy_from_string(const std::string& v) {
  if (v == "growing") return FamilyIndexPolicy::growing();
  if (v == "exact") return FamilyIndexPolicy::exact();
  if (v.rfind("frozen:", 0) == 0) {
    const double n = parse_number(v.substr(7));
    if (n < 1 || n != std::floor(n) || n > 1e9)
      throw std::invalid_argument("frozen index must be a positive integer");
    return FamilyIndexPolicy::frozen(static_cast<int>(n));
  }
  throw std::invalid_argument("index_policy must be growing, exact or frozen:<n>");
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"problem", {"family", "maps", "weights", "extend", "set", "x0"}},
      {"viscosity", {"f", "gamma", "A"}},
      {"schedule", {"alpha", "beta", "gamma_seq", "delta", "lambda", "d"}},
      {"stop", {"eps", "max_iter", "force", "index_policy", "x_star"}},
  };
  return keys;
}

struct Raw {
  int line = 0;
  std::string value;
};

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(render(issues)), issues_(std::move(issues)) {}

std::string ConfigError::render(const std::vector<ConfigIssue>& issues) {
  std::ostringstream os;
  os << "config error";
  if (issues.size() > 1) os << "s";
  os << ":";
  for (const auto& i : issues) {
    os << "\n  ";
    if (i.line > 0) os << "line " << i.line << ": ";
    os << i.message;
  }
  return os.str();
}

ConvexSet parse_set(const std::string& spec) {
  if (spec == "all") return ConvexSet::whole_space();
  if (spec.rfind("box:", 0) == 0) {
    const auto parts = parse_number_list(spec.substr(4));
    if (parts.size() != 2) throw std::invalid_argument("box set expects lo,hi");
    return ConvexSet::interval(parts[0], parts[1]);
  }
  if (spec.rfind("ball:", 0) == 0) {
    const auto parts = parse_number_list(spec.substr(5));
    if (parts.size() < 2)
      throw std::invalid_argument("ball set expects center coordinates then radius");
    std::vector<double> center(parts.begin(), parts.end() - 1);
    return ConvexSet::ball(to_vector(center), parts.back());
  }
  throw std::invalid_argument("set '" + spec + "' must be all, box:lo,hi or ball:c...,r");
}

ContractionMap parse_contraction(const std::string& spec) {
  if (spec.rfind("linear:", 0) == 0) return ContractionMap::linear(parse_number(spec.substr(7)));
  if (spec.rfind("const:", 0) == 0)
    return ContractionMap::constant(to_vector(parse_number_list(spec.substr(6))));
  throw std::invalid_argument("contraction '" + spec + "' must be linear:c or const:v,...");
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<ConfigIssue> issues;
  std::map<std::string, Raw> entries;
  std::set<std::string> sections_seen;

  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({line_no, "unterminated section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed_keys().count(section)) {
        issues.push_back({line_no, "unknown section [" + section + "]"});
        section.clear();
        continue;
      }
      sections_seen.insert(section);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({line_no, "expected key = value, got '" + line + "'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      issues.push_back({line_no, "key '" + key + "' appears before any section"});
      continue;
    }
    if (!allowed_keys().at(section).count(key)) {
      issues.push_back({line_no, "unknown key '" + key + "' in [" + section + "]"});
      continue;
    }
    const std::string id = section + "." + key;
    if (entries.count(id)) {
      issues.push_back({line_no, "duplicate key '" + key + "' in [" + section + "]"});
      continue;
    }
    if (value.empty()) {
      issues.push_back({line_no, "empty value for '" + key + "'"});
      continue;
    }
    entries[id] = {line_no, value};
  }

  if (!sections_seen.count("problem")) issues.push_back({0, "missing [problem] section"});

  ExperimentConfig cfg;
  auto get = [&entries](const std::string& id) -> const Raw* {
    auto it = entries.find(id);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto with = [&issues](const Raw* raw, auto&& fn) {
    if (!raw) return;
    try {
      fn(raw->value);
    } catch (const std::exception& e) {
      issues.push_back({raw->line, e.what()});
    }
  };

  with(get("problem.family"), [&](const std::string& v) {
    if (v != "w" && v != "k") throw std::invalid_argument("family must be w or k");
    cfg.family_kind = v[0];
  });
  if (sections_seen.count("problem") && !get("problem.family"))
    issues.push_back({0, "missing required key 'family' in [problem]"});

  with(get("problem.maps"), [&](const std::string& v) {
    for (const auto& label : split(v, ',')) {
      NonexpansiveMap::from_label(label);  // reject unknown names here, with the line
      cfg.maps.push_back(label);
    }
  });
  if (sections_seen.count("problem") && !get("problem.maps"))
    issues.push_back({0, "missing required key 'maps' in [problem]"});

  with(get("problem.weights"), [&](const std::string& v) { cfg.weights = parse_number_list(v); });
  with(get("problem.extend"), [&](const std::string& v) {
    if (v == "cycle") cfg.extend = Extension::Cycle;
    else if (v == "pad") cfg.extend = Extension::IdentityPad;
    else throw std::invalid_argument("extend must be cycle or pad");
  });
  with(get("problem.set"), [&](const std::string& v) {
    parse_set(v);  // validate now, build later
    cfg.set_spec = v;
  });
  with(get("problem.x0"), [&](const std::string& v) { cfg.x0 = to_vector(parse_number_list(v)); });

  with(get("viscosity.f"), [&](const std::string& v) {
    parse_contraction(v);
    cfg.f_spec = v;
  });
  with(get("viscosity.gamma"), [&](const std::string& v) {
    cfg.gamma = parse_number(v);
    if (!(cfg.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  });
  with(get("viscosity.A"), [&](const std::string& v) {
    if (v.rfind("scaled_identity:", 0) != 0)
      throw std::invalid_argument("A must be scaled_identity:c");
    cfg.a_scale = parse_number(v.substr(16));
    if (!(cfg.a_scale > 0.0)) throw std::invalid_argument("A scale must be positive");
  });

  with(get("schedule.alpha"), [&](const std::string& v) { cfg.alpha = parse_schedule(v); });
  with(get("schedule.beta"), [&](const std::string& v) { cfg.beta = parse_schedule(v); });
  with(get("schedule.gamma_seq"),
       [&](const std::string& v) { cfg.gamma_seq = parse_schedule(v); });
  with(get("schedule.delta"), [&](const std::string& v) { cfg.delta = parse_schedule(v); });
  with(get("schedule.lambda"),
       [&](const std::string& v) { cfg.lambda_row = parse_number_list(v); });
  with(get("schedule.d"), [&](const std::string& v) {
    cfg.d = parse_number(v);
    if (!(cfg.d > 0.0) || !(cfg.d < 1.0)) throw std::invalid_argument("d must lie in (0, 1)");
  });

  with(get("stop.eps"), [&](const std::string& v) {
    cfg.eps = parse_number(v);
    if (!(cfg.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  });
  with(get("stop.max_iter"), [&](const std::string& v) {
    const double n = parse_number(v);
    if (n < 1 || n != std::floor(n) || n > 2e9)
      throw std::invalid_argument("max_iter must be a positive integer");
    cfg.max_iter = static_cast<long>(n);
  });
  with(get("stop.force"), [&](const std::string& v) {
    if (v == "true") cfg.force = true;
    else if (v == "false") cfg.force = false;
    else throw std::invalid_argument("force must be true or false");
  });
  with(get("stop.index_policy"), [&](const std::string& v) {
    build_policy_from_string(v);  // validation only
    cfg.index_policy = v;
  });
  with(get("stop.x_star"),
       [&](const std::string& v) { cfg.x_star = to_vector(parse_number_list(v)); });

  // Defaults that depend on the map count.
  if (cfg.maps.empty() && issues.empty())
    issues.push_back({0, "at least one map is required"});
  if (!cfg.maps.empty()) {
    if (cfg.weights.empty())
      for (std::size_t i = 0; i < cfg.maps.size(); ++i)
        cfg.weights.push_back(1.0 / static_cast<double>(i + 2));
    if (cfg.lambda_row.empty()) cfg.lambda_row = cfg.weights;
    if (cfg.weights.size() != cfg.maps.size())
      issues.push_back({get("problem.weights") ? get("problem.weights")->line : 0,
                        "expected one weight per map"});
    else if (cfg.lambda_row.size() != cfg.maps.size())
      issues.push_back({get("schedule.lambda") ? get("schedule.lambda")->line : 0,
                        "expected one lambda weight per map"});
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));

  // Cross-field validation through the builders, so a parse success
  // guarantees a runnable problem.
  try {
    build_problem(cfg);
    build_bundle(cfg);
    build_stop(cfg);
    build_policy(cfg);
  } catch (const std::exception& e) {
    throw ConfigError({{0, e.what()}});
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, "cannot open config file '" + path + "'"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string echo_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[problem]\n"
     << "family = " << cfg.family_kind << '\n'
     << "maps = ";
  for (std::size_t i = 0; i < cfg.maps.size(); ++i) os << (i ? "," : "") << cfg.maps[i];
  os << '\n'
     << "weights = " << fmt_list(cfg.weights) << '\n'
     << "extend = " << (cfg.extend == Extension::Cycle ? "cycle" : "pad") << '\n'
     << "set = " << cfg.set_spec << '\n'
     << "x0 = " << fmt_vector(cfg.x0) << '\n'
     << "[viscosity]\n"
     << "f = " << cfg.f_spec << '\n'
     << "gamma = " << fmt(cfg.gamma) << '\n'
     << "A = scaled_identity:" << fmt(cfg.a_scale) << '\n'
     << "[schedule]\n"
     << "alpha = " << cfg.alpha.describe() << '\n'
     << "beta = " << cfg.beta.describe() << '\n'
     << "gamma_seq = " << cfg.gamma_seq.describe() << '\n'
     << "delta = " << cfg.delta.describe() << '\n'
     << "lambda = " << fmt_list(cfg.lambda_row) << '\n'
     << "d = " << fmt(cfg.d) << '\n'
     << "[stop]\n"
     << "eps = " << fmt(cfg.eps) << '\n'
     << "max_iter = " << cfg.max_iter << '\n'
     << "force = " << (cfg.force ? "true" : "false") << '\n'
     << "index_policy = " << cfg.index_policy << '\n';
  if (cfg.x_star) os << "x_star = " << fmt_vector(*cfg.x_star) << '\n';
  return os.str();
}

ProblemSpec build_problem(const ExperimentConfig& cfg) {
  std::vector<NonexpansiveMap> maps;
  maps.reserve(cfg.maps.size());
  for (const auto& label : cfg.maps) maps.push_back(NonexpansiveMap::from_label(label));

  ProblemSpec spec;
  if (cfg.family_kind == 'w') {
    spec.family = WFamily(std::move(maps), cfg.weights, cfg.extend);
  } else {
    spec.family = KFamily(std::move(maps), cfg.weights);
  }
  spec.set = parse_set(cfg.set_spec);
  spec.f = parse_contraction(cfg.f_spec);
  spec.gamma = cfg.gamma;
  spec.a = StrongPositiveOp::scaled_identity(static_cast<int>(cfg.x0.size()), cfg.a_scale);
  spec.x0 = cfg.x0;
  validate(spec);
  return spec;
}

ScheduleBundle build_bundle(const ExperimentConfig& cfg) {
  ScheduleBundle b;
  b.alpha = cfg.alpha;
  b.beta = cfg.beta;
  b.gamma_seq = cfg.gamma_seq;
  b.delta = cfg.delta;
  if (cfg.family_kind == 'k') b.lambda = LambdaSchedule::constant(cfg.lambda_row);
  b.d = cfg.d;
  return b;
}

StopRule build_stop(const ExperimentConfig& cfg) {
  StopRule stop{cfg.eps, cfg.max_iter};
  validate(stop);
  return stop;
}

FamilyIndexPolicy build_policy(const ExperimentConfig& cfg) {
  return build_policy_from_string(cfg.index_policy);
}

}  // namespace cofix
