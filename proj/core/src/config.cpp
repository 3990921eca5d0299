#include "fplab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fplab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' expects a number, got '" + v + "'",
                      line, key);
  }
}

long long to_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' expects an integer, got '" + v + "'",
                      line, key);
  }
}

std::vector<double> to_doubles(const std::string& v, int line, const std::string& key) {
  std::vector<double> out;
  for (const std::string& item : split(v, ','))
    out.push_back(to_double(item, line, key));
  return out;
}

// smoothstep shared with the cutoff profiles
double smoothstep01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace

double ScalarFieldSpec::eval(const Point& x) const {
  double v = 0.0;
  for (const Term& t : terms) {
    if (t.kind == Term::Kind::constant) {
      v += t.value;
    } else {
      v += t.height * smoothstep01(1.0 - dist(x, t.center) / t.radius);
    }
  }
  return v;
}

ScalarFieldSpec ScalarFieldSpec::parse(const std::string& expr, int dim) {
  ScalarFieldSpec spec;
  // split on '+' outside parentheses
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : expr) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == '+' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(trim(cur));

  for (const std::string& part : parts) {
    if (part.empty() || part == "zero") continue;
    const auto open = part.find('(');
    const auto close = part.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
      throw std::invalid_argument("field term '" + part +
                                  "' (expected zero, constant(c) or bump(...))");
    const std::string name = trim(part.substr(0, open));
    const auto args = split(part.substr(open + 1, close - open - 1), ',');
    Term t;
    if (name == "constant") {
      if (args.size() != 1)
        throw std::invalid_argument("constant(c) takes one argument, got '" + part + "'");
      t.kind = Term::Kind::constant;
      t.value = std::stod(args[0]);
    } else if (name == "bump") {
      const std::size_t expected = static_cast<std::size_t>(dim) + 2;
      if (args.size() != expected)
        throw std::invalid_argument("bump takes cx" + std::string(dim == 2 ? ",cy" : "") +
                                    ",radius,height; got '" + part + "'");
      t.kind = Term::Kind::bump;
      t.center[0] = std::stod(args[0]);
      if (dim == 2) t.center[1] = std::stod(args[1]);
      t.radius = std::stod(args[dim]);
      t.height = std::stod(args[dim + 1]);
      if (!(t.radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
    } else {
      throw std::invalid_argument("unknown field term '" + name + "'");
    }
    spec.terms.push_back(t);
  }
  return spec;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  std::string u0_expr, g_expr;
  bool saw_mesh = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section '" +
                              line + "'",
                          line_no, line);
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"mesh", "kernel", "problem", "solver",
                                    "verify", "bench", "output"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
            return section == k;
          }) == std::end(known))
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" +
                              section + "]",
                          line_no, section);
      if (section == "mesh") saw_mesh = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" +
                            line + "'",
                        line_no, line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    auto unknown = [&]() {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                            "' in section [" + section + "]",
                        line_no, key);
    };

    if (section == "mesh") {
      if (key == "n") cfg.dim = static_cast<int>(to_int(value, line_no, qual));
      else if (key == "extents") {
        const auto axes = split(value, ';');
        if (axes.empty() || axes.size() > 2)
          throw ConfigError("line " + std::to_string(line_no) +
                                ": extents expects 'lo:hi' per axis, ';'-separated",
                            line_no, qual);
        for (std::size_t d = 0; d < axes.size(); ++d) {
          const auto colon = axes[d].find(':');
          if (colon == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                                  ": extents expects 'lo:hi', got '" + axes[d] + "'",
                              line_no, qual);
          cfg.lo[d] = to_double(trim(axes[d].substr(0, colon)), line_no, qual);
          cfg.hi[d] = to_double(trim(axes[d].substr(colon + 1)), line_no, qual);
        }
      } else if (key == "h") cfg.h = to_double(value, line_no, qual);
      else if (key == "r_ext") cfg.r_ext = to_double(value, line_no, qual);
      else unknown();
    } else if (section == "kernel") {
      if (key == "s") cfg.kernel.s = to_double(value, line_no, qual);
      else if (key == "p") cfg.kernel.p = to_double(value, line_no, qual);
      else if (key == "lambda") cfg.kernel.lambda = to_double(value, line_no, qual);
      else if (key == "form") {
        try {
          cfg.kernel.form = kernel_form_from_string(value);
        } catch (const std::exception& e) {
          throw ConfigError("line " + std::to_string(line_no) + ": " + e.what(), line_no, qual);
        }
      } else if (key == "seed")
        cfg.kernel.seed = static_cast<std::uint64_t>(to_int(value, line_no, qual));
      else unknown();
    } else if (section == "problem") {
      if (key == "u0") u0_expr = value;
      else if (key == "g") g_expr = value;
      else if (key == "g_decay") cfg.g_decay = to_double(value, line_no, qual);
      else if (key == "T") cfg.horizon = to_double(value, line_no, qual);
      else if (key == "dt") cfg.dt = to_double(value, line_no, qual);
      else unknown();
    } else if (section == "solver") {
      if (key == "tolerance") cfg.step.tolerance = to_double(value, line_no, qual);
      else if (key == "max_iterations")
        cfg.step.max_iterations = static_cast<int>(to_int(value, line_no, qual));
      else if (key == "shrink") cfg.step.shrink = to_double(value, line_no, qual);
      else if (key == "initial_step") cfg.step.initial_step = to_double(value, line_no, qual);
      else unknown();
    } else if (section == "verify") {
      if (key == "checks") cfg.checks = split(value, ',');
      else if (key == "cylinder") {
        const auto nums = to_doubles(value, line_no, qual);
        const std::size_t expected = static_cast<std::size_t>(cfg.dim) + 3;
        if (nums.size() != expected)
          throw ConfigError("line " + std::to_string(line_no) +
                                ": cylinder expects cx[,cy],r,t1,T1",
                            line_no, qual);
        cfg.cylinder.x0[0] = nums[0];
        if (cfg.dim == 2) cfg.cylinder.x0[1] = nums[1];
        cfg.cylinder.r = nums[cfg.dim];
        cfg.cylinder.t1 = nums[cfg.dim + 1];
        cfg.cylinder.duration = nums[cfg.dim + 2];
        cfg.has_cylinder = true;
      } else if (key == "sigmas") cfg.sigmas = to_doubles(value, line_no, qual);
      else if (key == "xis") cfg.xis = to_doubles(value, line_no, qual);
      else if (key == "refine") cfg.refine = static_cast<int>(to_int(value, line_no, qual));
      else if (key == "trials")
        cfg.trials = static_cast<std::size_t>(to_int(value, line_no, qual));
      else if (key == "c_p") cfg.c_p_override = to_double(value, line_no, qual);
      else unknown();
    } else if (section == "bench") {
      if (key == "sizes") {
        for (const auto& v : split(value, ','))
          if (!v.empty()) cfg.bench_sizes.push_back(static_cast<std::size_t>(to_int(v, line_no, qual)));
      } else if (key == "repetitions")
        cfg.bench_repetitions = static_cast<int>(to_int(value, line_no, qual));
      else unknown();
    } else if (section == "output") {
      if (key == "dir") cfg.out_dir = value;
      else unknown();
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                            "' outside any section",
                        line_no, key);
    }
  }

  if (!saw_mesh)
    throw ConfigError("config " + origin + " has no [mesh] section", 0, "mesh");
  if (!(cfg.h > 0.0))
    throw ConfigError("config " + origin + ": [mesh] h must be set and positive", 0, "mesh.h");
  if (cfg.refine < 1)
    throw ConfigError("config " + origin + ": [verify] refine must be >= 1", 0, "verify.refine");

  try {
    cfg.u0 = ScalarFieldSpec::parse(u0_expr, cfg.dim);
    cfg.g = ScalarFieldSpec::parse(g_expr, cfg.dim);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config ") + origin + ": " + e.what(), 0, "problem.u0/g");
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path, 0, path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

Mesh make_mesh(const RunConfig& cfg, int refine_level) {
  const double h = cfg.h / std::pow(2.0, refine_level);
  return build_mesh(cfg.dim, cfg.lo, cfg.hi, h, cfg.r_ext);
}

ProblemSpec make_problem(const RunConfig& cfg, int refine_level) {
  if (!(cfg.horizon > 0.0) || !(cfg.dt > 0.0))
    throw ConfigError("config: [problem] T and dt must be set and positive", 0, "problem");
  ProblemSpec spec;
  spec.mesh = make_mesh(cfg, refine_level);
  spec.kernel = cfg.kernel;
  const ScalarFieldSpec g = cfg.g;
  const double decay = cfg.g_decay;
  spec.exterior_data = [g, decay](const Point& x, double t) {
    return g.eval(x) * std::exp(-decay * t);
  };
  const ScalarFieldSpec u0 = cfg.u0;
  spec.initial_data = [u0](const Point& x) { return u0.eval(x); };
  spec.horizon = cfg.horizon;
  spec.dt = cfg.dt / std::pow(2.0, refine_level);
  return spec;
}

}  // namespace fplab
