#include "aniso_cli/config.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "aniso/kernel.hpp"
#include "aniso/verify.hpp"

namespace aniso::cli {

using nlohmann::json;

namespace {

const std::vector<std::pair<Experiment, std::string>>& experiment_names() {
  static const std::vector<std::pair<Experiment, std::string>> names{
      {Experiment::Solve, "solve"},         {Experiment::Harnack, "harnack"},
      {Experiment::Hoelder, "hoelder"},     {Experiment::Sobolev, "sobolev"},
      {Experiment::Poincare, "poincare"},   {Experiment::Maximal, "maximal"},
      {Experiment::GoodLambda, "goodlambda"}, {Experiment::Dyadic, "dyadic"},
      {Experiment::Convergence, "convergence"}, {Experiment::Ineq, "ineq"}};
  return names;
}

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// Single-pass scanner over JSON text recording where each value's key (or
// array element) starts. Malformed text is left to the real parser.
class Locator {
 public:
  explicit Locator(const std::string& text) : t_(text) {}

  std::map<std::string, std::pair<int, int>> run() {
    skip_ws();
    if (i_ < t_.size()) value("", here());
    return out_;
  }

 private:
  std::pair<int, int> here() const { return {line_, col_}; }

  void advance() {
    if (t_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_ws() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) advance();
  }

  std::string string_token() {
    std::string s;
    advance();  // opening quote
    while (i_ < t_.size() && t_[i_] != '"') {
      if (t_[i_] == '\\' && i_ + 1 < t_.size()) {
        advance();
        s += t_[i_] == 'n' ? '\n' : t_[i_];
      } else {
        s += t_[i_];
      }
      advance();
    }
    if (i_ < t_.size()) advance();
    return s;
  }

  void value(const std::string& ptr, std::pair<int, int> at) {
    out_.emplace(ptr, at);
    if (i_ >= t_.size()) return;
    const char c = t_[i_];
    if (c == '{') {
      advance();
      skip_ws();
      while (i_ < t_.size() && t_[i_] != '}') {
        if (t_[i_] != '"') return;
        const auto key_at = here();
        const std::string key = string_token();
        skip_ws();
        if (i_ >= t_.size() || t_[i_] != ':') return;
        advance();
        skip_ws();
        value(ptr + "/" + escape_token(key), key_at);
        skip_ws();
        if (i_ < t_.size() && t_[i_] == ',') {
          advance();
          skip_ws();
        }
      }
      if (i_ < t_.size()) advance();
    } else if (c == '[') {
      advance();
      skip_ws();
      std::size_t k = 0;
      while (i_ < t_.size() && t_[i_] != ']') {
        value(ptr + "/" + std::to_string(k++), here());
        skip_ws();
        if (i_ < t_.size() && t_[i_] == ',') {
          advance();
          skip_ws();
        } else if (i_ < t_.size() && t_[i_] != ']') {
          return;
        }
      }
      if (i_ < t_.size()) advance();
    } else if (c == '"') {
      string_token();
    } else {
      while (i_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[i_])) && t_[i_] != ',' &&
             t_[i_] != '}' && t_[i_] != ']')
        advance();
    }
  }

  const std::string& t_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::map<std::string, std::pair<int, int>> out_;
};

std::pair<int, int> line_col_of_byte(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Reader {
 public:
  Reader(const std::string& text, const std::string& source) : source_(source), loc_(locate_json(text)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    std::string p = ptr;
    auto it = loc_.find(p);
    while (it == loc_.end() && !p.empty()) {
      p = p.substr(0, p.rfind('/'));
      it = loc_.find(p);
    }
    const auto [line, col] = it == loc_.end() ? std::pair{1, 1} : it->second;
    throw ConfigError(source_, line, col, (ptr.empty() ? "" : ptr + ": ") + msg);
  }

  // Rejects keys outside `allowed` so typos do not pass silently.
  void only_keys(const json& obj, const std::string& ptr, const std::set<std::string>& allowed) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    for (const auto& [key, v] : obj.items()) {
      (void)v;
      if (!allowed.count(key)) fail(ptr + "/" + escape_token(key), "unknown key '" + key + "'");
    }
  }

  double number(const json& v, const std::string& ptr) const {
    if (!v.is_number()) fail(ptr, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(ptr, "must be finite");
    return x;
  }

  double positive(const json& v, const std::string& ptr) const {
    const double x = number(v, ptr);
    if (!(x > 0.0)) fail(ptr, "must be positive");
    return x;
  }

  long long integer(const json& v, const std::string& ptr) const {
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    return v.get<long long>();
  }

  std::size_t count(const json& v, const std::string& ptr, std::size_t lo) const {
    const long long x = integer(v, ptr);
    if (x < static_cast<long long>(lo)) fail(ptr, fmt::format("must be at least {}", lo));
    return static_cast<std::size_t>(x);
  }

  std::string string(const json& v, const std::string& ptr) const {
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, const std::string& ptr) const {
    if (!v.is_array() || v.empty()) fail(ptr, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], ptr + "/" + std::to_string(k)));
    return out;
  }

  std::vector<std::vector<double>> number_rows(const json& v, const std::string& ptr) const {
    if (!v.is_array() || v.empty()) fail(ptr, "expected a non-empty array of arrays");
    std::vector<std::vector<double>> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(numbers(v[k], ptr + "/" + std::to_string(k)));
    return out;
  }

  std::vector<std::string> strings(const json& v, const std::string& ptr) const {
    if (!v.is_array() || v.empty()) fail(ptr, "expected a non-empty array of strings");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(string(v[k], ptr + "/" + std::to_string(k)));
    return out;
  }

  Profile profile(const json& v, const std::string& ptr) const {
    Profile pr;
    if (v.is_number()) {
      pr.constant = number(v, ptr);
      return pr;
    }
    only_keys(v, ptr, {"function", "scale"});
    if (!v.contains("function")) fail(ptr, "profile object needs 'function'");
    pr.function = string(v["function"], ptr + "/function");
    try {
      smooth_function(pr.function, 1);
    } catch (const std::exception& e) {
      fail(ptr + "/function", e.what());
    }
    if (v.contains("scale")) pr.scale = number(v["scale"], ptr + "/scale");
    return pr;
  }

 private:
  std::string source_;
  std::map<std::string, std::pair<int, int>> loc_;
};

}  // namespace

Experiment parse_experiment(const std::string& name) {
  for (const auto& [e, n] : experiment_names())
    if (n == name) return e;
  std::string known;
  for (const auto& [e, n] : experiment_names()) known += (known.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown experiment '" + name + "' (known: " + known + ")");
}

std::string to_string(Experiment e) {
  for (const auto& [k, n] : experiment_names())
    if (k == e) return n;
  return "unknown";
}

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& message)
    : std::runtime_error(fmt::format("{}:{}:{}: error: {}", source, line, column, message)),
      line_(line),
      column_(column),
      detail_(message) {}

std::map<std::string, std::pair<int, int>> locate_json(const std::string& text) {
  return Locator(text).run();
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col_of_byte(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError(source, line, col, msg);
  }
  const Reader rd(text, source);
  rd.only_keys(root, "",
               {"experiment", "anisotropy", "kernel", "grid", "problem", "sweep", "seed", "samples", "count",
                "robustness", "lemmas", "gammas", "s_list", "functions", "points", "manufactured",
                "hoelder_base", "generations", "output"});

  ExperimentConfig c;
  if (!root.contains("experiment")) rd.fail("", "missing key 'experiment'");
  try {
    c.experiment = parse_experiment(rd.string(root["experiment"], "/experiment"));
  } catch (const std::invalid_argument& e) {
    rd.fail("/experiment", e.what());
  }

  if (root.contains("anisotropy")) {
    const auto& a = root["anisotropy"];
    rd.only_keys(a, "/anisotropy", {"p", "s", "s0"});
    if (a.contains("p")) c.p = rd.number(a["p"], "/anisotropy/p");
    if (a.contains("s")) c.s = rd.numbers(a["s"], "/anisotropy/s");
    if (a.contains("s0")) c.s0 = rd.number(a["s0"], "/anisotropy/s0");
  }
  if (root.contains("kernel")) {
    const auto& k = root["kernel"];
    rd.only_keys(k, "/kernel", {"variant", "lambda", "coefficient"});
    std::string variant = "axes";
    if (k.contains("variant")) variant = rd.string(k["variant"], "/kernel/variant");
    if (variant != "axes" && variant != "coefficient")
      rd.fail("/kernel/variant", "variant must be 'axes' or 'coefficient'");
    if (k.contains("lambda")) c.ellipticity = rd.number(k["lambda"], "/kernel/lambda");
    if (variant == "coefficient") {
      if (!k.contains("coefficient")) rd.fail("/kernel", "coefficient variant needs 'coefficient'");
      c.coefficient = rd.string(k["coefficient"], "/kernel/coefficient");
      try {
        coefficient_from_catalog(c.coefficient);
      } catch (const std::exception& e) {
        rd.fail("/kernel/coefficient", e.what());
      }
    } else if (k.contains("coefficient")) {
      rd.fail("/kernel/coefficient", "'coefficient' requires variant 'coefficient'");
    }
  }
  if (root.contains("grid")) {
    const auto& g = root["grid"];
    rd.only_keys(g, "/grid", {"nodes", "box"});
    if (g.contains("nodes")) c.nodes = rd.count(g["nodes"], "/grid/nodes", 3);
    if (g.contains("box")) c.box = rd.positive(g["box"], "/grid/box");
  }
  if (root.contains("problem")) {
    const auto& pr = root["problem"];
    rd.only_keys(pr, "/problem", {"f", "g", "exterior", "q", "tol", "max_iter", "method"});
    if (pr.contains("f")) c.f = rd.profile(pr["f"], "/problem/f");
    if (pr.contains("g")) c.g = rd.profile(pr["g"], "/problem/g");
    if (pr.contains("exterior")) {
      try {
        c.exterior = ExteriorRule::parse(rd.string(pr["exterior"], "/problem/exterior"));
      } catch (const std::invalid_argument& e) {
        rd.fail("/problem/exterior", e.what());
      }
    }
    if (pr.contains("q")) c.q = rd.positive(pr["q"], "/problem/q");
    if (pr.contains("tol")) c.tol = rd.positive(pr["tol"], "/problem/tol");
    if (pr.contains("max_iter")) c.max_iter = static_cast<int>(rd.count(pr["max_iter"], "/problem/max_iter", 1));
    if (pr.contains("method")) {
      try {
        c.method = parse_solver_method(rd.string(pr["method"], "/problem/method"));
      } catch (const std::invalid_argument& e) {
        rd.fail("/problem/method", e.what());
      }
    }
  }
  if (root.contains("sweep")) {
    const auto& sw = root["sweep"];
    rd.only_keys(sw, "/sweep", {"s", "p", "p0"});
    if (sw.contains("s")) c.sweep_s = rd.number_rows(sw["s"], "/sweep/s");
    if (sw.contains("p")) c.sweep_p = rd.numbers(sw["p"], "/sweep/p");
    if (sw.contains("p0")) c.sweep_p0 = rd.numbers(sw["p0"], "/sweep/p0");
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) rd.fail("/seed", "expected an unsigned integer");
    c.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("samples")) c.samples = rd.count(root["samples"], "/samples", 1);
  if (root.contains("count")) c.count = rd.count(root["count"], "/count", 1);
  if (root.contains("robustness")) c.robustness = rd.positive(root["robustness"], "/robustness");
  if (root.contains("lemmas")) {
    c.lemmas = rd.strings(root["lemmas"], "/lemmas");
    for (std::size_t k = 0; k < c.lemmas.size(); ++k) {
      try {
        parse_lemma(c.lemmas[k]);
      } catch (const std::invalid_argument& e) {
        rd.fail("/lemmas/" + std::to_string(k), e.what());
      }
    }
  }
  if (root.contains("gammas")) {
    c.gammas = rd.numbers(root["gammas"], "/gammas");
    for (std::size_t k = 0; k < c.gammas.size(); ++k)
      if (!(c.gammas[k] > 0.0)) rd.fail("/gammas/" + std::to_string(k), "gamma must be positive");
  }
  if (root.contains("s_list")) {
    c.orders = rd.numbers(root["s_list"], "/s_list");
    if (c.orders.size() < 2) rd.fail("/s_list", "needs at least two orders");
    for (std::size_t k = 0; k < c.orders.size(); ++k)
      if (!(c.orders[k] > 0.0 && c.orders[k] < 1.0)) rd.fail("/s_list/" + std::to_string(k), "order must lie in (0,1)");
  }
  if (root.contains("functions")) {
    c.functions = rd.strings(root["functions"], "/functions");
    for (std::size_t k = 0; k < c.functions.size(); ++k) {
      try {
        smooth_function(c.functions[k], 1);
      } catch (const std::exception& e) {
        rd.fail("/functions/" + std::to_string(k), e.what());
      }
    }
  }
  if (root.contains("points")) c.points = rd.number_rows(root["points"], "/points");
  if (root.contains("manufactured")) {
    c.manufactured = rd.string(root["manufactured"], "/manufactured");
    try {
      smooth_function(c.manufactured, 1);
    } catch (const std::exception& e) {
      rd.fail("/manufactured", e.what());
    }
  }
  if (root.contains("hoelder_base")) {
    c.hoelder_base = rd.number(root["hoelder_base"], "/hoelder_base");
    if (!(c.hoelder_base > 1.0)) rd.fail("/hoelder_base", "base must exceed 1");
  }
  if (root.contains("generations")) {
    const auto& g = root["generations"];
    rd.only_keys(g, "/generations", {"min", "max"});
    if (g.contains("min")) c.kmin = static_cast<int>(rd.integer(g["min"], "/generations/min"));
    if (g.contains("max")) c.kmax = static_cast<int>(rd.integer(g["max"], "/generations/max"));
    if (c.kmin > c.kmax) rd.fail("/generations", "min must not exceed max");
    if (c.kmax - c.kmin > 16) rd.fail("/generations", "at most 17 generations");
  }
  if (root.contains("output")) c.output = rd.string(root["output"], "/output");

  // Every sweep combination must describe a valid anisotropy and grid.
  const auto s_ptr = [&](std::size_t k) { return c.sweep_s.empty() ? std::string("/anisotropy/s") : "/sweep/s/" + std::to_string(k); };
  const auto p_ptr = [&](std::size_t k) { return c.sweep_p.empty() ? std::string("/anisotropy/p") : "/sweep/p/" + std::to_string(k); };
  const auto orders = c.orders_sweep();
  const auto ps = c.p_sweep();
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i].size() != orders.front().size()) rd.fail(s_ptr(i), "all order vectors must share one dimension");
    if (orders[i].size() > 3) rd.fail(s_ptr(i), "dimension must be 1, 2 or 3");
    for (std::size_t j = 0; j < ps.size(); ++j) {
      try {
        const Anisotropy a(ps[j], orders[i], c.s0, c.ellipticity);
        Grid(a, c.nodes, c.box);
      } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        std::string where = s_ptr(i);
        if (what.find("p must") != std::string::npos) where = p_ptr(j);
        else if (what.find("ellipticity") != std::string::npos) where = "/kernel/lambda";
        else if (what.find("s0") != std::string::npos) where = "/anisotropy/s0";
        else if (what.find("nodes per axis") != std::string::npos) where = "/grid/nodes";
        else if (what.find("box radius") != std::string::npos) where = "/grid/box";
        rd.fail(where, what);
      }
    }
  }
  for (std::size_t k = 0; k < c.p0_sweep().size(); ++k)
    if (!(c.p0_sweep()[k] > 0.0)) rd.fail("/sweep/p0/" + std::to_string(k), "p0 must be positive");

  const std::size_t dim = orders.front().size();
  for (std::size_t k = 0; k < c.points.size(); ++k)
    if (c.points[k].size() != dim)
      rd.fail("/points/" + std::to_string(k), fmt::format("point needs {} coordinates", dim));

  const bool needs_equal = c.experiment == Experiment::Convergence;
  if (needs_equal)
    for (std::size_t i = 0; i < orders.size(); ++i)
      for (double s : orders[i])
        if (s != orders[i][0]) rd.fail(s_ptr(i), "convergence needs equal orders");
  if (c.experiment == Experiment::Solve || c.experiment == Experiment::Harnack ||
      c.experiment == Experiment::Hoelder) {
    if (c.q != 0.0 && !(c.q > static_cast<double>(dim))) rd.fail("/problem/q", "q must exceed the dimension");
  }
  return c;
}

}  // namespace aniso::cli
