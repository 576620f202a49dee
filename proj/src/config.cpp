#include "orlicz/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "orlicz/errors.hpp"
#include "orlicz/nonlinearity.hpp"
#include "orlicz/rayleigh.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Field {
  int line;
  std::string section;
  std::string key;
  std::string value;

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(fmt::format("line {}: [{}] {}: {}", line, section, key, why));
  }

  double number() const {
    const std::string_view v = trim(value);
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
      fail(fmt::format("'{}' is not a number", value));
    }
    return out;
  }

  long long integer() const {
    const std::string_view v = trim(value);
    long long out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
      fail(fmt::format("'{}' is not an integer", value));
    }
    return out;
  }

  std::vector<std::string> items() const {
    std::vector<std::string> out;
    std::string_view rest = value;
    while (true) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (!item.empty()) out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& item : items()) {
      Field f = *this;
      f.value = item;
      out.push_back(f.number());
    }
    return out;
  }

  std::string text() const { return std::string(trim(value)); }
};

using Setter = std::function<void(RunConfig&, const Field&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"young",
       {{"family", [](RunConfig& c, const Field& f) { c.young.family = f.text(); }},
        {"params", [](RunConfig& c, const Field& f) { c.young.params = f.numbers(); }}}},
      {"domain",
       {{"dim", [](RunConfig& c, const Field& f) { c.domain.dim = static_cast<int>(f.integer()); }},
        {"lower",
         [](RunConfig& c, const Field& f) {
           const auto v = f.numbers();
           if (v.empty() || v.size() > 2) f.fail("expected one or two coordinates");
           c.domain.lower = {v[0], v.size() > 1 ? v[1] : c.domain.lower[1]};
         }},
        {"upper",
         [](RunConfig& c, const Field& f) {
           const auto v = f.numbers();
           if (v.empty() || v.size() > 2) f.fail("expected one or two coordinates");
           c.domain.upper = {v[0], v.size() > 1 ? v[1] : c.domain.upper[1]};
         }},
        {"h", [](RunConfig& c, const Field& f) { c.domain.h = f.number(); }},
        {"collar", [](RunConfig& c, const Field& f) { c.domain.collar = f.number(); }}}},
      {"fractional", {{"s", [](RunConfig& c, const Field& f) { c.s = f.number(); }}}},
      {"problem",
       {{"bc", [](RunConfig& c, const Field& f) { c.problem.bc = f.items(); }},
        {"beta", [](RunConfig& c, const Field& f) { c.problem.beta = f.numbers(); }},
        {"mu", [](RunConfig& c, const Field& f) { c.problem.mu = f.number(); }},
        {"mu_list", [](RunConfig& c, const Field& f) { c.problem.mu_list = f.numbers(); }}}},
      {"nonlinearities",
       {{"f", [](RunConfig& c, const Field& f) { c.nonlinearities.f = f.text(); }},
        {"f_params", [](RunConfig& c, const Field& f) { c.nonlinearities.f_params = f.numbers(); }},
        {"h", [](RunConfig& c, const Field& f) { c.nonlinearities.h = f.text(); }},
        {"h_params", [](RunConfig& c, const Field& f) { c.nonlinearities.h_params = f.numbers(); }},
        {"lambda", [](RunConfig& c, const Field& f) { c.nonlinearities.lambda = f.number(); }},
        {"lambda_min", [](RunConfig& c, const Field& f) { c.nonlinearities.lambda_min = f.number(); }},
        {"lambda_max", [](RunConfig& c, const Field& f) { c.nonlinearities.lambda_max = f.number(); }},
        {"lambda_count",
         [](RunConfig& c, const Field& f) { c.nonlinearities.lambda_count = static_cast<int>(f.integer()); }},
        {"mu_coef", [](RunConfig& c, const Field& f) { c.nonlinearities.mu_coef = f.number(); }}}},
      {"solver",
       {{"tol", [](RunConfig& c, const Field& f) { c.solver.tol = f.number(); }},
        {"max_iter", [](RunConfig& c, const Field& f) { c.solver.max_iter = static_cast<int>(f.integer()); }},
        {"seeds", [](RunConfig& c, const Field& f) { c.solver.seeds = static_cast<int>(f.integer()); }},
        {"seed",
         [](RunConfig& c, const Field& f) {
           const auto v = f.integer();
           if (v < 0) f.fail("seed must be nonnegative");
           c.solver.seed = static_cast<std::uint64_t>(v);
         }},
        {"starts", [](RunConfig& c, const Field& f) { c.solver.starts = static_cast<int>(f.integer()); }},
        {"separation", [](RunConfig& c, const Field& f) { c.solver.separation = f.number(); }},
        {"crit_tol", [](RunConfig& c, const Field& f) { c.solver.crit_tol = f.number(); }},
        {"samples", [](RunConfig& c, const Field& f) { c.solver.samples = static_cast<int>(f.integer()); }}}},
      {"output",
       {{"dir", [](RunConfig& c, const Field& f) { c.output.dir = f.text(); }},
        {"format", [](RunConfig& c, const Field& f) { c.output.format = f.text(); }}}},
  };
  return table;
}

void check(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string_view::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(fmt::format("line {}: unterminated section header", line_no));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().count(section)) {
        throw ParseError(fmt::format("line {}: unknown section [{}]", line_no, section));
      }
      cfg.sections.insert(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(fmt::format("line {}: expected key = value", line_no));
    }
    if (section.empty()) throw ParseError(fmt::format("line {}: key outside any section", line_no));
    Field f{line_no, section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))};
    const auto& keys = schema().at(section);
    const auto it = keys.find(f.key);
    if (it == keys.end()) f.fail("unknown key");
    if (!seen.insert(section + "." + f.key).second) f.fail("duplicate key");
    it->second(cfg, f);
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
  try {
    (void)make_young(c.young.family, c.young.params);
  } catch (const InvalidParams& e) {
    throw ValidationError(fmt::format("young: {}", e.what()));
  }
  check(c.domain.dim == 1 || c.domain.dim == 2, "dim must be 1 or 2");
  for (int a = 0; a < c.domain.dim; ++a) {
    check(c.domain.upper[a] > c.domain.lower[a], "upper must exceed lower on every axis");
  }
  check(c.domain.h > 0.0, "h must be positive");
  check(c.domain.collar > 0.0, "collar must be positive");
  check(c.s > 0.0 && c.s < 1.0, "s must lie in (0,1)");
  check(!c.problem.bc.empty(), "bc list must not be empty");
  for (const auto& b : c.problem.bc) {
    try {
      (void)parse_bc(b);
    } catch (const InvalidParams&) {
      throw ValidationError(fmt::format("unknown boundary condition '{}'", b));
    }
  }
  check(!c.problem.beta.empty(), "beta must not be empty");
  for (double b : c.problem.beta) check(b > 0.0, "beta must be strictly positive");
  check(c.problem.mu > 0.0, "mu must be positive");
  check(!c.problem.mu_list.empty(), "mu_list must not be empty");
  for (double m : c.problem.mu_list) check(m > 0.0, "mu_list entries must be positive");
  for (const auto& [name, params] : {std::pair{c.nonlinearities.f, c.nonlinearities.f_params},
                                     std::pair{c.nonlinearities.h, c.nonlinearities.h_params}}) {
    try {
      (void)make_nonlinearity(name, params);
    } catch (const InvalidParams& e) {
      throw ValidationError(fmt::format("nonlinearity: {}", e.what()));
    }
  }
  check(c.nonlinearities.lambda >= 0.0, "lambda must be nonnegative");
  check(c.nonlinearities.lambda_min >= 0.0 && c.nonlinearities.lambda_max >= 0.0,
        "lambda bounds must be nonnegative");
  check(c.nonlinearities.lambda_count >= 1, "lambda_count must be at least 1");
  check(c.nonlinearities.mu_coef >= 0.0, "mu_coef must be nonnegative");
  check(c.solver.tol > 0.0, "tol must be positive");
  check(c.solver.max_iter > 0, "max_iter must be positive");
  check(c.solver.seeds >= 1, "seeds must be at least 1");
  check(c.solver.starts >= 1, "starts must be at least 1");
  check(c.solver.separation > 0.0, "separation must be positive");
  check(c.solver.crit_tol > 0.0, "crit_tol must be positive");
  check(c.solver.samples >= 1, "samples must be at least 1");
  check(!c.output.dir.empty(), "output dir must not be empty");
  check(c.output.format == "csv" || c.output.format == "jsonl", "format must be csv or jsonl");
}

std::string echo_config(const RunConfig& c) {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += fmt::format("{}{:.17g}", i ? ", " : "", v[i]);
    return s;
  };
  std::string out;
  out += fmt::format("[young]\nfamily = {}\nparams = {}\n", c.young.family, list(c.young.params));
  out += fmt::format("[domain]\ndim = {}\nlower = {}\nupper = {}\nh = {:.17g}\ncollar = {:.17g}\n",
                     c.domain.dim,
                     list({c.domain.lower.begin(), c.domain.lower.begin() + c.domain.dim}),
                     list({c.domain.upper.begin(), c.domain.upper.begin() + c.domain.dim}), c.domain.h,
                     c.domain.collar);
  out += fmt::format("[fractional]\ns = {:.17g}\n", c.s);
  out += fmt::format("[problem]\nbc = {}\nbeta = {}\nmu = {:.17g}\nmu_list = {}\n",
                     fmt::join(c.problem.bc, ", "), list(c.problem.beta), c.problem.mu,
                     list(c.problem.mu_list));
  const auto& n = c.nonlinearities;
  out += fmt::format(
      "[nonlinearities]\nf = {}\nf_params = {}\nh = {}\nh_params = {}\nlambda = {:.17g}\n"
      "lambda_min = {:.17g}\nlambda_max = {:.17g}\nlambda_count = {}\nmu_coef = {:.17g}\n",
      n.f, list(n.f_params), n.h, list(n.h_params), n.lambda, n.lambda_min, n.lambda_max,
      n.lambda_count, n.mu_coef);
  const auto& s = c.solver;
  out += fmt::format(
      "[solver]\ntol = {:.17g}\nmax_iter = {}\nseeds = {}\nseed = {}\nstarts = {}\n"
      "separation = {:.17g}\ncrit_tol = {:.17g}\nsamples = {}\n",
      s.tol, s.max_iter, s.seeds, s.seed, s.starts, s.separation, s.crit_tol, s.samples);
  out += fmt::format("[output]\ndir = {}\nformat = {}\n", c.output.dir, c.output.format);
  return out;
}

std::uint64_t config_hash(const RunConfig& config) {
  // The output location does not affect any result.
  RunConfig keyed = config;
  keyed.output.dir = "-";
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : echo_config(keyed)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace orlicz
