#ifndef ORLICZ_CONFIG_HPP
#define ORLICZ_CONFIG_HPP

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace orlicz {

/// Run configuration, read from a sectioned key = value file:
///
///   [young]          family, params
///   [domain]         dim, lower, upper, h, collar
///   [fractional]     s
///   [problem]        bc, beta, mu, mu_list
///   [nonlinearities] f, f_params, h, h_params, lambda, lambda_min,
///                    lambda_max, lambda_count, mu_coef
///   [solver]         tol, max_iter, seeds, seed, starts, separation,
///                    crit_tol, samples
///   [output]         dir, format
///
/// Lists are comma separated. '#' and ';' start comments.
struct RunConfig {
  struct Young {
    std::string family = "power";
    std::vector<double> params{2.0};
  } young;

  struct Domain {
    int dim = 1;
    std::array<double, 2> lower{0.0, 0.0};
    std::array<double, 2> upper{1.0, 1.0};
    double h = 1.0 / 32.0;
    double collar = 0.5;
  } domain;

  double s = 0.3;

  struct Problem {
    std::vector<std::string> bc{"dirichlet"};
    /// One value (constant weight) or one value per exterior node.
    std::vector<double> beta{1.0};
    double mu = 1.0;
    std::vector<double> mu_list{1e-2, 1e-1, 1.0, 1e1, 1e2};
  } problem;

  struct Nonlinearities {
    std::string f = "sine_power";
    std::vector<double> f_params{3.0};
    std::string h = "zero";
    std::vector<double> h_params;
    /// A positive lambda runs that single value; otherwise the sweep below,
    /// whose bounds default to 1.1 and 10 times the estimated delta.
    double lambda = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    int lambda_count = 8;
    double mu_coef = 0.0;
  } nonlinearities;

  struct Solver {
    double tol = 1e-6;
    int max_iter = 50000;
    int seeds = 8;
    std::uint64_t seed = 20240601;
    int starts = 16;
    double separation = 1e-3;
    double crit_tol = 1e-8;
    int samples = 10000;
  } solver;

  struct Output {
    std::string dir = "out";
    std::string format = "csv";
  } output;

  /// Sections that appeared in the parsed text.
  std::set<std::string> sections;

  bool has_section(std::string_view name) const { return sections.count(std::string(name)) > 0; }
};

/// Throws ParseError (with line number and field) for syntax errors and
/// unknown sections or keys, ValidationError for values out of range.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Re-checks every constraint; parse_config calls it, overrides should too.
void validate_config(const RunConfig& config);

/// Canonical text of the fully resolved configuration.
std::string echo_config(const RunConfig& config);

/// FNV-1a 64 hash of echo_config with the output directory blanked.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace orlicz

#endif  // ORLICZ_CONFIG_HPP
