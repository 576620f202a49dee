#ifndef ORLICZ_RUNNER_HPP
#define ORLICZ_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz/config.hpp"

namespace orlicz {

enum class Subcommand {
  check_young,
  verify_calculus,
  verify_operator,
  eigen,
  sweep_mu,
  multiplicity,
  perimeter
};

std::string_view to_string(Subcommand command);
/// Accepts the dashed names ("check-young", ...). Throws ValidationError.
Subcommand parse_subcommand(std::string_view name);
std::vector<std::string_view> subcommand_names();

/// Command-line values that replace the corresponding config entries.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> h;
  std::optional<double> collar;
  std::optional<double> tol;
};

/// Applies the overrides and re-validates.
void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Sections a subcommand reads; dispatch throws MissingSection if any is absent.
std::vector<std::string_view> required_sections(Subcommand command);

struct Failure {
  std::string check;
  std::string detail;
};

struct RunOutcome {
  /// 0 when every assertion passed, 1 otherwise.
  int exit_code = 0;
  std::vector<Failure> failures;
  /// Paths of the files written, in order.
  std::vector<std::string> artifacts;
};

/// Runs a subcommand and writes its tables, the resolved config and, on
/// failure, failures.json into config.output.dir.
RunOutcome dispatch(const RunConfig& config, Subcommand command);

}  // namespace orlicz

#endif  // ORLICZ_RUNNER_HPP
