// Command-line front end: `scatter`, `evolve` and `algebra` subcommands.
//
// Parameters come from flags and, optionally, a JSON config file given with
// --config whose keys are the flag names without dashes. A flag given on the
// command line wins over the config file. Every parameter is validated
// before any computation starts.
#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace diracstep::cli {

enum class Subcommand { Scatter, Evolve, Algebra };
enum class OutputFormat { Csv, Svg, Json };

/// Bad flags, unknown config keys, malformed or out-of-range values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Scatter;
  std::map<std::string, std::string> parameters;
  std::string output_path;  // empty: stdout where applicable
  OutputFormat format = OutputFormat::Csv;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation or computation failed
inline constexpr int kExitUsage = 2;    // command line could not be parsed

struct ParseOutcome {
  RunConfig config;
  int exit_code = -1;  // >= 0: stop with this code, `config` is not usable
};

/// Parses argv (argv[0] is the program name) and merges the --config file.
/// Help requests and CLI11 parse errors are printed and turned into an exit
/// code; malformed config files throw ConfigError.
ParseOutcome parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                std::ostream& err);

int run_scatter(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_evolve(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_algebra(const RunConfig& config, std::ostream& out, std::ostream& err);
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_command_line + run, with every exception mapped to a diagnostic
/// and a nonzero exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diracstep::cli
