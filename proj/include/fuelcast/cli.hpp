#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuelcast::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kModelError = 3 };

// Every setting has a config-file key (snake_case) and a flag (--kebab-case).
struct KeySpec {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
};
std::span<const KeySpec> known_keys();

// Settings resolved from defaults, then a key=value file, then command-line flags.
class RunConfig {
 public:
  RunConfig();

  // Parses UTF-8 `key=value` lines; '#' starts a comment. Throws ConfigError naming the line
  // for unknown keys or malformed lines.
  void merge_file_text(std::string_view text);
  void set(std::string_view key, std::string value);

  const std::string& get(std::string_view key) const;
  double get_double(std::string_view key) const;
  long long get_int(std::string_view key) const;
  std::size_t get_size(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  // Comma-separated list, empty entries dropped.
  std::vector<std::string> get_list(std::string_view key) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

// Runs one subcommand: synth, validate, changes, train, evaluate, forecast, revenue, report.
// `args` excludes the program name.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fuelcast::cli
