#pragma once

// Command-line front end. `run` is the whole program; tools/main.cpp only
// forwards argv and the standard streams.
//
//   lgradial <render|phexp|overlap|verify> [--config FILE|-] [--out DIR] [--a.b VALUE ...]

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lgr::cli {

enum ExitCode : int { ok = 0, verify_failed = 1, usage_error = 2, io_error = 3 };

/// Every key a config may set, with its default.
nlohmann::json default_config();

/// Overlays `user` on the defaults. Keys not present in the defaults are a
/// usage error (thrown as ConfigError).
nlohmann::json merge_config(const nlohmann::json& user);

/// Sets a dotted key ("mode.n") from its command-line text. The text is read
/// as JSON when it parses, otherwise kept as a string.
void apply_override(nlohmann::json& config, const std::string& dotted_key, const std::string& text);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs every verification suite on the resolved config. The report holds
/// one entry per check (name, measured, tolerance, comparison, passed, note)
/// and a top-level "passed".
nlohmann::json verify_report(const nlohmann::json& config);

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lgr::cli
