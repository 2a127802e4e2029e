#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "freefront/config.hpp"
#include "freefront/errors.hpp"

namespace freefront {

/// 0 ok, 2 validation (bad input, domain, bracket), 3 solver failure, 4 oracle violation.
int exit_code_for(ErrorKind kind);

/// Machine-readable error document: {"error": {"kind", "message", "exit_code"}}.
std::string error_json(ErrorKind kind, const std::string& message);

struct RunOptions {
  std::optional<std::filesystem::path> out;  ///< overrides outputs.dir
  std::optional<std::size_t> workers;        ///< overrides sweep.workers
  bool seedless = false;                     ///< reject defaults that depend on the host
  std::ostream* log = nullptr;               ///< progress and the limits table
};

struct RunStatus {
  int exit_code = 0;
  std::string error;  ///< error JSON when exit_code != 0
  std::filesystem::path out_dir;
};

/// Executes cfg.mode and writes its artifacts. Never throws for library errors;
/// they become a nonzero exit code plus error JSON (also written to out_dir/error.json).
RunStatus run(const RunConfig& cfg, const RunOptions& opts = {});

}  // namespace freefront
