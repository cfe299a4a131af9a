#pragma once

#include <stdexcept>
#include <string>

namespace synapse {

enum class ErrorCode {
  InvalidArgument,
  InvalidSpecies,
  Singularity,          // point inside a wire's exclusion radius
  QuantizationAxis,     // |B_DC| below the zero threshold
  NonDifferentiable,    // delta = Omega = 0
  Unsupported,          // e.g. RF wires out of phase
  NotFound,
  NoBracket,
  NotConverged,
  EmptyMesh,
  Config,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Configuration error carrying the offending key and (when known) the source line.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, int line, const std::string& reason)
      : Error(ErrorCode::Config, format(key, line, reason)), key_(std::move(key)), line_(line) {}
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& reason) {
    std::string msg = "config";
    if (line > 0) msg += ":" + std::to_string(line);
    msg += ": '" + key + "': " + reason;
    return msg;
  }
  std::string key_;
  int line_;
};

}  // namespace synapse
