#pragma once

#include <stdexcept>
#include <string>

namespace tskan {

/// Failure category. The CLI maps each kind onto a process exit code.
enum class ErrorKind { Config, Data, Training, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

/// Raised when optimization diverges; carries the epoch at which it happened.
struct TrainingError : Error {
  TrainingError(const std::string& what, std::size_t epoch)
      : Error(ErrorKind::Training, what), epoch(epoch) {}
  std::size_t epoch;
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace tskan
