#pragma once

#include <stdexcept>
#include <string>

namespace edgeserve {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotCached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AlreadyCached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientMemory : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace edgeserve
