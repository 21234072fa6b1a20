#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cnls {

/// Invalid parameters or configuration (bad grid size, malformed config file, ...).
struct configuration_error : std::invalid_argument {
  explicit configuration_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Runtime numerical failure (overflow mid-run, stalled minimization, no shooting bracket).
struct numerics_error : std::runtime_error {
  explicit numerics_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed snapshot file; carries the byte offset where parsing failed.
struct snapshot_parse_error : std::runtime_error {
  std::size_t byte_offset;
  snapshot_parse_error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
};

}  // namespace cnls
