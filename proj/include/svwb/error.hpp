#pragma once

#include <stdexcept>
#include <string>

namespace svwb {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration: bad anchor sets, malformed config documents,
// out-of-bounds regions, dimension mismatches. CLI exit code 2.
class config_error : public error {
 public:
  using error::error;
};

// File-level failures: unreadable paths, corrupt streams, unsupported
// encodings. CLI exit code 3.
class io_error : public error {
 public:
  using error::error;
};

// Degenerate numeric input: nonpositive cone responses, zero-norm vectors,
// all-black images, out-of-domain channel values. CLI exit code 4.
class numeric_error : public error {
 public:
  using error::error;
};

}  // namespace svwb
