#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace quotekg {

// Bad flags, rule files or sitelink files. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or missing input data. Maps to exit status 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

// Malformed dump XML. Carries the byte offset expat stopped at.
class IngestError : public DataError {
 public:
  IngestError(const std::string& what, std::int64_t byte_offset)
      : DataError(what + " at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  std::int64_t byte_offset() const { return byte_offset_; }

 private:
  std::int64_t byte_offset_;
};

// Raised by the NLP backend client; callers fall back to offline detectors.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quotekg
