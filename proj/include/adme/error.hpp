#pragma once

#include <stdexcept>
#include <string>

namespace adme {

// Exit-code contract: 0 success, 2 usage, 3 input/parse, 4 runtime.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitInput = 3,
    kExitRuntime = 4,
};

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual int exit_code() const { return kExitRuntime; }
    ~Error() override = default;
};

class UsageError : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return kExitUsage; }
};

class ConfigError : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return kExitUsage; }
};

class ParseError : public Error {
  public:
    ParseError(const std::string& what, long byte_offset = -1)
        : Error(byte_offset >= 0 ? what + " (byte " + std::to_string(byte_offset) + ")" : what),
          byte_offset_(byte_offset) {}
    long byte_offset() const { return byte_offset_; }
    int exit_code() const override { return kExitInput; }

  private:
    long byte_offset_;
};

class ValidationError : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return kExitInput; }
};

class IngestError : public Error {
  public:
    IngestError(const std::string& what, const std::string& cursor)
        : Error(cursor.empty() ? what : what + " (cursor: " + cursor + ")"), cursor_(cursor) {}
    const std::string& cursor() const { return cursor_; }
    int exit_code() const override { return kExitInput; }

  private:
    std::string cursor_;
};

class IoError : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return kExitRuntime; }
};

class TrainError : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return kExitRuntime; }
};

class DimensionError : public Error {
  public:
    using Error::Error;
    int exit_code() const override { return kExitRuntime; }
};

}  // namespace adme
