#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace affgeo {

enum class ErrorKind {
  Parse,
  UnknownIdentifier,
  Domain,
  DimensionMismatch,
  SingularBilinearPart,
  DegenerateLambda,
  NotTwoAffine,
  SingularMetric,
  UnsupportedRank,
  RankMismatch,
  DegenerateFamily,
  Schema,
  Validation,
  Io,
  Internal,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; `kind()` distinguishes the error
// classes the public operations document.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(ErrorKind::Parse, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t offset, const std::string& name)
      : Error(ErrorKind::UnknownIdentifier,
              "unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        offset_(offset),
        name_(name) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t offset_;
  std::string name_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(ErrorKind::Schema, path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace affgeo
