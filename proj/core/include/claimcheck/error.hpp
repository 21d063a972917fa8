#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace claimcheck {

// Base of every exception thrown by the library. The CLI maps these to the
// "data error" exit code; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration, recipe, or argument combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A required column is missing from a tabular input.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::string column)
      : Error(what), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

// A malformed record. line() is 1-based and counts the header row.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateIdError : public Error {
 public:
  DuplicateIdError(const std::string& what, std::vector<std::string> ids)
      : Error(what), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

// Predictions do not cover every gold item.
class MissingPredictionError : public Error {
 public:
  MissingPredictionError(const std::string& what, std::vector<std::string> ids)
      : Error(what), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

class VersionError : public Error {
 public:
  VersionError(const std::string& what, unsigned found, unsigned supported)
      : Error(what), found_(found), supported_(supported) {}
  unsigned found() const noexcept { return found_; }
  unsigned supported() const noexcept { return supported_; }

 private:
  unsigned found_;
  unsigned supported_;
};

class ChecksumError : public Error {
 public:
  using Error::Error;
};

class TranslationError : public Error {
 public:
  TranslationError(const std::string& what, std::string post_id)
      : Error(what), post_id_(std::move(post_id)) {}
  const std::string& post_id() const noexcept { return post_id_; }

 private:
  std::string post_id_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace claimcheck
