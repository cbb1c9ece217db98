#ifndef REFSPECT_ERROR_H_
#define REFSPECT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace refspect {

// Base of every error the engine throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable input or unwritable destination.
class IoError : public Error {
 public:
  using Error::Error;
};

// A well-formed request that the current state cannot satisfy: unknown
// cluster id, invalid partition, overlapping era rules, inverted ranges.
class RejectionError : public Error {
 public:
  using Error::Error;
};

class UnknownClusterError : public RejectionError {
 public:
  explicit UnknownClusterError(const std::string& id)
      : RejectionError("unknown cluster id '" + id + "'") {}
};

// Corpus fingerprint in a session document does not match the corpus.
class IntegrityError : public Error {
 public:
  IntegrityError(std::string expected, std::string actual)
      : Error("corpus fingerprint mismatch: session has " + expected +
              ", corpus has " + actual),
        expected_(std::move(expected)),
        actual_(std::move(actual)) {}

  const std::string& expected() const { return expected_; }
  const std::string& actual() const { return actual_; }

 private:
  std::string expected_;
  std::string actual_;
};

// Malformed structured document (session file, ledger line). `location`
// is "line N" or a JSON path such as "filters.cutoff_year".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ParseError(what, "line " + std::to_string(line)) {}
  ParseError(const std::string& what, std::string location)
      : Error(location + ": " + what), location_(std::move(location)) {}

  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

}  // namespace refspect

#endif  // REFSPECT_ERROR_H_
