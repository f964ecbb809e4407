#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stylo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (CoNLL-U, CSV, JSON, catalog records).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based line number of the offending input line, 0 when not line-oriented.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TooShortError : public Error {
 public:
  TooShortError(std::size_t actual, std::size_t required)
      : Error("document too short: " + std::to_string(actual) + " words, need " +
              std::to_string(required)),
        actual_(actual),
        required_(required) {}

  std::size_t word_count() const noexcept { return actual_; }
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t actual_;
  std::size_t required_;
};

class EmptyDocumentError : public Error {
 public:
  explicit EmptyDocumentError(const std::string& doc_id)
      : Error("empty document: " + (doc_id.empty() ? std::string("<unnamed>") : doc_id)) {}
};

class ZeroVarianceError : public Error {
 public:
  ZeroVarianceError() : Error("paired differences have zero variance") {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(std::vector<std::string> mismatches)
      : Error(build_message(mismatches)), mismatches_(std::move(mismatches)) {}

  const std::vector<std::string>& mismatches() const noexcept { return mismatches_; }

 private:
  static std::string build_message(const std::vector<std::string>& ids) {
    std::string msg = "matrices are not aligned by parent doc_id; mismatched:";
    for (const auto& id : ids) msg += " " + id;
    return msg;
  }
  std::vector<std::string> mismatches_;
};

/// Invalid arguments to a model-level operation (labels, columns, parameters).
class ModelError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(std::size_t sweeps, double last_delta)
      : Error("lasso did not converge after " + std::to_string(sweeps) +
              " sweeps; last coefficient change " + std::to_string(last_delta)),
        last_delta_(last_delta) {}

  double last_delta() const noexcept { return last_delta_; }

 private:
  double last_delta_;
};

/// Failure talking to a chat-completions endpoint.
class ApiError : public Error {
 public:
  ApiError(const std::string& what, int status = 0, int attempts = 0)
      : Error(what), status_(status), attempts_(attempts) {}

  /// Last HTTP status, 0 for transport failures (including timeouts).
  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  int attempts_;
};

}  // namespace stylo
