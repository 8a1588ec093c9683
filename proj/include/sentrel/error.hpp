#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sentrel {

// Process exit codes used by the command line tool.
enum class ExitCode : int { ok = 0, usage = 1, load = 2, manifest = 3, gold_conflict = 4 };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const { return ExitCode::usage; }
};

// Malformed input file. Carries the file and 1-based line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  ExitCode exit_code() const override { return ExitCode::load; }

 private:
  std::string file_;
  std::size_t line_;
};

// Input parsed but violates a structural invariant (spans, overlaps, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::load; }
};

// File missing or unreadable.
class IoError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::load; }
};

// Contradictory gold labels or duplicated synonym names.
class ConflictError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::gold_conflict; }
};

// Feature layout of a model or vector set differs from the current one.
class ManifestError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::manifest; }
};

}  // namespace sentrel
