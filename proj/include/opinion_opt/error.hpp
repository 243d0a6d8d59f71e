#ifndef OPINION_OPT_ERROR_HPP
#define OPINION_OPT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace opinion_opt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data: bad files, violated instance invariants, bad options.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

/// A broken internal guarantee. Seeing one of these is a bug.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace opinion_opt

#endif  // OPINION_OPT_ERROR_HPP
