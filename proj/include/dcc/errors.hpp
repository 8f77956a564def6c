#ifndef DCC_ERRORS_HPP
#define DCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dcc {

// Broad failure categories, used by the CLI to map errors to exit codes.
enum class ErrorKind {
  InvalidInput,   // malformed data, bad arguments, precondition violations
  Numeric,        // degenerate variance, particle collapse, non-convergence
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_input(const std::string& what) {
  return Error(ErrorKind::InvalidInput, what);
}
inline Error numeric_error(const std::string& what) {
  return Error(ErrorKind::Numeric, what);
}

}  // namespace dcc

#endif  // DCC_ERRORS_HPP
