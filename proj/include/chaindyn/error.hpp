#pragma once

#include <stdexcept>
#include <string>

namespace chaindyn {

enum class ErrorKind {
  InvalidArgument,
  MetricViolation,
  Resource,
  UnsupportedMap,
  NotTransitive,
  Config,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

// Budgets shared by every builder that can blow up combinatorially.
struct Budget {
  std::size_t max_points = std::size_t{1} << 20;
  std::size_t max_generators = 4096;
  std::size_t max_words = 4096;
};

}  // namespace chaindyn
