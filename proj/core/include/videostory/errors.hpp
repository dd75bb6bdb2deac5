#ifndef VIDEOSTORY_ERRORS_HPP
#define VIDEOSTORY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace videostory {

// All library failures carry a stable kind name (e.g. "ShapeMismatch",
// "EmptyCorpus") so callers can branch without string-matching what().
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace videostory

#endif
