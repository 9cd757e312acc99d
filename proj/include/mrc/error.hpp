#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mrc {

// Raised for any violated precondition on user-supplied parameters.
// `field()` names the offending input so the CLI can echo it back.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace mrc
