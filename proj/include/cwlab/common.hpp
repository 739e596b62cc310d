#pragma once

#include <stdexcept>
#include <string>

namespace cwlab {

// kind is one of: parse, invalid, invalid-subset, invalid-flip, too-large,
// type, sort, decode, invalid-constraint, invalid-ideal,
// invalid-linearisation, not-a-minor, coverage, undefined, not-oriented,
// construction, compositionality, internal
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Search caps. Defaults can be raised through CWLAB_CAPS="name=value,...".
int cap(const std::string& name, int fallback);

}  // namespace cwlab
