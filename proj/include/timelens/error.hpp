#pragma once

#include <stdexcept>
#include <string>

namespace timelens {

/// Contract or precondition violation, tagged with the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(module) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace timelens
