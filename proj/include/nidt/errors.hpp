// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace nidt {

// Domain failure carrying a stable code such as "NotARedex" or "TrackConflict".
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
  throw DomainError(code, detail);
}

}  // namespace nidt
