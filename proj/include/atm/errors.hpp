#pragma once

#include <stdexcept>
#include <string>

namespace atm {

enum class Errc {
  validation,    // malformed model or inconsistent inputs
  cap_exceeded,  // enumeration size limit hit
  domain,        // operator/domain misuse (flags, wrong value kind, range)
  usage,         // bad command / option combination
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace atm
