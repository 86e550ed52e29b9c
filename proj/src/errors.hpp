#pragma once

#include <stdexcept>
#include <string>

namespace searchlab {

// Error taxonomy shared by the whole engine. The C API maps each class to a
// status code, so keep the set small and stable.
enum class ErrorCode {
  InvalidArgument = 1,  // bad parameter or spec field
  IllegalAction = 2,    // action not legal in the given state
  NotTerminal = 3,      // terminal-only query on a non-terminal state
  WrongGame = 4,        // state does not belong to the game instance
  Config = 5,           // malformed or inconsistent configuration/JSON
  Io = 6,               // filesystem failure
  Undefined = 7,        // result undefined (e.g. correlation of total ties)
  BudgetTooSmall = 8,   // per-move budget below one evaluation per root move
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace searchlab
