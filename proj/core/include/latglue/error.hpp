#pragma once

#include <stdexcept>
#include <string>

namespace latglue {

/// Failure stage, used by the CLI to pick an exit code.  parse: malformed
/// input; precondition: well-formed input outside an operation's domain;
/// search: a bounded search ran out of candidates; verify: a certificate
/// check failed; internal: a broken invariant (always a bug).
enum class Stage { parse, precondition, search, verify, internal };

class Error : public std::runtime_error {
public:
  Error(Stage stage, const std::string& msg) : std::runtime_error(msg), stage_(stage) {}
  Stage stage() const { return stage_; }

private:
  Stage stage_;
};

[[noreturn]] inline void parse_error(const std::string& msg) { throw Error(Stage::parse, msg); }
[[noreturn]] inline void precondition_error(const std::string& msg) {
  throw Error(Stage::precondition, msg);
}
[[noreturn]] inline void search_error(const std::string& msg) { throw Error(Stage::search, msg); }
[[noreturn]] inline void verify_error(const std::string& msg) { throw Error(Stage::verify, msg); }
[[noreturn]] inline void internal_error(const std::string& msg) {
  throw Error(Stage::internal, msg);
}

}  // namespace latglue
