#pragma once

// Error types shared by all modules.  Every failure mode that callers are
// expected to handle carries a short stable code string (e.g. "not-normal",
// "space-too-large") so that tools can map errors to exit codes without
// parsing prose.

#include <stdexcept>
#include <string>
#include <utility>

namespace loopcount {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Resource-cap failures (too big to enumerate, q out of supported range).
// Tools map these to a distinct exit code.
class ResourceError : public Error {
public:
    using Error::Error;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
    throw Error(code, msg);
}

[[noreturn]] inline void fail_resource(const std::string& code, const std::string& msg) {
    throw ResourceError(code, msg);
}

inline void require(bool cond, const std::string& code, const std::string& msg) {
    if (!cond) fail(code, msg);
}

}  // namespace loopcount
