#ifndef WEIL_ERROR_HPP
#define WEIL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace weil {

// Domain error with a stable machine-readable code ("NotPrime", "NonMaximalOrder", ...).
// The CLI maps these to exit code 1 and puts the code verbatim into the report.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace weil

#endif
