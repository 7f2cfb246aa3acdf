#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace regidx {

// Every failure carries a stable machine-readable name (e.g. "DuplicateCell",
// "DegenerateColumn") plus a human message. The CLI prints "<name>: <message>"
// on stderr and maps the name to an exit code.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void raise(std::string_view name, const std::string& message) {
    throw Error(std::string(name), message);
}

} // namespace regidx
