#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace symcool {

// Bad or inconsistent input.  The CLI maps this to exit status 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The numerics broke down (integrator blew up, root not bracketed, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Collects soft warnings from functions whose preconditions are only
// approximately required.  Passing nullptr discards them.
struct Warnings {
    std::vector<std::string> messages;
    void add(std::string msg) { messages.push_back(std::move(msg)); }
};

inline void warn(Warnings *w, std::string msg)
{
    if (w)
        w->add(std::move(msg));
}

}
