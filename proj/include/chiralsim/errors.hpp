#pragma once

#include <stdexcept>
#include <string>

namespace chiralsim {

// Argument outside the mathematical domain of an operation (r <= a, x <= 0 for K_p, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Fiber eigenvalue equation has no guided root in (n2 k0, n1 k0).
class NoRootError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Atom positions violate the gap between the two waveguides.
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Norm growth in a passive system after the drive has switched off.
class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key_path, int line, const std::string& what)
        : std::runtime_error(format(key_path, line, what)), key_path_(std::move(key_path)), line_(line) {}

    const std::string& key_path() const noexcept { return key_path_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& key, int line, const std::string& what) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!key.empty()) out += "'" + key + "': ";
        return out + what;
    }

    std::string key_path_;
    int line_ = 0;
};

} // namespace chiralsim
