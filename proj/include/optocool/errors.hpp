#pragma once

#include <stdexcept>
#include <string>

namespace optocool {

/// Argument outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Integration, root-finding or fitting failure. Carries the module that failed.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Rejected configuration. line/column are 1-based, 0 when not tied to a file position.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key = {}, int line = 0, int column = 0)
        : std::runtime_error(what), key_(std::move(key)), line_(line), column_(column) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string key_;
    int line_;
    int column_;
};

}  // namespace optocool
