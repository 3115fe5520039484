#ifndef LEVYEDGE_ERRORS_HPP
#define LEVYEDGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace levyedge {

// Base class for all library failures that are not plain argument misuse.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature failed to reach its tolerance.
class quadrature_error : public error {
public:
    explicit quadrature_error(const std::string& what) : error(what) {}
};

// A moment integral of the jump measure diverges.
class moment_error : public error {
public:
    explicit moment_error(const std::string& what) : error(what) {}
};

// Exact series requested on a model whose tail conditions are not certified.
class condition_gate_error : public error {
public:
    explicit condition_gate_error(const std::string& what) : error(what) {}
};

// Malformed model file or configuration.
class config_error : public error {
public:
    explicit config_error(const std::string& what) : error(what) {}
};

} // namespace levyedge

#endif
