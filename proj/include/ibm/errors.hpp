#pragma once

#include <stdexcept>
#include <string>

namespace ibm {

enum class ErrorKind {
    config,          // bad user input or precondition violation
    well_posedness,  // (alpha, E) at or near an impedance / Dirichlet eigenvalue
    exceptional,     // near-singular Fredholm solve at a complex momentum
    accuracy,        // quadrature / extrapolation did not reach its target
    domain,          // evaluation point outside the admissible set
    grid_mismatch,
    io,
    bad_magic,
    truncated,
    shape_mismatch,
    internal
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

// Process exit code for the command-line front end.
int exit_code(ErrorKind kind);

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, ErrorKind kind, const std::string& what)
{
    if (!ok) fail(kind, what);
}

}  // namespace ibm
