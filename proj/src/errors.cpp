#include "ibm/errors.hpp"

namespace ibm {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::well_posedness: return "well_posedness";
    case ErrorKind::exceptional: return "exceptional";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::domain: return "domain";
    case ErrorKind::grid_mismatch: return "grid_mismatch";
    case ErrorKind::io: return "io";
    case ErrorKind::bad_magic: return "bad_magic";
    case ErrorKind::truncated: return "truncated";
    case ErrorKind::shape_mismatch: return "shape_mismatch";
    case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::config:
    case ErrorKind::domain:
    case ErrorKind::grid_mismatch: return 2;
    case ErrorKind::well_posedness:
    case ErrorKind::exceptional: return 3;
    case ErrorKind::accuracy:
    case ErrorKind::internal: return 4;
    case ErrorKind::io:
    case ErrorKind::bad_magic:
    case ErrorKind::truncated:
    case ErrorKind::shape_mismatch: return 5;
    }
    return 4;
}

void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

}  // namespace ibm
