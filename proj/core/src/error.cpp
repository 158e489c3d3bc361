#include "osc/error.hpp"

namespace osc {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return "config";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::SingularMatrix: return "singular-matrix";
        case ErrorKind::Kinetics: return "kinetics";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Domain: return 3;
        case ErrorKind::Dimension: return 3;
        case ErrorKind::SingularMatrix: return 4;
        case ErrorKind::Kinetics: return 5;
        case ErrorKind::Io: return 6;
    }
    return 1;
}

}  // namespace osc
