#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace osc {

/// Failure categories surfaced by the library. The CLI maps each one to a
/// distinct process exit code.
enum class ErrorKind {
    Config,          ///< invalid configuration or parameter range
    Domain,          ///< evaluation point outside the partition
    Dimension,       ///< vector / matrix size mismatch
    SingularMatrix,  ///< zero pivot during ABD factorization
    Kinetics,        ///< reaction term undefined at a state
    Io,              ///< file system or output failure
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code associated with an error category (never 0).
[[nodiscard]] int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by the ABD factorization when a pivot falls below the threshold.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t row, const std::string& message)
        : Error(ErrorKind::SingularMatrix, message), row_(row) {}

    /// Global row index of the failing pivot.
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace osc
