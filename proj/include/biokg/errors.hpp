#pragma once

#include <stdexcept>
#include <string>

namespace biokg {

// Error categories map to process exit codes at the CLI boundary:
// data errors -> 2, upstream/LLM errors -> 3.
enum class ErrorKind {
    FileNotFound,
    Io,
    VersionMismatch,
    CorruptSnapshot,
    UnknownCui,
    DanglingEdge,
    DimensionMismatch,
    UnsanitizableLabel,
    ParseError,
    UnknownLabel,
    DatasetMismatch,
    ConfigError,
    Timeout,
    HttpStatus,
    MalformedResponse,
    EndpointFailure,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    // true for errors caused by the remote LLM endpoint rather than local data
    bool upstream() const {
        switch (kind_) {
            case ErrorKind::Timeout:
            case ErrorKind::HttpStatus:
            case ErrorKind::MalformedResponse:
            case ErrorKind::EndpointFailure:
                return true;
            default:
                return false;
        }
    }

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

} // namespace biokg
