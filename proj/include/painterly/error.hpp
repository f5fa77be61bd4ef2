#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace painterly {

enum class ErrorCode {
    MissingFile,
    BadMagic,
    TruncatedFile,
    BadHeader,
    ValueOutOfRange,
    EmptyPalette,
    SchemaError,
    ValidationError,
    MissingAsset,
    IoError,
    BadConfig,
    MalformedControl,
    BindError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace painterly
