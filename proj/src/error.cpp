#include "painterly/error.hpp"

namespace painterly {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::EmptyPalette: return "EmptyPalette";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::MissingAsset: return "MissingAsset";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::MalformedControl: return "MalformedControl";
    case ErrorCode::BindError: return "BindError";
    }
    return "Unknown";
}

}  // namespace painterly
