#pragma once

#include "painterly/session.hpp"

#include "json.hpp"

#include <filesystem>

namespace painterly {

/// Reads a JSON document mirroring SessionConfig. Relative paths resolve
/// against `baseDir`; unknown keys are rejected. Throws Error{BadConfig}.
SessionConfig session_config_from_json(const nlohmann::json& j, const std::filesystem::path& baseDir,
                                       SessionConfig defaults = {});

/// Throws Error{MissingFile | BadConfig}.
SessionConfig load_session_config(const std::filesystem::path& path);

/// Parses "host:port"; throws Error{BadConfig}.
std::pair<std::string, unsigned short> split_listen_address(const std::string& address);

/// Parses a decimal u64 seed; throws Error{BadConfig}.
std::uint64_t parse_seed(std::string_view text);

}  // namespace painterly
