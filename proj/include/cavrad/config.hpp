#pragma once

#include <string>
#include <string_view>

#include "cavrad/sweep.hpp"

namespace cavrad {

/// Parses the line-oriented `key = value` format with [system] and [sweep] sections.
///
/// A `preset` key (top level or in [sweep]) is applied first, then every other key
/// overrides it. Without a preset, sweep `axis` and `range` are required. `#` and `;`
/// start comments. A non-empty `preset_override` replaces the file's preset key.
/// Throws UnknownKey, OutOfRange, MissingRequired or ParseError.
[[nodiscard]] SweepConfig parse_config(std::string_view text, const std::string& preset_override = {});

/// Reads and parses a file. Throws IoFailure when it cannot be read.
[[nodiscard]] SweepConfig load_config(const std::string& path, const std::string& preset_override = {});

/// Accepts plain numbers, `pi`, `-pi` and `<number>*pi`. Throws ParseError.
[[nodiscard]] double parse_angle(std::string_view text);

}  // namespace cavrad
