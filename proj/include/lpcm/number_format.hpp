#pragma once

#include <string>
#include <string_view>

namespace lpcm {

/// Shortest decimal text that parses back to exactly `v` ("inf", "-inf",
/// "nan" for non-finite values). Locale independent.
std::string format_number(double v);

/// Strict full-string decimal parse; returns false on trailing garbage.
bool parse_number(std::string_view text, double& out);

}  // namespace lpcm
