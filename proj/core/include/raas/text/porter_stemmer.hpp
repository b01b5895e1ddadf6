#pragma once

#include <string>
#include <string_view>

namespace raas::text {

/// The original Porter (1980) English suffix-stripping stemmer.
/// Expects a lowercase ASCII word; anything containing other characters is
/// returned unchanged, as are words of one or two letters.
std::string porter_stem(std::string_view word);

}  // namespace raas::text
