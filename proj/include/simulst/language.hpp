#pragma once

#include <string>
#include <string_view>

#include "simulst/errors.hpp"

namespace simulst {

enum class LanguagePair { EnDe, EnZh };

inline const char* to_string(LanguagePair lp) {
  return lp == LanguagePair::EnDe ? "en-de" : "en-zh";
}

inline LanguagePair language_pair_from_string(std::string_view s) {
  if (s == "en-de") return LanguagePair::EnDe;
  if (s == "en-zh") return LanguagePair::EnZh;
  throw ConfigError("unknown language pair '" + std::string(s) + "' (expected en-de or en-zh)");
}

inline const char* source_language_name(LanguagePair) { return "English"; }

inline const char* target_language_name(LanguagePair lp) {
  return lp == LanguagePair::EnDe ? "German" : "Chinese";
}

}  // namespace simulst
