#pragma once

#include "epsim/corpus.hpp"

#include <map>
#include <string>
#include <vector>

namespace epsim {

// Shared matching lexicons. Matching against these lists is plain,
// case-sensitive substring containment; the lists therefore carry the
// casing/inflection variants explicitly.

// Alias substrings per European group (used both for anonymization and for
// detecting group mentions in reasoning chains).
const std::map<GroupCode, std::vector<std::string>>& group_alias_lexicon();

// Flat union of all group aliases.
const std::vector<std::string>& all_group_aliases();

// Word variants per country (country name plus demonyms).
const std::map<std::string, std::vector<std::string>>& country_lexicon();

// Gender identity words.
const std::vector<std::string>& male_identity_words();
const std::vector<std::string>& female_identity_words();

}  // namespace epsim
