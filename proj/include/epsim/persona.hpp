#pragma once

#include "epsim/backend.hpp"
#include "epsim/corpus.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace epsim {

enum class AttributeKind { Name, Gender, Age, Birthplace, Country, Group, NationalParty };

using AttributeSet = std::set<AttributeKind>;

std::string to_string(AttributeKind kind);
AttributeKind parse_attribute_kind(std::string_view s);

AttributeSet all_attributes();

struct PersonaMode {
    enum class Kind { Attributes, WikipediaSummary };
    Kind kind = Kind::Attributes;
    AttributeSet subset = all_attributes();  // meaningful for Attributes only

    bool operator==(const PersonaMode&) const = default;
};

// Wording of the attribute persona. The header always carries the name; each
// other attribute renders as exactly one line, so ablations differ from the
// full persona only by the removed lines.
struct PersonaTemplate {
    std::string header = "You are {name}, a Member of the European Parliament.";
    std::string gender_line = "Gender: {gender}";
    std::string age_line = "Age: {age} years";
    std::string birthplace_line = "Birthplace: {birthplace}";
    std::string country_line = "Country: {country}";
    std::string party_line = "National party: {party}";
    std::string group_line = "European group: {group}";

    std::string content_hash() const;
};

struct PersonaSpec {
    PersonaMode mode;
    std::string rendered;
};

// Deterministic render of the requested attributes in fixed order
// (name, gender, age, birthplace, country, national party, group).
// Requires Name in the subset; age and affiliation are taken at vote_date.
PersonaSpec render_attribute_persona(const Mep& mep, Date vote_date,
                                     const AttributeSet& subset,
                                     const PersonaTemplate& tmpl = {});

// Content-addressed persona store (used to persist Wikipedia summaries so
// simulation runs never depend on summarizer availability).
class PersonaCache {
public:
    explicit PersonaCache(std::filesystem::path dir);

    std::optional<std::string> get(const std::string& key) const;
    void put(const std::string& key, const std::string& mep_id,
             const std::string& mode, const std::string& rendered) const;

    static std::string summary_key(const std::string& article,
                                   const std::string& summarizer_prompt);

private:
    std::filesystem::path dir_;
};

// Summarizes a Wikipedia article via the backend; cached by content hash of
// (article, summarizer prompt). Throws EmptyArticle / BackendError.
std::string summarize_wikipedia(const std::string& article, ChatClient& client,
                                const std::string& summarizer_prompt,
                                const PersonaCache* cache = nullptr,
                                const std::string& mep_id = "");

}  // namespace epsim
