#pragma once

#include "epsim/backend.hpp"
#include "epsim/corpus.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace epsim {

// Entity lists redacted from speeches before they reach the model.
// Substitution is plain substring matching, longest match first, case
// sensitive as listed.
struct AnonymizationLexicon {
    std::set<std::string> politician_names;
    std::set<std::string> group_aliases;
    std::set<std::string> party_names;

    static constexpr const char* kNamePlaceholder = "[NAME]";
    static constexpr const char* kGroupPlaceholder = "[GROUP]";
    static constexpr const char* kPartyPlaceholder = "[PARTY]";

    // Group aliases prefilled with the shared group alias lexicon.
    static AnonymizationLexicon with_default_groups();

    static AnonymizationLexicon load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;
};

// Replaces every lexicon occurrence with its placeholder. Overlaps resolve
// longest-first; the output contains no residual lexicon entry.
std::string anonymize(const std::string& text, const AnonymizationLexicon& lexicon);

// True if any lexicon entry still occurs in `text` (test/QA helper).
bool contains_lexicon_entry(const std::string& text,
                            const AnonymizationLexicon& lexicon);

// Permutation of the speeches that is a pure function of
// (seed, proposal_id): stable across runs, repeats, and platforms.
// All speeches must share one (proposal, variant).
std::vector<Speech> order_speeches(const std::vector<Speech>& speeches,
                                   std::uint64_t seed);

struct StancePrompts {
    std::string instruction;  // contains [Title]
    std::string format;
};

struct CounterfactualPrompts {
    std::string instruction;  // contains [Title]
    std::string format;
};

// Classifies one speech via the backend. Result values are cached by the
// client; throws FormatViolation after retry exhaustion.
Stance classify_stance(const Speech& speech, const std::string& proposal_title,
                       ChatClient& client, const StancePrompts& prompts);

// Parses the constrained stance answer; returns nothing when the text does
// not commit to exactly one stance.
std::optional<Stance> parse_stance_response(const std::string& raw);

struct CounterfactualResult {
    Speech speech;                 // variant = Counterfactual, same position
    Stance declared_original;      // stance the model saw in the source speech
};

// Generates the opposite-stance speech for a real speech.
CounterfactualResult generate_counterfactual(const Speech& speech,
                                             const std::string& proposal_title,
                                             ChatClient& client,
                                             const CounterfactualPrompts& prompts);

}  // namespace epsim
