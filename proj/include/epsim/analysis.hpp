#pragma once

#include "epsim/corpus.hpp"
#include "epsim/persona.hpp"
#include "epsim/simulator_types.hpp"

#include <map>
#include <string>
#include <vector>

namespace epsim {

// Literal substrings searched for one MEP's own attribute values at a given
// vote date. Matching is plain case-sensitive substring containment.
struct MepMatcher {
    std::map<AttributeKind, std::vector<std::string>> needles;

    bool mentions(AttributeKind kind, const std::string& text) const;
};

MepMatcher build_matcher(const Mep& mep, Date vote_date);

// One row of the mention table: percentage of reasoning chains containing at
// least one hit per attribute kind.
struct MentionRow {
    std::string label;  // persona configuration label
    std::map<AttributeKind, double> percent;
    std::size_t chains = 0;
};

// Requires predictions with reasoning text (throws NoReasoningText).
MentionRow mention_rates(const PredictionSet& predictions, const Corpus& corpus,
                         const std::string& label);

// Percentages of reasoning chains by persona gender x containing an identity
// word of gender y; xy in {mm, fm, ff, mf}.
struct GenderMentionTable {
    double mm = 0.0, fm = 0.0, ff = 0.0, mf = 0.0;
};

GenderMentionTable gender_disaggregation(const PredictionSet& predictions,
                                         const Corpus& corpus);

// For a name-only run: per group, the fraction of its MEPs with at least one
// reasoning chain naming their (correct) group. Throws WrongRunConfig unless
// the run used the {name} persona subset.
std::map<GroupCode, double> group_known_rate(const PredictionSet& predictions,
                                             const Corpus& corpus);

}  // namespace epsim
