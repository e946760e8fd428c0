#pragma once

// Small in-memory corpora and prediction sets shared by the test binaries.

#include "epsim/corpus.hpp"
#include "epsim/simulator_types.hpp"

#include <string>
#include <vector>

namespace fixtures {

using namespace epsim;

inline Mep mep(const std::string& id, const std::string& name, Gender gender,
               const std::string& birth, const std::string& country,
               const std::string& party, GroupCode group,
               const std::string& birthplace = "Lyon") {
    Mep m;
    m.id = id;
    m.full_name = name;
    m.gender = gender;
    m.birth_date = Date::parse(birth);
    m.birthplace = birthplace;
    m.country = country;
    m.affiliations.push_back({party, group, Date::parse("2019-07-02"), std::nullopt});
    return m;
}

inline Speech speech(const std::string& proposal_id, int position,
                     const std::string& text,
                     std::optional<GroupCode> group = std::nullopt,
                     SpeechVariant variant = SpeechVariant::Real) {
    Speech s;
    s.proposal_id = proposal_id;
    s.speaker_name = "Speaker " + std::to_string(position);
    s.speaker_group = group;
    s.position_in_debate = position;
    s.text = text;
    s.variant = variant;
    return s;
}

inline Proposal proposal(const std::string& id, const std::string& title,
                         const std::string& date, int speech_count = 2) {
    Proposal p;
    p.id = id;
    p.title = title;
    p.vote_date = Date::parse(date);
    p.has_press_release = true;
    p.has_dedicated_debate = true;
    for (int i = 0; i < speech_count; ++i)
        p.speeches.push_back(
            speech(id, i, "Speech number " + std::to_string(i) + " on " + title + "."));
    return p;
}

// Two MEPs (one EPP, one S&D), two proposals, all four truth votes For.
inline Corpus tiny_corpus() {
    std::vector<Mep> meps = {
        mep("m1", "Anna Example", Gender::Female, "1970-05-01", "Austria",
            "Civic Alliance", GroupCode::Epp),
        mep("m2", "Ben Sample", Gender::Male, "1980-11-23", "Belgium",
            "Social Forum", GroupCode::SD),
    };
    std::vector<Proposal> proposals = {proposal("p1", "First Proposal", "2024-02-01"),
                                       proposal("p2", "Second Proposal", "2024-03-01")};
    std::vector<VoteRecord> votes;
    for (const auto& m : meps)
        for (const auto& p : proposals)
            votes.push_back({m.id, p.id, VotePosition::For});
    return make_corpus(std::move(meps), std::move(proposals), std::move(votes), true);
}

inline PredictionSet predictions_of(
    const std::vector<std::tuple<std::string, std::string, int, VotePosition>>& rows,
    int repeats = 1) {
    PredictionSet set;
    set.manifest = {{"repeats", repeats}};
    for (const auto& [mep_id, proposal_id, repeat, vote] : rows)
        set.predictions.push_back({mep_id, proposal_id, repeat, vote, std::nullopt, ""});
    canonicalize(set);
    return set;
}

}  // namespace fixtures
