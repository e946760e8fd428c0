#pragma once

#include "epsim/corpus.hpp"
#include "epsim/debate.hpp"

#include <filesystem>

namespace epsim {

// Deterministic synthetic release of the 2024 European Parliament roll-call
// corpus: 710 MEPs in 8 groups and their national parties, 47 key proposals
// (plus two non-key proposals that the key-vote filter drops), and exactly
// 27,770 FOR/AGAINST/ABSTENTION decisions whose class balance and
// party/group cohesion profile match the published dataset-level statistics.
// Everything is a pure function of the seed.

inline constexpr std::uint64_t kDefaultSampleSeed = 20240116;

struct SampleParts {
    std::vector<Mep> meps;
    std::vector<Proposal> proposals;
    std::vector<VoteRecord> votes;
    AnonymizationLexicon lexicon;
};

SampleParts make_sample_parts(std::uint64_t seed = kDefaultSampleSeed);

Corpus make_sample_corpus(std::uint64_t seed = kDefaultSampleSeed,
                          bool key_votes_only = true);

// Writes votes.csv, meps.json, proposals.json, lexicon.json, and a sample
// annotations.csv into `dir`.
void write_sample_dataset(const std::filesystem::path& dir,
                          std::uint64_t seed = kDefaultSampleSeed);

const char* group_long_name(GroupCode group);

}  // namespace epsim
