#pragma once

#include "epsim/util.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace epsim {

// One recorded roll-call position. DidNotVote is kept in storage but is
// excluded from every prediction target and every metric.
enum class VotePosition { For, Against, Abstention, DidNotVote };

// The eight European-group codes of the 2024 parliament (seven groups plus
// the Non-Inscrits).
enum class GroupCode { GueNgl, SD, GreensEfa, Renew, Epp, Ecr, Id, Ni };

inline constexpr std::array<GroupCode, 8> kAllGroups = {
    GroupCode::GueNgl, GroupCode::SD, GroupCode::GreensEfa, GroupCode::Renew,
    GroupCode::Epp,    GroupCode::Ecr, GroupCode::Id,        GroupCode::Ni};

enum class Gender { Male, Female };

enum class SpeechVariant { Real, Counterfactual };

enum class Stance { InFavor, Against, Neutral };

std::string to_string(VotePosition p);
std::string to_string(GroupCode g);
std::string to_string(Gender g);
std::string to_string(SpeechVariant v);
std::string to_string(Stance s);

VotePosition parse_vote_position(std::string_view s);
GroupCode parse_group_code(std::string_view s);
Gender parse_gender(std::string_view s);
SpeechVariant parse_speech_variant(std::string_view s);
Stance parse_stance(std::string_view s);

// One national-party + European-group membership interval.
// Closed start, open end: the interval contains d iff start <= d and
// (no end or d < end). A switch date belongs to the new affiliation.
struct Affiliation {
    std::string national_party;
    GroupCode group = GroupCode::Ni;
    Date start_date;
    std::optional<Date> end_date;

    bool contains(Date d) const {
        return start_date <= d && (!end_date || d < *end_date);
    }

    bool operator==(const Affiliation&) const = default;
};

struct Mep {
    std::string id;
    std::string full_name;
    Gender gender = Gender::Male;
    Date birth_date;
    std::string birthplace;
    std::string country;
    std::vector<Affiliation> affiliations;  // sorted by start_date, non-overlapping
    std::optional<std::string> wikipedia_article;

    bool operator==(const Mep&) const = default;
};

struct Speech {
    std::string proposal_id;
    std::string speaker_name;
    std::optional<GroupCode> speaker_group;
    int position_in_debate = 0;
    std::string text;  // English
    SpeechVariant variant = SpeechVariant::Real;
    std::optional<Stance> stance_label;

    bool operator==(const Speech&) const = default;
};

struct Proposal {
    std::string id;
    std::string title;
    Date vote_date;
    std::set<std::string> committees;
    bool has_press_release = false;
    bool has_dedicated_debate = false;
    std::vector<Speech> speeches;  // sorted by (variant, position_in_debate)

    bool is_key_vote() const { return has_press_release && has_dedicated_debate; }
    std::vector<const Speech*> speeches_of(SpeechVariant v) const;

    bool operator==(const Proposal&) const = default;
};

struct VoteRecord {
    std::string mep_id;
    std::string proposal_id;
    VotePosition position = VotePosition::DidNotVote;

    bool operator==(const VoteRecord&) const = default;
};

struct CorpusPaths {
    std::filesystem::path votes;
    std::filesystem::path meps;
    std::filesystem::path proposals;
};

// Immutable after construction; safe for unrestricted concurrent reads.
class Corpus {
public:
    Corpus() = default;

    const std::map<std::string, Mep>& meps() const { return meps_; }
    const std::map<std::string, Proposal>& proposals() const { return proposals_; }
    const std::vector<VoteRecord>& votes() const { return votes_; }

    const Mep& mep(const std::string& id) const;
    const Proposal& proposal(const std::string& id) const;
    std::optional<VotePosition> vote_of(const std::string& mep_id,
                                        const std::string& proposal_id) const;

    bool operator==(const Corpus&) const = default;

private:
    friend Corpus make_corpus(std::vector<Mep>, std::vector<Proposal>,
                              std::vector<VoteRecord>, bool key_votes_only);

    std::map<std::string, Mep> meps_;
    std::map<std::string, Proposal> proposals_;
    std::vector<VoteRecord> votes_;  // canonical order: (mep_id, proposal_id)
    std::map<std::pair<std::string, std::string>, VotePosition> vote_index_;
};

// Validates and assembles a corpus from parts. With key_votes_only set,
// proposals without both a press release and a dedicated debate are dropped
// together with their votes. Throws SchemaError / IntegrityError.
Corpus make_corpus(std::vector<Mep> meps, std::vector<Proposal> proposals,
                   std::vector<VoteRecord> votes, bool key_votes_only);

Corpus load_corpus(const CorpusPaths& paths, bool key_votes_only);

// Snapshot writer. load_corpus(save_corpus(c)) == c.
void save_corpus(const Corpus& corpus, const CorpusPaths& paths);

// Writes just a proposals file (e.g. a speech set augmented with
// counterfactual variants).
void save_proposals_file(const std::vector<Proposal>& proposals,
                         const std::filesystem::path& path);

// Hash of the canonical serialization; goes into run manifests.
std::string corpus_content_hash(const Corpus& corpus);

// Unique affiliation interval containing `date`. Throws NoAffiliation.
const Affiliation& resolve_affiliation(const Mep& mep, Date date);

// Completed years between birth_date and reference_date. Throws InvalidDates.
int compute_age(Date birth_date, Date reference_date);

// Fractions over {For, Against, Abstention}; DidNotVote excluded.
// Throws EmptyCorpus when there is nothing to count.
std::map<VotePosition, double> vote_distribution(const Corpus& corpus);

}  // namespace epsim
