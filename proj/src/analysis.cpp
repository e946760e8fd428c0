#include "epsim/analysis.hpp"

#include "epsim/errors.hpp"
#include "epsim/lexicons.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace epsim {

bool MepMatcher::mentions(AttributeKind kind, const std::string& text) const {
    const auto it = needles.find(kind);
    if (it == needles.end()) return false;
    for (const std::string& needle : it->second) {
        if (!needle.empty() && text.find(needle) != std::string::npos) return true;
    }
    return false;
}

MepMatcher build_matcher(const Mep& mep, Date vote_date) {
    MepMatcher m;
    m.needles[AttributeKind::Name] = {mep.full_name};
    m.needles[AttributeKind::Gender] = mep.gender == Gender::Male
                                           ? male_identity_words()
                                           : female_identity_words();
    m.needles[AttributeKind::Age] = {std::to_string(compute_age(mep.birth_date, vote_date))};
    m.needles[AttributeKind::Birthplace] = {mep.birthplace};

    const auto& countries = country_lexicon();
    const auto country = countries.find(mep.country);
    m.needles[AttributeKind::Country] =
        country != countries.end() ? country->second
                                   : std::vector<std::string>{mep.country};

    const Affiliation& affiliation = resolve_affiliation(mep, vote_date);
    m.needles[AttributeKind::Group] = group_alias_lexicon().at(affiliation.group);
    m.needles[AttributeKind::NationalParty] = {affiliation.national_party};
    return m;
}

namespace {

constexpr std::array<AttributeKind, 7> kScanKinds = {
    AttributeKind::Name,    AttributeKind::Gender,       AttributeKind::Age,
    AttributeKind::Birthplace, AttributeKind::Country,   AttributeKind::Group,
    AttributeKind::NationalParty};

std::vector<const Prediction*> reasoning_predictions(const PredictionSet& set) {
    std::vector<const Prediction*> out;
    for (const Prediction& p : set.predictions)
        if (p.reasoning) out.push_back(&p);
    if (out.empty())
        throw NoReasoningText("prediction set carries no reasoning chains");
    return out;
}

}  // namespace

MentionRow mention_rates(const PredictionSet& predictions, const Corpus& corpus,
                         const std::string& label) {
    const auto with_reasoning = reasoning_predictions(predictions);

    std::map<AttributeKind, std::size_t> hits;
    std::map<std::pair<std::string, std::string>, MepMatcher> matcher_cache;
    for (const Prediction* p : with_reasoning) {
        const auto key = std::pair(p->mep_id, p->proposal_id);
        auto it = matcher_cache.find(key);
        if (it == matcher_cache.end()) {
            const Mep& mep = corpus.mep(p->mep_id);
            const Proposal& proposal = corpus.proposal(p->proposal_id);
            it = matcher_cache.emplace(key, build_matcher(mep, proposal.vote_date)).first;
        }
        for (AttributeKind kind : kScanKinds)
            if (it->second.mentions(kind, *p->reasoning)) ++hits[kind];
    }

    MentionRow row;
    row.label = label;
    row.chains = with_reasoning.size();
    for (AttributeKind kind : kScanKinds)
        row.percent[kind] = 100.0 * static_cast<double>(hits[kind]) /
                            static_cast<double>(row.chains);
    return row;
}

GenderMentionTable gender_disaggregation(const PredictionSet& predictions,
                                         const Corpus& corpus) {
    const auto with_reasoning = reasoning_predictions(predictions);

    auto contains_any = [](const std::string& text,
                           const std::vector<std::string>& words) {
        return std::any_of(words.begin(), words.end(), [&](const std::string& w) {
            return text.find(w) != std::string::npos;
        });
    };

    std::size_t male_chains = 0, female_chains = 0;
    std::size_t mm = 0, mf = 0, ff = 0, fm = 0;
    for (const Prediction* p : with_reasoning) {
        const Mep& mep = corpus.mep(p->mep_id);
        const bool has_male = contains_any(*p->reasoning, male_identity_words());
        const bool has_female = contains_any(*p->reasoning, female_identity_words());
        if (mep.gender == Gender::Male) {
            ++male_chains;
            if (has_male) ++mm;
            if (has_female) ++mf;
        } else {
            ++female_chains;
            if (has_male) ++fm;
            if (has_female) ++ff;
        }
    }

    GenderMentionTable table;
    if (male_chains) {
        table.mm = 100.0 * static_cast<double>(mm) / static_cast<double>(male_chains);
        table.mf = 100.0 * static_cast<double>(mf) / static_cast<double>(male_chains);
    }
    if (female_chains) {
        table.ff = 100.0 * static_cast<double>(ff) / static_cast<double>(female_chains);
        table.fm = 100.0 * static_cast<double>(fm) / static_cast<double>(female_chains);
    }
    return table;
}

std::map<GroupCode, double> group_known_rate(const PredictionSet& predictions,
                                             const Corpus& corpus) {
    const auto persona = predictions.manifest.value("persona", nlohmann::json::object());
    const auto subset = persona.value("subset", nlohmann::json::array());
    const bool name_only = persona.value("kind", "") == "attributes" &&
                           subset.size() == 1 && subset.at(0) == "name";
    if (!name_only)
        throw WrongRunConfig("group_known_rate requires a name-only attribute run");

    const auto with_reasoning = reasoning_predictions(predictions);

    // An MEP counts for a group when at least one chain (any proposal, any
    // repeat) names the group the MEP belonged to on that proposal's date.
    std::map<GroupCode, std::set<std::string>> members;
    std::map<GroupCode, std::set<std::string>> mentioned;
    for (const Prediction* p : with_reasoning) {
        const Mep& mep = corpus.mep(p->mep_id);
        const Proposal& proposal = corpus.proposal(p->proposal_id);
        const GroupCode group = resolve_affiliation(mep, proposal.vote_date).group;
        members[group].insert(mep.id);
        const auto& aliases = group_alias_lexicon().at(group);
        for (const std::string& alias : aliases) {
            if (p->reasoning->find(alias) != std::string::npos) {
                mentioned[group].insert(mep.id);
                break;
            }
        }
    }

    std::map<GroupCode, double> rates;
    for (const auto& [group, ids] : members) {
        rates[group] = static_cast<double>(mentioned[group].size()) /
                       static_cast<double>(ids.size());
    }
    return rates;
}

}  // namespace epsim
