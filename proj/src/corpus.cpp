#include "epsim/corpus.hpp"

#include "epsim/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>
#include <tuple>

namespace epsim {

using nlohmann::json;

namespace {

constexpr const char* kVotesSchema = "epsim-votes-v1";
constexpr const char* kMepsSchema = "epsim-meps-v1";
constexpr const char* kProposalsSchema = "epsim-proposals-v1";

}  // namespace

std::string to_string(VotePosition p) {
    switch (p) {
        case VotePosition::For: return "FOR";
        case VotePosition::Against: return "AGAINST";
        case VotePosition::Abstention: return "ABSTENTION";
        case VotePosition::DidNotVote: return "DID_NOT_VOTE";
    }
    return "?";
}

std::string to_string(GroupCode g) {
    switch (g) {
        case GroupCode::GueNgl: return "GUE/NGL";
        case GroupCode::SD: return "S&D";
        case GroupCode::GreensEfa: return "Greens/EFA";
        case GroupCode::Renew: return "Renew";
        case GroupCode::Epp: return "EPP";
        case GroupCode::Ecr: return "ECR";
        case GroupCode::Id: return "ID";
        case GroupCode::Ni: return "NI";
    }
    return "?";
}

std::string to_string(Gender g) {
    return g == Gender::Male ? "male" : "female";
}

std::string to_string(SpeechVariant v) {
    return v == SpeechVariant::Real ? "real" : "counterfactual";
}

std::string to_string(Stance s) {
    switch (s) {
        case Stance::InFavor: return "in_favor";
        case Stance::Against: return "against";
        case Stance::Neutral: return "neutral";
    }
    return "?";
}

VotePosition parse_vote_position(std::string_view s) {
    if (s == "FOR") return VotePosition::For;
    if (s == "AGAINST") return VotePosition::Against;
    if (s == "ABSTENTION") return VotePosition::Abstention;
    if (s == "DID_NOT_VOTE") return VotePosition::DidNotVote;
    throw SchemaError("unknown vote position: '" + std::string(s) + "'");
}

GroupCode parse_group_code(std::string_view s) {
    for (GroupCode g : kAllGroups) {
        if (s == to_string(g)) return g;
    }
    throw SchemaError("unknown group code: '" + std::string(s) + "'");
}

Gender parse_gender(std::string_view s) {
    if (s == "male") return Gender::Male;
    if (s == "female") return Gender::Female;
    throw SchemaError("unknown gender: '" + std::string(s) +
                      "' (expected 'male' or 'female')");
}

SpeechVariant parse_speech_variant(std::string_view s) {
    if (s == "real") return SpeechVariant::Real;
    if (s == "counterfactual") return SpeechVariant::Counterfactual;
    throw SchemaError("unknown speech variant: '" + std::string(s) + "'");
}

Stance parse_stance(std::string_view s) {
    if (s == "in_favor") return Stance::InFavor;
    if (s == "against") return Stance::Against;
    if (s == "neutral") return Stance::Neutral;
    throw SchemaError("unknown stance: '" + std::string(s) + "'");
}

std::vector<const Speech*> Proposal::speeches_of(SpeechVariant v) const {
    std::vector<const Speech*> out;
    for (const Speech& s : speeches) {
        if (s.variant == v) out.push_back(&s);
    }
    return out;
}

const Mep& Corpus::mep(const std::string& id) const {
    auto it = meps_.find(id);
    if (it == meps_.end()) throw IntegrityError("unknown mep_id: '" + id + "'");
    return it->second;
}

const Proposal& Corpus::proposal(const std::string& id) const {
    auto it = proposals_.find(id);
    if (it == proposals_.end())
        throw IntegrityError("unknown proposal_id: '" + id + "'");
    return it->second;
}

std::optional<VotePosition> Corpus::vote_of(const std::string& mep_id,
                                            const std::string& proposal_id) const {
    auto it = vote_index_.find({mep_id, proposal_id});
    if (it == vote_index_.end()) return std::nullopt;
    return it->second;
}

const Affiliation& resolve_affiliation(const Mep& mep, Date date) {
    for (const Affiliation& a : mep.affiliations) {
        if (a.contains(date)) return a;
    }
    throw NoAffiliation("mep '" + mep.id + "' has no affiliation covering " +
                        date.to_string());
}

int compute_age(Date birth_date, Date reference_date) {
    if (reference_date < birth_date)
        throw InvalidDates("reference date " + reference_date.to_string() +
                           " precedes birth date " + birth_date.to_string());
    int age = reference_date.year - birth_date.year;
    if (std::pair(reference_date.month, reference_date.day) <
        std::pair(birth_date.month, birth_date.day))
        --age;
    return age;
}

std::map<VotePosition, double> vote_distribution(const Corpus& corpus) {
    std::size_t n_for = 0, n_against = 0, n_abst = 0;
    for (const VoteRecord& v : corpus.votes()) {
        switch (v.position) {
            case VotePosition::For: ++n_for; break;
            case VotePosition::Against: ++n_against; break;
            case VotePosition::Abstention: ++n_abst; break;
            case VotePosition::DidNotVote: break;
        }
    }
    const std::size_t total = n_for + n_against + n_abst;
    if (total == 0) throw EmptyCorpus("no FOR/AGAINST/ABSTENTION votes in corpus");
    const double t = static_cast<double>(total);
    return {{VotePosition::For, static_cast<double>(n_for) / t},
            {VotePosition::Against, static_cast<double>(n_against) / t},
            {VotePosition::Abstention, static_cast<double>(n_abst) / t}};
}

// ---------------------------------------------------------------------------
// Validation & assembly

Corpus make_corpus(std::vector<Mep> meps, std::vector<Proposal> proposals,
                   std::vector<VoteRecord> votes, bool key_votes_only) {
    Corpus corpus;

    for (Mep& m : meps) {
        if (m.id.empty()) throw SchemaError("mep with empty id");
        if (m.affiliations.empty())
            throw IntegrityError("mep '" + m.id + "' has no affiliations");
        std::stable_sort(m.affiliations.begin(), m.affiliations.end(),
                         [](const Affiliation& a, const Affiliation& b) {
                             return a.start_date < b.start_date;
                         });
        for (std::size_t i = 0; i < m.affiliations.size(); ++i) {
            const Affiliation& a = m.affiliations[i];
            if (a.end_date && *a.end_date < a.start_date)
                throw IntegrityError("mep '" + m.id +
                                     "': affiliation ends before it starts");
            if (i + 1 < m.affiliations.size()) {
                const Affiliation& b = m.affiliations[i + 1];
                if (!a.end_date || b.start_date < *a.end_date)
                    throw IntegrityError("mep '" + m.id +
                                         "': overlapping affiliations at " +
                                         b.start_date.to_string());
            }
        }
        std::string id = m.id;
        if (!corpus.meps_.emplace(id, std::move(m)).second)
            throw IntegrityError("duplicate mep_id: '" + id + "'");
    }

    std::set<std::string> dropped_proposals;
    for (Proposal& p : proposals) {
        if (p.id.empty()) throw SchemaError("proposal with empty id");
        if (key_votes_only && !p.is_key_vote()) {
            dropped_proposals.insert(p.id);
            continue;
        }
        std::stable_sort(p.speeches.begin(), p.speeches.end(),
                         [](const Speech& a, const Speech& b) {
                             return std::pair(a.variant, a.position_in_debate) <
                                    std::pair(b.variant, b.position_in_debate);
                         });
        for (std::size_t i = 0; i + 1 < p.speeches.size(); ++i) {
            const Speech& a = p.speeches[i];
            const Speech& b = p.speeches[i + 1];
            if (a.variant == b.variant &&
                a.position_in_debate == b.position_in_debate)
                throw IntegrityError("proposal '" + p.id +
                                     "': duplicate position_in_debate " +
                                     std::to_string(a.position_in_debate));
        }
        for (Speech& s : p.speeches) {
            if (s.position_in_debate < 0)
                throw SchemaError("proposal '" + p.id +
                                  "': negative position_in_debate");
            s.proposal_id = p.id;
        }
        std::string id = p.id;
        if (!corpus.proposals_.emplace(id, std::move(p)).second)
            throw IntegrityError("duplicate proposal_id: '" + id + "'");
    }

    for (VoteRecord& v : votes) {
        if (corpus.proposals_.find(v.proposal_id) == corpus.proposals_.end()) {
            if (dropped_proposals.count(v.proposal_id)) continue;
            throw IntegrityError("vote references unknown proposal_id: '" +
                                 v.proposal_id + "'");
        }
        auto mep_it = corpus.meps_.find(v.mep_id);
        if (mep_it == corpus.meps_.end())
            throw IntegrityError("vote references unknown mep_id: '" + v.mep_id +
                                 "'");
        const Date when = corpus.proposals_.at(v.proposal_id).vote_date;
        bool covered = false;
        for (const Affiliation& a : mep_it->second.affiliations) {
            if (a.contains(when)) {
                covered = true;
                break;
            }
        }
        if (!covered)
            throw IntegrityError("mep '" + v.mep_id +
                                 "' has an affiliation gap on " + when.to_string());
        corpus.votes_.push_back(std::move(v));
    }

    std::sort(corpus.votes_.begin(), corpus.votes_.end(),
              [](const VoteRecord& a, const VoteRecord& b) {
                  return std::tie(a.mep_id, a.proposal_id) <
                         std::tie(b.mep_id, b.proposal_id);
              });
    for (const VoteRecord& v : corpus.votes_) {
        if (!corpus.vote_index_.emplace(std::pair(v.mep_id, v.proposal_id), v.position)
                 .second)
            throw IntegrityError("duplicate vote for (" + v.mep_id + ", " +
                                 v.proposal_id + ")");
    }

    return corpus;
}

// ---------------------------------------------------------------------------
// File formats

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::vector<VoteRecord> load_votes_file(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t lineno = 0;
    auto where = [&] { return path.string() + ":" + std::to_string(lineno); };

    if (!std::getline(in, line))
        throw SchemaError(path.string() + ": empty votes file");
    ++lineno;
    if (line.rfind("# ", 0) != 0 || trim(line.substr(2)) != kVotesSchema)
        throw SchemaError(where() + ": expected schema line '# " +
                          std::string(kVotesSchema) + "'");

    if (!std::getline(in, line))
        throw SchemaError(path.string() + ": missing header row");
    ++lineno;
    if (trim(line) != "mep_id,proposal_id,position")
        throw SchemaError(where() +
                          ": expected header 'mep_id,proposal_id,position'");

    std::vector<VoteRecord> votes;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw SchemaError(where() + ": expected 3 fields, got " +
                              std::to_string(fields.size()));
        VoteRecord v;
        v.mep_id = trim(fields[0]);
        v.proposal_id = trim(fields[1]);
        try {
            v.position = parse_vote_position(trim(fields[2]));
        } catch (const SchemaError& e) {
            throw SchemaError(where() + ": " + e.what());
        }
        if (v.mep_id.empty() || v.proposal_id.empty())
            throw SchemaError(where() + ": empty id field");
        votes.push_back(std::move(v));
    }
    return votes;
}

void check_schema(const json& j, const char* want, const std::filesystem::path& path) {
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != want)
        throw SchemaError(path.string() + ": expected schema '" + want + "'");
}

Date date_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw SchemaError(where + ": missing date field '" + key + "'");
    return Date::parse(j.at(key).get<std::string>());
}

std::string string_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw SchemaError(where + ": missing string field '" + key + "'");
    return j.at(key).get<std::string>();
}

std::vector<Mep> load_meps_file(const std::filesystem::path& path) {
    json root;
    try {
        root = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    check_schema(root, kMepsSchema, path);
    if (!root.contains("meps") || !root.at("meps").is_array())
        throw SchemaError(path.string() + ": missing 'meps' array");

    std::vector<Mep> meps;
    std::size_t idx = 0;
    for (const json& jm : root.at("meps")) {
        const std::string where = path.string() + ": meps[" + std::to_string(idx++) + "]";
        Mep m;
        m.id = string_field(jm, "id", where);
        m.full_name = string_field(jm, "full_name", where);
        m.gender = parse_gender(string_field(jm, "gender", where));
        m.birth_date = date_field(jm, "birth_date", where);
        m.birthplace = string_field(jm, "birthplace", where);
        m.country = string_field(jm, "country", where);
        if (jm.contains("wikipedia_article") && !jm.at("wikipedia_article").is_null())
            m.wikipedia_article = jm.at("wikipedia_article").get<std::string>();
        if (!jm.contains("affiliations") || !jm.at("affiliations").is_array())
            throw SchemaError(where + ": missing 'affiliations' array");
        for (const json& ja : jm.at("affiliations")) {
            if (!ja.is_array() || ja.size() != 4)
                throw SchemaError(where +
                                  ": affiliation must be [party, group, start, end]");
            Affiliation a;
            a.national_party = ja.at(0).get<std::string>();
            a.group = parse_group_code(ja.at(1).get<std::string>());
            a.start_date = Date::parse(ja.at(2).get<std::string>());
            if (!ja.at(3).is_null())
                a.end_date = Date::parse(ja.at(3).get<std::string>());
            m.affiliations.push_back(std::move(a));
        }
        meps.push_back(std::move(m));
    }
    return meps;
}

std::vector<Proposal> load_proposals_file(const std::filesystem::path& path) {
    json root;
    try {
        root = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    check_schema(root, kProposalsSchema, path);
    if (!root.contains("proposals") || !root.at("proposals").is_array())
        throw SchemaError(path.string() + ": missing 'proposals' array");

    std::vector<Proposal> proposals;
    std::size_t idx = 0;
    for (const json& jp : root.at("proposals")) {
        const std::string where =
            path.string() + ": proposals[" + std::to_string(idx++) + "]";
        Proposal p;
        p.id = string_field(jp, "id", where);
        p.title = string_field(jp, "title", where);
        p.vote_date = date_field(jp, "vote_date", where);
        if (jp.contains("committees"))
            for (const json& c : jp.at("committees"))
                p.committees.insert(c.get<std::string>());
        p.has_press_release = jp.value("has_press_release", false);
        p.has_dedicated_debate = jp.value("has_dedicated_debate", false);
        if (jp.contains("speeches")) {
            for (const json& js : jp.at("speeches")) {
                Speech s;
                s.proposal_id = p.id;
                s.speaker_name = string_field(js, "speaker_name", where);
                if (js.contains("speaker_group") && !js.at("speaker_group").is_null())
                    s.speaker_group =
                        parse_group_code(js.at("speaker_group").get<std::string>());
                if (!js.contains("position_in_debate") ||
                    !js.at("position_in_debate").is_number_integer())
                    throw SchemaError(where + ": speech missing position_in_debate");
                s.position_in_debate = js.at("position_in_debate").get<int>();
                s.text = string_field(js, "text", where);
                s.variant = parse_speech_variant(js.value("variant", "real"));
                if (js.contains("stance_label") && !js.at("stance_label").is_null())
                    s.stance_label =
                        parse_stance(js.at("stance_label").get<std::string>());
                p.speeches.push_back(std::move(s));
            }
        }
        proposals.push_back(std::move(p));
    }
    return proposals;
}

json mep_to_json(const Mep& m) {
    json ja = json::array();
    for (const Affiliation& a : m.affiliations) {
        ja.push_back({a.national_party, to_string(a.group),
                      a.start_date.to_string(),
                      a.end_date ? json(a.end_date->to_string()) : json(nullptr)});
    }
    json j{{"id", m.id},
           {"full_name", m.full_name},
           {"gender", to_string(m.gender)},
           {"birth_date", m.birth_date.to_string()},
           {"birthplace", m.birthplace},
           {"country", m.country},
           {"affiliations", std::move(ja)},
           {"wikipedia_article",
            m.wikipedia_article ? json(*m.wikipedia_article) : json(nullptr)}};
    return j;
}

json proposal_to_json(const Proposal& p) {
    json speeches = json::array();
    for (const Speech& s : p.speeches) {
        speeches.push_back(
            {{"speaker_name", s.speaker_name},
             {"speaker_group",
              s.speaker_group ? json(to_string(*s.speaker_group)) : json(nullptr)},
             {"position_in_debate", s.position_in_debate},
             {"text", s.text},
             {"variant", to_string(s.variant)},
             {"stance_label",
              s.stance_label ? json(to_string(*s.stance_label)) : json(nullptr)}});
    }
    return json{{"id", p.id},
                {"title", p.title},
                {"vote_date", p.vote_date.to_string()},
                {"committees", p.committees},
                {"has_press_release", p.has_press_release},
                {"has_dedicated_debate", p.has_dedicated_debate},
                {"speeches", std::move(speeches)}};
}

}  // namespace

Corpus load_corpus(const CorpusPaths& paths, bool key_votes_only) {
    return make_corpus(load_meps_file(paths.meps), load_proposals_file(paths.proposals),
                       load_votes_file(paths.votes), key_votes_only);
}

void save_corpus(const Corpus& corpus, const CorpusPaths& paths) {
    std::string votes_out = "# ";
    votes_out += kVotesSchema;
    votes_out += "\nmep_id,proposal_id,position\n";
    for (const VoteRecord& v : corpus.votes()) {
        votes_out += v.mep_id;
        votes_out += ',';
        votes_out += v.proposal_id;
        votes_out += ',';
        votes_out += to_string(v.position);
        votes_out += '\n';
    }
    write_file_atomic(paths.votes, votes_out);

    json meps = json::array();
    for (const auto& [id, m] : corpus.meps()) meps.push_back(mep_to_json(m));
    write_file_atomic(paths.meps,
                      json{{"schema", kMepsSchema}, {"meps", std::move(meps)}}.dump(2) +
                          "\n");

    json proposals = json::array();
    for (const auto& [id, p] : corpus.proposals())
        proposals.push_back(proposal_to_json(p));
    write_file_atomic(
        paths.proposals,
        json{{"schema", kProposalsSchema}, {"proposals", std::move(proposals)}}.dump(2) +
            "\n");
}

void save_proposals_file(const std::vector<Proposal>& proposals,
                         const std::filesystem::path& path) {
    json out = json::array();
    for (const Proposal& p : proposals) out.push_back(proposal_to_json(p));
    write_file_atomic(
        path,
        json{{"schema", kProposalsSchema}, {"proposals", std::move(out)}}.dump(2) +
            "\n");
}

std::string corpus_content_hash(const Corpus& corpus) {
    json meps = json::array();
    for (const auto& [id, m] : corpus.meps()) meps.push_back(mep_to_json(m));
    json proposals = json::array();
    for (const auto& [id, p] : corpus.proposals())
        proposals.push_back(proposal_to_json(p));
    json votes = json::array();
    for (const VoteRecord& v : corpus.votes())
        votes.push_back({v.mep_id, v.proposal_id, to_string(v.position)});
    return sha256_hex(
        json{{"meps", std::move(meps)}, {"proposals", std::move(proposals)},
             {"votes", std::move(votes)}}
            .dump());
}

}  // namespace epsim
