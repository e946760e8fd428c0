#include "epsim/simulator_types.hpp"

#include "epsim/errors.hpp"
#include "epsim/util.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace epsim {

using nlohmann::json;

std::string to_string(ReasoningMode m) {
    return m == ReasoningMode::Reasoning ? "reasoning" : "no_reasoning";
}

ReasoningMode parse_reasoning_mode(std::string_view s) {
    if (s == "reasoning") return ReasoningMode::Reasoning;
    if (s == "no_reasoning") return ReasoningMode::NoReasoning;
    throw SchemaError("unknown reasoning mode: '" + std::string(s) + "'");
}

void canonicalize(PredictionSet& set) {
    auto key = [](const auto& r) {
        return std::tie(r.mep_id, r.proposal_id, r.repeat);
    };
    std::sort(set.predictions.begin(), set.predictions.end(),
              [&](const Prediction& a, const Prediction& b) { return key(a) < key(b); });
    std::sort(set.failures.begin(), set.failures.end(),
              [&](const Failure& a, const Failure& b) { return key(a) < key(b); });

    std::set<std::tuple<std::string, std::string, int>> seen;
    for (const Prediction& p : set.predictions)
        if (!seen.insert({p.mep_id, p.proposal_id, p.repeat}).second)
            throw IntegrityError("duplicate prediction cell (" + p.mep_id + ", " +
                                 p.proposal_id + ", " + std::to_string(p.repeat) + ")");
    for (const Failure& f : set.failures)
        if (!seen.insert({f.mep_id, f.proposal_id, f.repeat}).second)
            throw IntegrityError("duplicate grid cell (" + f.mep_id + ", " +
                                 f.proposal_id + ", " + std::to_string(f.repeat) + ")");
}

void save_prediction_set(const PredictionSet& set, const std::filesystem::path& file) {
    json predictions = json::array();
    for (const Prediction& p : set.predictions) {
        predictions.push_back(
            {{"mep_id", p.mep_id},
             {"proposal_id", p.proposal_id},
             {"repeat", p.repeat},
             {"vote", to_string(p.vote)},
             {"reasoning", p.reasoning ? json(*p.reasoning) : json(nullptr)},
             {"raw", p.raw}});
    }
    json failures = json::array();
    for (const Failure& f : set.failures) {
        failures.push_back({{"mep_id", f.mep_id},
                            {"proposal_id", f.proposal_id},
                            {"repeat", f.repeat},
                            {"error", f.error}});
    }
    json root{{"schema", "epsim-predictions-v1"},
              {"manifest", set.manifest},
              {"predictions", std::move(predictions)},
              {"failures", std::move(failures)}};
    write_file_atomic(file, root.dump(2) + "\n");
}

PredictionSet load_prediction_set(const std::filesystem::path& file) {
    json root;
    try {
        root = json::parse(read_file(file));
    } catch (const json::exception& e) {
        throw SchemaError(file.string() + ": " + e.what());
    }
    if (!root.is_object() || root.value("schema", "") != "epsim-predictions-v1")
        throw SchemaError(file.string() +
                          ": expected schema 'epsim-predictions-v1'");
    PredictionSet set;
    set.manifest = root.value("manifest", json::object());
    for (const json& jp : root.value("predictions", json::array())) {
        Prediction p;
        p.mep_id = jp.at("mep_id").get<std::string>();
        p.proposal_id = jp.at("proposal_id").get<std::string>();
        p.repeat = jp.at("repeat").get<int>();
        p.vote = parse_vote_position(jp.at("vote").get<std::string>());
        if (p.vote == VotePosition::DidNotVote)
            throw SchemaError(file.string() + ": prediction carries DID_NOT_VOTE");
        if (jp.contains("reasoning") && !jp.at("reasoning").is_null())
            p.reasoning = jp.at("reasoning").get<std::string>();
        p.raw = jp.value("raw", "");
        set.predictions.push_back(std::move(p));
    }
    for (const json& jf : root.value("failures", json::array())) {
        Failure f;
        f.mep_id = jf.at("mep_id").get<std::string>();
        f.proposal_id = jf.at("proposal_id").get<std::string>();
        f.repeat = jf.at("repeat").get<int>();
        f.error = jf.value("error", "");
        set.failures.push_back(std::move(f));
    }
    canonicalize(set);
    return set;
}

}  // namespace epsim
