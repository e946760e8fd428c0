#pragma once

#include "epsim/corpus.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace epsim {

enum class ReasoningMode { Reasoning, NoReasoning };

std::string to_string(ReasoningMode m);
ReasoningMode parse_reasoning_mode(std::string_view s);

struct Prediction {
    std::string mep_id;
    std::string proposal_id;
    int repeat = 0;
    VotePosition vote = VotePosition::For;  // never DidNotVote
    std::optional<std::string> reasoning;
    std::string raw;

    bool operator==(const Prediction&) const = default;
};

struct Failure {
    std::string mep_id;
    std::string proposal_id;
    int repeat = 0;
    std::string error;

    bool operator==(const Failure&) const = default;
};

// A full run: manifest plus one Prediction or Failure per planned grid cell.
struct PredictionSet {
    nlohmann::json manifest;  // run config, corpus hash, code version
    std::vector<Prediction> predictions;  // sorted (mep_id, proposal_id, repeat)
    std::vector<Failure> failures;

    int repeats() const { return manifest.value("repeats", 1); }

    bool operator==(const PredictionSet&) const = default;
};

void save_prediction_set(const PredictionSet& set, const std::filesystem::path& file);
PredictionSet load_prediction_set(const std::filesystem::path& file);

// Canonical order + grid uniqueness check. Throws IntegrityError on
// duplicate (mep, proposal, repeat) keys.
void canonicalize(PredictionSet& set);

}  // namespace epsim
