#pragma once

#include "epsim/backend.hpp"
#include "epsim/corpus.hpp"
#include "epsim/debate.hpp"
#include "epsim/persona.hpp"
#include "epsim/prompts.hpp"
#include "epsim/simulator_types.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>

namespace epsim {

struct RunConfig {
    PersonaMode persona_mode;
    ReasoningMode reasoning_mode = ReasoningMode::Reasoning;
    SpeechVariant speech_variant = SpeechVariant::Real;
    int repeats = 3;
    double temperature = 0.6;
    std::uint64_t seed = 1;
    std::optional<int> max_tokens;  // defaults: 16 no-reasoning, 1024 reasoning
    int concurrency = 2;
    bool default_bias = false;  // persona-free probe run

    PromptConfig prompts;
    PersonaTemplate persona_template;
    AnonymizationLexicon lexicon;

    // Precomputed summaries (mep_id -> summary) for WikipediaSummary mode.
    std::map<std::string, std::string> wikipedia_summaries;

    std::shared_ptr<ChatClient> client;
    std::optional<std::filesystem::path> output_dir;  // lock + predictions file
};

nlohmann::json run_manifest(const RunConfig& config, const Corpus& corpus);

// Assembles the chat request: system prompt is the persona (or the default
// assistant prompt when absent); user prompt is the proposal title, the
// ordered anonymized speeches, and the response-format instruction.
ChatRequest build_messages(const std::optional<PersonaSpec>& persona,
                           const Proposal& proposal,
                           const std::vector<Speech>& ordered_speeches,
                           ReasoningMode mode, const PromptConfig& prompts,
                           double temperature, int max_tokens,
                           const std::string& request_tag);

struct ParsedVote {
    VotePosition vote = VotePosition::For;
    std::optional<std::string> reasoning;
};

// Pulls the first JSON object out of the raw text; the vote field is matched
// case-insensitively against FOR/AGAINST/ABSTENTION. Reasoning mode requires
// a reasoning field. Throws FormatViolation.
ParsedVote parse_vote_response(const std::string& raw, ReasoningMode mode);

// One Prediction or Failure per (targeted MEP, proposal, repeat). Reruns
// with the same config fill missing cells from the response cache, so an
// interrupted run resumes instead of recomputing.
PredictionSet run_simulation(const RunConfig& config, const Corpus& corpus);

// Persona-free probe: one majority vote per proposal (group_line tie order).
std::map<std::string, VotePosition> run_default_bias(const RunConfig& config,
                                                     const Corpus& corpus,
                                                     PredictionSet* raw_out = nullptr);

// Exclusive ownership of a run directory while an orchestrator writes to it.
class RunLock {
public:
    explicit RunLock(const std::filesystem::path& dir);
    ~RunLock();
    RunLock(const RunLock&) = delete;
    RunLock& operator=(const RunLock&) = delete;

private:
    std::filesystem::path file_;
};

}  // namespace epsim
