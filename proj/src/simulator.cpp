#include "epsim/simulator.hpp"

#include "epsim/metrics.hpp"
#include "epsim/version.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace epsim {

using nlohmann::json;

namespace {

json persona_mode_json(const PersonaMode& mode) {
    if (mode.kind == PersonaMode::Kind::WikipediaSummary)
        return {{"kind", "wikipedia"}};
    json subset = json::array();
    for (AttributeKind k : mode.subset) subset.push_back(to_string(k));
    return {{"kind", "attributes"}, {"subset", std::move(subset)}};
}

int default_max_tokens(ReasoningMode mode) {
    return mode == ReasoningMode::Reasoning ? 1024 : 16;
}

}  // namespace

json run_manifest(const RunConfig& config, const Corpus& corpus) {
    return json{{"schema", "epsim-manifest-v1"},
                {"code_version", kVersion},
                {"corpus_hash", corpus_content_hash(corpus)},
                {"persona", persona_mode_json(config.persona_mode)},
                {"reasoning_mode", to_string(config.reasoning_mode)},
                {"speech_variant", to_string(config.speech_variant)},
                {"repeats", config.repeats},
                {"temperature", config.temperature},
                {"seed", config.seed},
                {"max_tokens",
                 config.max_tokens ? json(*config.max_tokens) : json(nullptr)},
                {"default_bias", config.default_bias},
                {"backend", config.client ? config.client->backend().name() : "none"}};
}

ChatRequest build_messages(const std::optional<PersonaSpec>& persona,
                           const Proposal& proposal,
                           const std::vector<Speech>& ordered_speeches,
                           ReasoningMode mode, const PromptConfig& prompts,
                           double temperature, int max_tokens,
                           const std::string& request_tag) {
    if (ordered_speeches.empty())
        throw EmptySpeeches("proposal '" + proposal.id + "' has no speeches to present");

    ChatRequest request;
    request.system_prompt = persona ? persona->rendered : prompts.default_system;

    std::string user = substitute(prompts.proposal_intro, "{title}", proposal.title);
    user += "\n\n";
    user += prompts.speeches_intro;
    user += "\n";
    for (std::size_t i = 0; i < ordered_speeches.size(); ++i) {
        user += "\n";
        user += substitute(prompts.speech_heading, "{index}", std::to_string(i + 1));
        user += "\n";
        user += ordered_speeches[i].text;
        user += "\n";
    }
    user += "\n";
    user += mode == ReasoningMode::Reasoning ? prompts.vote_instruction_reasoning
                                             : prompts.vote_instruction_no_reasoning;

    request.user_prompt = std::move(user);
    request.temperature = temperature;
    request.max_tokens = max_tokens;
    request.request_tag = request_tag;
    return request;
}

ParsedVote parse_vote_response(const std::string& raw, ReasoningMode mode) {
    const auto object_text = extract_first_json_object(raw);
    if (!object_text)
        throw FormatViolation("no JSON object in response", {raw});
    json j;
    try {
        j = json::parse(*object_text);
    } catch (const json::exception& e) {
        throw FormatViolation(std::string("unparseable JSON object: ") + e.what(),
                              {raw});
    }
    if (!j.contains("vote") || !j.at("vote").is_string())
        throw FormatViolation("response has no string 'vote' field", {raw});

    const std::string value = trim(j.at("vote").get<std::string>());
    ParsedVote parsed;
    if (iequals(value, "FOR"))
        parsed.vote = VotePosition::For;
    else if (iequals(value, "AGAINST"))
        parsed.vote = VotePosition::Against;
    else if (iequals(value, "ABSTENTION"))
        parsed.vote = VotePosition::Abstention;
    else
        throw FormatViolation("vote value outside the options: '" + value + "'", {raw});

    if (mode == ReasoningMode::Reasoning) {
        if (!j.contains("reasoning") || !j.at("reasoning").is_string())
            throw FormatViolation("reasoning mode requires a 'reasoning' field", {raw});
        parsed.reasoning = j.at("reasoning").get<std::string>();
    }
    return parsed;
}

// ---------------------------------------------------------------------------

RunLock::RunLock(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    file_ = dir / ".lock";
    // O_EXCL-style create: a second orchestrator on the same directory fails.
    if (std::filesystem::exists(file_))
        throw ConfigError("run directory '" + dir.string() +
                          "' is locked by another process (delete " + file_.string() +
                          " if that process is gone)");
    write_file_atomic(file_, "locked\n");
}

RunLock::~RunLock() {
    std::error_code ec;
    std::filesystem::remove(file_, ec);
}

namespace {

struct GridCell {
    std::string mep_id;    // empty for default-bias cells
    std::string proposal_id;
    int repeat = 0;
};

struct CellOutcome {
    bool ok = false;
    Prediction prediction;
    Failure failure;
};

// Shared per-proposal prompt material, prepared once per run.
struct ProposalContext {
    std::vector<Speech> ordered_speeches;
};

std::map<std::string, ProposalContext> prepare_proposals(const RunConfig& config,
                                                         const Corpus& corpus) {
    std::map<std::string, ProposalContext> contexts;
    for (const auto& [pid, proposal] : corpus.proposals()) {
        std::vector<Speech> variant_speeches;
        for (const Speech* s : proposal.speeches_of(config.speech_variant))
            variant_speeches.push_back(*s);
        if (variant_speeches.empty()) continue;  // cells will fail with EmptySpeeches
        for (Speech& s : variant_speeches) s.text = anonymize(s.text, config.lexicon);
        ProposalContext context;
        context.ordered_speeches = order_speeches(variant_speeches, config.seed);
        contexts.emplace(pid, std::move(context));
    }
    return contexts;
}

void run_cells(const RunConfig& config, const Corpus& corpus,
               const std::vector<GridCell>& cells,
               const std::map<std::string, ProposalContext>& contexts,
               std::vector<CellOutcome>& outcomes) {
    if (!config.client) throw ConfigError("run requires a configured backend");
    const int max_tokens =
        config.max_tokens.value_or(default_max_tokens(config.reasoning_mode));

    auto run_one = [&](const GridCell& cell) -> CellOutcome {
        CellOutcome outcome;
        try {
            const Proposal& proposal = corpus.proposal(cell.proposal_id);
            const auto context_it = contexts.find(cell.proposal_id);
            if (context_it == contexts.end())
                throw EmptySpeeches("proposal '" + cell.proposal_id + "' has no " +
                                    to_string(config.speech_variant) + " speeches");

            std::optional<PersonaSpec> persona;
            if (!cell.mep_id.empty()) {
                const Mep& mep = corpus.mep(cell.mep_id);
                if (config.persona_mode.kind == PersonaMode::Kind::Attributes) {
                    persona = render_attribute_persona(mep, proposal.vote_date,
                                                       config.persona_mode.subset,
                                                       config.persona_template);
                } else {
                    const auto summary = config.wikipedia_summaries.find(mep.id);
                    if (summary == config.wikipedia_summaries.end())
                        throw ConfigError("no precomputed summary for mep '" + mep.id +
                                          "'");
                    PersonaSpec spec;
                    spec.mode = config.persona_mode;
                    spec.rendered = summary->second;
                    persona = std::move(spec);
                }
            }

            const std::string tag = (cell.mep_id.empty() ? "bias" : cell.mep_id) + "|" +
                                    cell.proposal_id + "|r" +
                                    std::to_string(cell.repeat);
            const ChatRequest request = build_messages(
                persona, proposal, context_it->second.ordered_speeches,
                config.reasoning_mode, config.prompts, config.temperature, max_tokens,
                tag);

            const std::string raw = config.client->complete_with_policy(
                request, [&](const std::string& text) {
                    try {
                        parse_vote_response(text, config.reasoning_mode);
                        return true;
                    } catch (const FormatViolation&) {
                        return false;
                    }
                });
            const ParsedVote parsed = parse_vote_response(raw, config.reasoning_mode);
            outcome.ok = true;
            outcome.prediction = {cell.mep_id, cell.proposal_id, cell.repeat,
                                  parsed.vote, parsed.reasoning, raw};
        } catch (const Error& e) {
            outcome.ok = false;
            outcome.failure = {cell.mep_id, cell.proposal_id, cell.repeat, e.what()};
        }
        return outcome;
    };

    outcomes.resize(cells.size());
    const int workers =
        std::max(1, std::min<int>(config.concurrency,
                                  static_cast<int>(cells.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) outcomes[i] = run_one(cells[i]);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < cells.size();
                 i = next.fetch_add(1))
                outcomes[i] = run_one(cells[i]);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace

PredictionSet run_simulation(const RunConfig& config, const Corpus& corpus) {
    if (config.repeats < 1) throw ConfigError("repeats must be >= 1");

    std::optional<RunLock> lock;
    if (config.output_dir) lock.emplace(*config.output_dir);

    const auto contexts = prepare_proposals(config, corpus);

    std::vector<GridCell> cells;
    for (const VoteRecord& v : corpus.votes()) {
        if (v.position == VotePosition::DidNotVote) continue;
        for (int r = 0; r < config.repeats; ++r)
            cells.push_back({v.mep_id, v.proposal_id, r});
    }

    std::vector<CellOutcome> outcomes;
    run_cells(config, corpus, cells, contexts, outcomes);

    PredictionSet set;
    set.manifest = run_manifest(config, corpus);
    for (CellOutcome& outcome : outcomes) {
        if (outcome.ok)
            set.predictions.push_back(std::move(outcome.prediction));
        else
            set.failures.push_back(std::move(outcome.failure));
    }
    canonicalize(set);

    if (config.output_dir)
        save_prediction_set(set, *config.output_dir / "predictions.json");
    return set;
}

std::map<std::string, VotePosition> run_default_bias(const RunConfig& config,
                                                     const Corpus& corpus,
                                                     PredictionSet* raw_out) {
    if (config.repeats < 1) throw ConfigError("repeats must be >= 1");

    std::optional<RunLock> lock;
    if (config.output_dir) lock.emplace(*config.output_dir);

    const auto contexts = prepare_proposals(config, corpus);

    std::vector<GridCell> cells;
    for (const auto& [pid, proposal] : corpus.proposals())
        for (int r = 0; r < config.repeats; ++r) cells.push_back({"", pid, r});

    std::vector<CellOutcome> outcomes;
    run_cells(config, corpus, cells, contexts, outcomes);

    PredictionSet set;
    set.manifest = run_manifest(config, corpus);
    set.manifest["default_bias"] = true;
    for (CellOutcome& outcome : outcomes) {
        if (outcome.ok)
            set.predictions.push_back(std::move(outcome.prediction));
        else
            set.failures.push_back(std::move(outcome.failure));
    }
    canonicalize(set);
    if (config.output_dir)
        save_prediction_set(set, *config.output_dir / "predictions.json");
    if (raw_out) *raw_out = set;

    std::map<std::string, std::vector<VotePosition>> by_proposal;
    for (const Prediction& p : set.predictions)
        by_proposal[p.proposal_id].push_back(p.vote);
    std::map<std::string, VotePosition> result;
    for (const auto& [pid, votes] : by_proposal) result[pid] = majority_vote(votes);
    return result;
}

}  // namespace epsim
