#include "epsim/experiment.hpp"

#include "epsim/analysis.hpp"
#include "epsim/version.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace epsim {

using nlohmann::json;

namespace {

constexpr const char* kConfigSchema = "epsim-config-v1";

json prompts_to_json(const PromptConfig& p) {
    return json{{"default_system", p.default_system},
                {"proposal_intro", p.proposal_intro},
                {"speeches_intro", p.speeches_intro},
                {"speech_heading", p.speech_heading},
                {"vote_instruction_reasoning", p.vote_instruction_reasoning},
                {"vote_instruction_no_reasoning", p.vote_instruction_no_reasoning},
                {"counterfactual_instruction", p.counterfactual_instruction},
                {"stance_instruction", p.stance_instruction},
                {"stance_format", p.stance_format},
                {"counterfactual_format", p.counterfactual_format},
                {"summarizer_prompt", p.summarizer_prompt}};
}

void prompts_from_json(const json& j, PromptConfig& p) {
    p.default_system = j.value("default_system", p.default_system);
    p.proposal_intro = j.value("proposal_intro", p.proposal_intro);
    p.speeches_intro = j.value("speeches_intro", p.speeches_intro);
    p.speech_heading = j.value("speech_heading", p.speech_heading);
    p.vote_instruction_reasoning =
        j.value("vote_instruction_reasoning", p.vote_instruction_reasoning);
    p.vote_instruction_no_reasoning =
        j.value("vote_instruction_no_reasoning", p.vote_instruction_no_reasoning);
    p.counterfactual_instruction =
        j.value("counterfactual_instruction", p.counterfactual_instruction);
    p.stance_instruction = j.value("stance_instruction", p.stance_instruction);
    p.stance_format = j.value("stance_format", p.stance_format);
    p.counterfactual_format = j.value("counterfactual_format", p.counterfactual_format);
    p.summarizer_prompt = j.value("summarizer_prompt", p.summarizer_prompt);
}

json template_to_json(const PersonaTemplate& t) {
    return json{{"header", t.header},          {"gender_line", t.gender_line},
                {"age_line", t.age_line},      {"birthplace_line", t.birthplace_line},
                {"country_line", t.country_line}, {"party_line", t.party_line},
                {"group_line", t.group_line}};
}

void template_from_json(const json& j, PersonaTemplate& t) {
    t.header = j.value("header", t.header);
    t.gender_line = j.value("gender_line", t.gender_line);
    t.age_line = j.value("age_line", t.age_line);
    t.birthplace_line = j.value("birthplace_line", t.birthplace_line);
    t.country_line = j.value("country_line", t.country_line);
    t.party_line = j.value("party_line", t.party_line);
    t.group_line = j.value("group_line", t.group_line);
}

std::string fixed3(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(3) << v;
    return ss.str();
}

}  // namespace

json ExperimentConfig::to_json() const {
    return json{
        {"schema", kConfigSchema},
        {"corpus",
         {{"votes", votes.string()},
          {"meps", meps.string()},
          {"proposals", proposals.string()},
          {"key_votes_only", key_votes_only}}},
        {"lexicon", lexicon_file ? json(lexicon_file->string()) : json(nullptr)},
        {"persona", persona},
        {"reasoning", reasoning},
        {"speeches", speeches},
        {"default_bias", default_bias},
        {"repeats", repeats},
        {"temperature", temperature},
        {"seed", seed},
        {"max_tokens", max_tokens ? json(*max_tokens) : json(nullptr)},
        {"concurrency", concurrency},
        {"backend",
         {{"kind", backend.kind},
          {"script", backend.script},
          {"base_url", backend.base_url},
          {"model", backend.model},
          {"auth_token_env", backend.auth_token_env},
          {"timeout_ms", backend.timeout_ms}}},
        {"output_root", output_root.string()},
        {"persona_cache", persona_cache.string()},
        {"prompts", prompts_to_json(prompts)},
        {"persona_template", template_to_json(persona_template)}};
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
    json root;
    try {
        root = json::parse(read_file(file));
    } catch (const json::exception& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    if (!root.is_object() || root.value("schema", "") != kConfigSchema)
        throw ConfigError(file.string() + ": expected schema '" +
                          std::string(kConfigSchema) + "'");

    ExperimentConfig c;
    const json corpus = root.value("corpus", json::object());
    c.votes = corpus.value("votes", "");
    c.meps = corpus.value("meps", "");
    c.proposals = corpus.value("proposals", "");
    c.key_votes_only = corpus.value("key_votes_only", true);
    if (root.contains("lexicon") && !root.at("lexicon").is_null())
        c.lexicon_file = std::filesystem::path(root.at("lexicon").get<std::string>());
    c.persona = root.value("persona", c.persona);
    c.reasoning = root.value("reasoning", c.reasoning);
    c.speeches = root.value("speeches", c.speeches);
    c.default_bias = root.value("default_bias", c.default_bias);
    c.repeats = root.value("repeats", c.repeats);
    c.temperature = root.value("temperature", c.temperature);
    c.seed = root.value("seed", c.seed);
    if (root.contains("max_tokens") && !root.at("max_tokens").is_null())
        c.max_tokens = root.at("max_tokens").get<int>();
    c.concurrency = root.value("concurrency", c.concurrency);
    const json backend = root.value("backend", json::object());
    c.backend.kind = backend.value("kind", c.backend.kind);
    c.backend.script = backend.value("script", c.backend.script);
    c.backend.base_url = backend.value("base_url", c.backend.base_url);
    c.backend.model = backend.value("model", c.backend.model);
    c.backend.auth_token_env = backend.value("auth_token_env", c.backend.auth_token_env);
    c.backend.timeout_ms = backend.value("timeout_ms", c.backend.timeout_ms);
    c.output_root = root.value("output_root", c.output_root.string());
    c.persona_cache = root.value("persona_cache", c.persona_cache.string());
    if (root.contains("prompts")) prompts_from_json(root.at("prompts"), c.prompts);
    if (root.contains("persona_template"))
        template_from_json(root.at("persona_template"), c.persona_template);
    return c;
}

void ExperimentConfig::save(const std::filesystem::path& file) const {
    write_file_atomic(file, to_json().dump(2) + "\n");
}

std::string ExperimentConfig::content_hash() const {
    json j = to_json();
    j.erase("output_root");  // location, not content
    return sha256_hex(j.dump());
}

PersonaMode ExperimentConfig::persona_mode() const {
    PersonaMode mode;
    if (persona == "wikipedia") {
        mode.kind = PersonaMode::Kind::WikipediaSummary;
        mode.subset.clear();
        return mode;
    }
    mode.kind = PersonaMode::Kind::Attributes;
    if (persona == "attributes") {
        mode.subset = all_attributes();
        return mode;
    }
    if (persona == "name-only") {
        mode.subset = {AttributeKind::Name};
        return mode;
    }
    if (persona.rfind("name+", 0) == 0) {
        std::string attr = persona.substr(5);
        if (attr == "party") attr = "national_party";
        mode.subset = {AttributeKind::Name, parse_attribute_kind(attr)};
        return mode;
    }
    throw ConfigError("unknown persona spec '" + persona +
                      "' (expected attributes|wikipedia|name-only|name+<attr>)");
}

AnonymizationLexicon ExperimentConfig::load_lexicon() const {
    if (lexicon_file) return AnonymizationLexicon::load(*lexicon_file);
    return AnonymizationLexicon::with_default_groups();
}

Corpus ExperimentConfig::load_corpus_files() const {
    if (votes.empty() || meps.empty() || proposals.empty())
        throw ConfigError("corpus paths (votes, meps, proposals) are required");
    return load_corpus(CorpusPaths{votes, meps, proposals}, key_votes_only);
}

std::shared_ptr<ChatClient> ExperimentConfig::make_client(
    const std::optional<std::filesystem::path>& cache_dir) const {
    std::shared_ptr<ChatBackend> chat_backend;
    if (backend.kind == "mock") {
        chat_backend = backend.script.empty()
                           ? std::make_shared<MockBackend>()
                           : std::make_shared<MockBackend>(
                                 MockScript::load(backend.script));
    } else if (backend.kind == "http") {
        if (backend.base_url.empty())
            throw ConfigError("http backend requires base_url");
        chat_backend = std::make_shared<HttpBackend>(HttpEndpoint{
            backend.base_url, backend.model, backend.auth_token_env,
            backend.timeout_ms});
    } else {
        throw ConfigError("unknown backend kind '" + backend.kind + "'");
    }
    return std::make_shared<ChatClient>(chat_backend, RetryPolicy{}, cache_dir,
                                        concurrency);
}

std::filesystem::path run_directory(const ExperimentConfig& config) {
    return config.output_root / config.content_hash().substr(0, 12);
}

// ---------------------------------------------------------------------------

int cmd_ingest(const ExperimentConfig& config, const std::filesystem::path& out_dir,
               std::ostream& out) {
    Corpus corpus = config.load_corpus_files();
    std::filesystem::create_directories(out_dir);
    save_corpus(corpus, CorpusPaths{out_dir / "votes.csv", out_dir / "meps.json",
                                    out_dir / "proposals.json"});
    std::size_t decisions = 0;
    for (const VoteRecord& v : corpus.votes())
        if (v.position != VotePosition::DidNotVote) ++decisions;
    json info{{"schema", "epsim-corpus-info-v1"},
              {"corpus_hash", corpus_content_hash(corpus)},
              {"meps", corpus.meps().size()},
              {"proposals", corpus.proposals().size()},
              {"vote_records", corpus.votes().size()},
              {"decisions", decisions}};
    write_file_atomic(out_dir / "corpus_info.json", info.dump(2) + "\n");
    out << "ingested corpus: " << corpus.meps().size() << " MEPs, "
        << corpus.proposals().size() << " proposals, " << decisions
        << " decisions -> " << out_dir.string() << "\n";
    return 0;
}

namespace {

RunConfig build_run_config(const ExperimentConfig& config, const Corpus& corpus,
                           const std::filesystem::path& run_dir,
                           std::ostream& out) {
    RunConfig run;
    run.persona_mode = config.persona_mode();
    run.reasoning_mode =
        config.reasoning ? ReasoningMode::Reasoning : ReasoningMode::NoReasoning;
    run.speech_variant = config.speeches == "counterfactual"
                             ? SpeechVariant::Counterfactual
                             : SpeechVariant::Real;
    if (config.speeches != "real" && config.speeches != "counterfactual")
        throw ConfigError("speeches must be 'real' or 'counterfactual'");
    run.repeats = config.repeats;
    run.temperature = config.temperature;
    run.seed = config.seed;
    run.max_tokens = config.max_tokens;
    run.concurrency = config.concurrency;
    run.default_bias = config.default_bias;
    run.prompts = config.prompts;
    run.persona_template = config.persona_template;
    run.lexicon = config.load_lexicon();
    run.client = config.make_client(run_dir / "cache");
    run.output_dir = run_dir;

    if (run.persona_mode.kind == PersonaMode::Kind::WikipediaSummary &&
        !config.default_bias) {
        PersonaCache cache(config.persona_cache);
        std::size_t computed = 0, missing = 0;
        for (const auto& [id, mep] : corpus.meps()) {
            if (!mep.wikipedia_article || trim(*mep.wikipedia_article).empty()) {
                ++missing;
                continue;
            }
            run.wikipedia_summaries[id] =
                summarize_wikipedia(*mep.wikipedia_article, *run.client,
                                    config.prompts.summarizer_prompt, &cache, id);
            ++computed;
        }
        out << "personas: " << computed << " summaries ready, " << missing
            << " MEPs without article\n";
    }
    return run;
}

}  // namespace

int cmd_simulate(const ExperimentConfig& config, std::ostream& out) {
    Corpus corpus = config.load_corpus_files();
    const std::filesystem::path run_dir = run_directory(config);
    std::filesystem::create_directories(run_dir);
    config.save(run_dir / "experiment_config.json");

    RunConfig run = build_run_config(config, corpus, run_dir, out);

    PredictionSet set;
    if (config.default_bias) {
        PredictionSet raw;
        const auto bias = run_default_bias(run, corpus, &raw);
        set = std::move(raw);
        json bias_json = json::object();
        for (const auto& [pid, vote] : bias) bias_json[pid] = to_string(vote);
        write_file_atomic(run_dir / "default_bias.json",
                          json{{"schema", "epsim-bias-v1"}, {"votes", bias_json}}
                                  .dump(2) +
                              "\n");
    } else {
        set = run_simulation(run, corpus);
    }

    json manifest = set.manifest;
    manifest["config_hash"] = config.content_hash();
    write_file_atomic(run_dir / "manifest.json", manifest.dump(2) + "\n");

    out << "run " << run_dir.string() << ": " << set.predictions.size()
        << " predictions, " << set.failures.size() << " failures\n";
    return set.failures.empty() ? 0 : 1;
}

int cmd_counterfact(const ExperimentConfig& config, std::ostream& out) {
    Corpus corpus = config.load_corpus_files();
    const std::filesystem::path run_dir = run_directory(config) ;
    std::filesystem::create_directories(run_dir);
    config.save(run_dir / "experiment_config.json");
    auto client = config.make_client(run_dir / "cache");

    StancePrompts stance_prompts{config.prompts.stance_instruction,
                                 config.prompts.stance_format};
    CounterfactualPrompts counter_prompts{config.prompts.counterfactual_instruction,
                                          config.prompts.counterfactual_format};

    std::vector<Proposal> augmented;
    json stances = json::object();
    std::size_t generated = 0, failures = 0;
    for (const auto& [pid, proposal] : corpus.proposals()) {
        Proposal copy = proposal;
        copy.speeches.erase(
            std::remove_if(copy.speeches.begin(), copy.speeches.end(),
                           [](const Speech& s) {
                               return s.variant == SpeechVariant::Counterfactual;
                           }),
            copy.speeches.end());
        std::vector<Speech> counterfactuals;
        for (Speech& speech : copy.speeches) {
            try {
                const Stance stance =
                    classify_stance(speech, proposal.title, *client, stance_prompts);
                speech.stance_label = stance;
                stances[pid + "|" + std::to_string(speech.position_in_debate)] =
                    to_string(stance);
                CounterfactualResult result = generate_counterfactual(
                    speech, proposal.title, *client, counter_prompts);
                counterfactuals.push_back(std::move(result.speech));
                ++generated;
            } catch (const Error& e) {
                ++failures;
                out << "counterfact failure (" << pid << " #"
                    << speech.position_in_debate << "): " << e.what() << "\n";
            }
        }
        copy.speeches.insert(copy.speeches.end(), counterfactuals.begin(),
                             counterfactuals.end());
        augmented.push_back(std::move(copy));
    }

    // Re-validate the augmented speech sets, then write the proposals file.
    Corpus augmented_corpus =
        make_corpus(std::vector<Mep>(), augmented, std::vector<VoteRecord>(), false);
    std::vector<Proposal> validated;
    for (const auto& [pid, proposal] : augmented_corpus.proposals())
        validated.push_back(proposal);
    save_proposals_file(validated, run_dir / "proposals_with_counterfactuals.json");
    write_file_atomic(run_dir / "stances.json",
                      json{{"schema", "epsim-stances-v1"}, {"stances", stances}}
                              .dump(2) +
                          "\n");
    out << "counterfactuals: " << generated << " generated, " << failures
        << " failures -> " << (run_dir / "proposals_with_counterfactuals.json").string()
        << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_annotate(const std::filesystem::path& labels_file, std::ostream& out) {
    const AnnotationMatrix matrix = AnnotationMatrix::load_csv(labels_file);
    const auto majorities = annotation_majorities(matrix);
    for (std::size_t i = 0; i < majorities.size(); ++i) {
        const std::string id =
            i < matrix.item_ids.size() ? matrix.item_ids[i] : std::to_string(i);
        out << id << ": " << majorities[i] << "\n";
    }
    out << "kappa = " << fixed3(fleiss_kappa(matrix)) << "\n";
    return 0;
}

namespace {

json distribution_json(const std::map<VotePosition, double>& d) {
    json j = json::object();
    for (const auto& [pos, f] : d) j[to_string(pos)] = f;
    return j;
}

// Vote share per group, over the scored grid.
std::map<GroupCode, std::map<VotePosition, double>> group_distribution_actual(
    const Corpus& corpus) {
    std::map<GroupCode, std::map<VotePosition, std::size_t>> counts;
    std::map<GroupCode, std::size_t> totals;
    for (const VoteRecord& v : corpus.votes()) {
        if (v.position == VotePosition::DidNotVote) continue;
        const GroupCode g =
            resolve_affiliation(corpus.mep(v.mep_id),
                                corpus.proposal(v.proposal_id).vote_date)
                .group;
        ++counts[g][v.position];
        ++totals[g];
    }
    std::map<GroupCode, std::map<VotePosition, double>> out;
    for (const auto& [g, by_pos] : counts)
        for (const auto& [pos, n] : by_pos)
            out[g][pos] =
                static_cast<double>(n) / static_cast<double>(totals.at(g));
    return out;
}

std::map<GroupCode, std::map<VotePosition, double>> group_distribution_predicted(
    const PredictionSet& set, const Corpus& corpus) {
    std::map<GroupCode, std::map<VotePosition, std::size_t>> counts;
    std::map<GroupCode, std::size_t> totals;
    for (const Prediction& p : set.predictions) {
        const GroupCode g =
            resolve_affiliation(corpus.mep(p.mep_id),
                                corpus.proposal(p.proposal_id).vote_date)
                .group;
        ++counts[g][p.vote];
        ++totals[g];
    }
    std::map<GroupCode, std::map<VotePosition, double>> out;
    for (const auto& [g, by_pos] : counts)
        for (const auto& [pos, n] : by_pos)
            out[g][pos] =
                static_cast<double>(n) / static_cast<double>(totals.at(g));
    return out;
}

}  // namespace

int cmd_evaluate(const ExperimentConfig& config, const std::filesystem::path& run_dir,
                 const std::optional<std::filesystem::path>& alternate_run,
                 std::ostream& out) {
    Corpus corpus = config.load_corpus_files();
    PredictionSet set = load_prediction_set(run_dir / "predictions.json");

    json report{{"schema", "epsim-eval-v1"},
                {"code_version", kVersion},
                {"run", run_dir.string()}};

    if (set.manifest.value("default_bias", false)) {
        std::map<std::string, std::vector<VotePosition>> by_proposal;
        for (const Prediction& p : set.predictions)
            by_proposal[p.proposal_id].push_back(p.vote);
        std::map<std::string, VotePosition> vector;
        for (const auto& [pid, votes] : by_proposal)
            vector[pid] = majority_vote(votes);

        json ranked = json::array();
        for (const auto& [group, agreement] :
             bias_alignment(vector, actual_group_lines(corpus)))
            ranked.push_back({{"group", to_string(group)}, {"agreement", agreement}});
        report["bias_alignment"] = std::move(ranked);
        json votes_json = json::object();
        for (const auto& [pid, vote] : vector) votes_json[pid] = to_string(vote);
        report["bias_votes"] = std::move(votes_json);

        write_file_atomic(run_dir / "eval_report.json", report.dump(2) + "\n");
        out << "bias alignment written to "
            << (run_dir / "eval_report.json").string() << "\n";
        return 0;
    }

    const TruthMap truth = truth_from_corpus(corpus);
    const GroupingFn grouping = grouping_from_corpus(corpus);
    const F1Report f1 = weighted_f1_report(truth, set, grouping);

    json per_class = json::object();
    for (const auto& [pos, stats] : f1.per_class)
        per_class[to_string(pos)] = {{"precision", stats.precision},
                                     {"recall", stats.recall},
                                     {"f1", stats.f1},
                                     {"support", stats.support}};
    json per_group = json::object();
    for (const auto& [group, value] : f1.per_group_weighted_f1)
        per_group[to_string(group)] = value;
    report["f1"] = {{"overall_weighted", f1.overall_weighted_f1},
                    {"mean_across_runs", f1.mean_weighted_f1},
                    {"per_run", f1.per_run_f1},
                    {"per_class", std::move(per_class)},
                    {"per_group", std::move(per_group)},
                    {"scored_cells", f1.scored_cells}};

    try {
        report["robustness"] = robustness(set);
    } catch (const Error&) {
        report["robustness"] = nullptr;  // single-repeat runs have no robustness
    }

    const LineMap actual_lines = actual_group_lines(corpus);
    const LineMap predicted_lines = predicted_group_lines(set, corpus);
    report["group_line_accuracy"] = {
        {"all", group_line_accuracy(predicted_lines, actual_lines, false)},
        {"excluding_abstention_lines",
         group_line_accuracy(predicted_lines, actual_lines, true)}};

    report["cohesion"] = {
        {"actual",
         {{"national_party",
           cohesion_median_variance(cohesion_observations_from_corpus(
               corpus, CohesionUnit::NationalParty))},
          {"group", cohesion_median_variance(cohesion_observations_from_corpus(
                        corpus, CohesionUnit::EuropeanGroup))}}},
        {"predicted",
         {{"national_party",
           cohesion_median_variance(cohesion_observations_from_predictions(
               set, corpus, CohesionUnit::NationalParty))},
          {"group", cohesion_median_variance(cohesion_observations_from_predictions(
                        set, corpus, CohesionUnit::EuropeanGroup))}}}};

    report["vote_distribution_actual"] = distribution_json(vote_distribution(corpus));

    {
        const PredictionSet majority = constant_baseline(corpus, VotePosition::For);
        report["baselines"]["majority_for_weighted_f1"] =
            weighted_f1_report(truth, majority, grouping).overall_weighted_f1;

        const PredictionSet spokesperson = spokesperson_baseline(
            corpus, [](const Speech& s) { return s.stance_label; });
        if (!spokesperson.predictions.empty()) {
            report["baselines"]["spokesperson_weighted_f1"] =
                weighted_f1_report(truth, spokesperson, grouping).overall_weighted_f1;
            report["baselines"]["spokesperson_missing_cells"] =
                spokesperson.failures.size();
        }
    }

    {
        json dist = json::object();
        const auto actual = group_distribution_actual(corpus);
        const auto predicted = group_distribution_predicted(set, corpus);
        for (GroupCode g : kAllGroups) {
            json entry = json::object();
            if (actual.count(g)) entry["actual"] = distribution_json(actual.at(g));
            if (predicted.count(g))
                entry["predicted"] = distribution_json(predicted.at(g));
            if (!entry.empty()) dist[to_string(g)] = std::move(entry);
        }
        report["group_vote_distribution"] = std::move(dist);
    }

    if (alternate_run) {
        const PredictionSet alternate =
            load_prediction_set(*alternate_run / "predictions.json");
        json flips = json::object();
        for (const auto& [group, rates] : flip_rates(set, alternate, corpus)) {
            flips[to_string(group)] = {
                {"median_against_to_for_pct", rates.median_against_to_for_pct},
                {"median_for_to_against_pct", rates.median_for_to_against_pct}};
        }
        report["flips"] = std::move(flips);
        report["flips_alternate_run"] = alternate_run->string();
    }

    write_file_atomic(run_dir / "eval_report.json", report.dump(2) + "\n");
    out << "weighted F1 (mean across runs) = " << fixed3(f1.mean_weighted_f1) << "\n"
        << "eval report written to " << (run_dir / "eval_report.json").string()
        << "\n";
    return 0;
}

int cmd_analyze(const ExperimentConfig& config, const std::filesystem::path& run_dir,
                const std::string& label, std::ostream& out) {
    Corpus corpus = config.load_corpus_files();
    PredictionSet set = load_prediction_set(run_dir / "predictions.json");

    const MentionRow row = mention_rates(set, corpus, label);
    json mention = json::object();
    for (const auto& [kind, pct] : row.percent) mention[to_string(kind)] = pct;

    const GenderMentionTable gender = gender_disaggregation(set, corpus);

    json analysis{{"schema", "epsim-analysis-v1"},
                  {"label", row.label},
                  {"reasoning_chains", row.chains},
                  {"mention_rates_pct", std::move(mention)},
                  {"gender_mentions_pct",
                   {{"mm", gender.mm}, {"fm", gender.fm}, {"ff", gender.ff},
                    {"mf", gender.mf}}}};

    try {
        json known = json::object();
        for (const auto& [group, rate] : group_known_rate(set, corpus))
            known[to_string(group)] = 100.0 * rate;
        analysis["group_known_pct"] = std::move(known);
    } catch (const WrongRunConfig&) {
        // Only meaningful for name-only runs.
    }

    write_file_atomic(run_dir / "analysis.json", analysis.dump(2) + "\n");

    std::string tsv = "attribute\tpercent\n";
    for (const auto& [kind, pct] : row.percent)
        tsv += to_string(kind) + "\t" + fixed3(pct) + "\n";
    write_file_atomic(run_dir / "mention_table.tsv", tsv);

    out << "analysis written to " << (run_dir / "analysis.json").string() << "\n";
    return 0;
}

int cmd_report(const ExperimentConfig& config, const std::filesystem::path& run_dir,
               const std::optional<std::filesystem::path>& alternate_run,
               std::ostream& out) {
    Corpus corpus = config.load_corpus_files();
    PredictionSet set = load_prediction_set(run_dir / "predictions.json");
    const std::filesystem::path report_dir = run_dir / "report";
    std::filesystem::create_directories(report_dir);

    {
        const auto actual = group_distribution_actual(corpus);
        const auto predicted = group_distribution_predicted(set, corpus);
        std::string tsv = "group\tposition\tactual\tpredicted\n";
        for (GroupCode g : kAllGroups) {
            for (VotePosition pos :
                 {VotePosition::For, VotePosition::Against, VotePosition::Abstention}) {
                double a = 0.0, p = 0.0;
                if (actual.count(g) && actual.at(g).count(pos)) a = actual.at(g).at(pos);
                if (predicted.count(g) && predicted.at(g).count(pos))
                    p = predicted.at(g).at(pos);
                if (!actual.count(g) && !predicted.count(g)) continue;
                tsv += to_string(g) + "\t" + to_string(pos) + "\t" + fixed3(a) + "\t" +
                       fixed3(p) + "\n";
            }
        }
        write_file_atomic(report_dir / "group_vote_distribution.tsv", tsv);
    }

    if (alternate_run) {
        const PredictionSet alternate =
            load_prediction_set(*alternate_run / "predictions.json");
        std::set<std::string> committees;
        for (const auto& [pid, proposal] : corpus.proposals())
            committees.insert(proposal.committees.begin(), proposal.committees.end());

        std::string tsv = "committee\tgroup\tagainst_to_for_pct\tfor_to_against_pct\n";
        for (const std::string& committee : committees) {
            std::map<GroupCode, FlipRates> rates;
            try {
                rates = flip_rates(set, alternate, corpus,
                                   std::set<std::string>{committee});
            } catch (const Error&) {
                continue;  // no scored proposals under this committee
            }
            for (const auto& [group, r] : rates) {
                tsv += committee + "\t" + to_string(group) + "\t" +
                       fixed3(r.median_against_to_for_pct) + "\t" +
                       fixed3(r.median_for_to_against_pct) + "\n";
            }
        }
        write_file_atomic(report_dir / "flip_heatmap.tsv", tsv);
    }

    out << "report tables written to " << report_dir.string() << "\n";
    return 0;
}

}  // namespace epsim
