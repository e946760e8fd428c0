#pragma once

#include "epsim/backend.hpp"
#include "epsim/corpus.hpp"
#include "epsim/debate.hpp"
#include "epsim/metrics.hpp"
#include "epsim/persona.hpp"
#include "epsim/simulator.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace epsim {

struct BackendConfig {
    std::string kind = "mock";  // mock | http
    std::string script;         // mock rule file (optional)
    std::string base_url;
    std::string model;
    std::string auth_token_env = "EPSIM_API_TOKEN";
    int timeout_ms = 120000;
};

// One experiment, fully serializable; re-executing a stored config yields the
// identical experiment (given the same backend behavior). The output
// directory is named by the config hash, so reruns resume rather than
// overwrite.
struct ExperimentConfig {
    std::filesystem::path votes;
    std::filesystem::path meps;
    std::filesystem::path proposals;
    bool key_votes_only = true;

    std::optional<std::filesystem::path> lexicon_file;  // default: group aliases

    std::string persona = "attributes";  // attributes|wikipedia|name-only|name+<attr>
    bool reasoning = true;
    std::string speeches = "real";  // real | counterfactual
    bool default_bias = false;
    int repeats = 3;
    double temperature = 0.6;
    std::uint64_t seed = 1;
    std::optional<int> max_tokens;
    int concurrency = 2;

    BackendConfig backend;
    std::filesystem::path output_root = "runs";
    std::filesystem::path persona_cache = "persona_cache";

    PromptConfig prompts;
    PersonaTemplate persona_template;

    static ExperimentConfig load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;
    nlohmann::json to_json() const;

    // Hash over everything that shapes run content (output_root excluded).
    std::string content_hash() const;

    PersonaMode persona_mode() const;      // throws ConfigError on bad spec
    AnonymizationLexicon load_lexicon() const;
    Corpus load_corpus_files() const;
    std::shared_ptr<ChatClient> make_client(
        const std::optional<std::filesystem::path>& cache_dir) const;
};

// Command implementations used by the CLI (and exercised directly in tests).
// Each returns a process exit code: 0 success, 1 per-cell failures recorded,
// 2 configuration error.

int cmd_ingest(const ExperimentConfig& config, const std::filesystem::path& out_dir,
               std::ostream& out);

int cmd_simulate(const ExperimentConfig& config, std::ostream& out);

int cmd_counterfact(const ExperimentConfig& config, std::ostream& out);

int cmd_annotate(const std::filesystem::path& labels_file, std::ostream& out);

int cmd_evaluate(const ExperimentConfig& config, const std::filesystem::path& run_dir,
                 const std::optional<std::filesystem::path>& alternate_run,
                 std::ostream& out);

int cmd_analyze(const ExperimentConfig& config, const std::filesystem::path& run_dir,
                const std::string& label, std::ostream& out);

int cmd_report(const ExperimentConfig& config, const std::filesystem::path& run_dir,
               const std::optional<std::filesystem::path>& alternate_run,
               std::ostream& out);

// Resolved run directory for a config (output_root / first 12 hash chars).
std::filesystem::path run_directory(const ExperimentConfig& config);

}  // namespace epsim
