#include "epsim/cli.hpp"

#include "epsim/experiment.hpp"
#include "epsim/version.hpp"

#include <CLI11.hpp>

namespace epsim {

namespace {

// Shared config options. A config file provides the base; flags override.
struct ConfigArgs {
    std::string config_file;
    std::string votes, meps, proposals, lexicon;
    std::string persona, speeches, reasoning;
    std::string output_root, backend_kind, backend_script, base_url, model;
    int repeats = -1;
    double temperature = -1.0;
    std::int64_t seed = -1;
    int concurrency = -1;
    bool default_bias = false;
    bool all_votes = false;  // disable the key-vote filter

    void attach(CLI::App* app, bool with_run_flags) {
        app->add_option("--config", config_file, "experiment config file (JSON)");
        app->add_option("--votes", votes, "votes CSV");
        app->add_option("--meps", meps, "MEP file (JSON)");
        app->add_option("--proposals", proposals, "proposal/speech file (JSON)");
        app->add_option("--lexicon", lexicon, "anonymization lexicon (JSON)");
        app->add_flag("--all-votes", all_votes,
                      "keep proposals without a press release and debate");
        if (with_run_flags) {
            app->add_option("--persona", persona,
                            "attributes|wikipedia|name-only|name+<attr>");
            app->add_option("--reasoning", reasoning, "on|off");
            app->add_option("--speeches", speeches, "real|counterfactual");
            app->add_flag("--default-bias", default_bias,
                          "persona-free probe run");
            app->add_option("--repeats", repeats, "prompts per persona");
            app->add_option("--temperature", temperature, "sampling temperature");
            app->add_option("--seed", seed, "run seed (speech order)");
            app->add_option("--concurrency", concurrency, "max in-flight requests");
            app->add_option("--out", output_root, "output root directory");
            app->add_option("--backend", backend_kind, "mock|http");
            app->add_option("--mock-script", backend_script, "mock rule file");
            app->add_option("--base-url", base_url, "http backend base url");
            app->add_option("--model", model, "http backend model name");
        }
    }

    ExperimentConfig resolve() const {
        ExperimentConfig config;
        if (!config_file.empty()) config = ExperimentConfig::load(config_file);
        if (!votes.empty()) config.votes = votes;
        if (!meps.empty()) config.meps = meps;
        if (!proposals.empty()) config.proposals = proposals;
        if (!lexicon.empty()) config.lexicon_file = lexicon;
        if (all_votes) config.key_votes_only = false;
        if (!persona.empty()) config.persona = persona;
        if (!reasoning.empty()) {
            if (reasoning != "on" && reasoning != "off")
                throw ConfigError("--reasoning expects on|off");
            config.reasoning = reasoning == "on";
        }
        if (!speeches.empty()) config.speeches = speeches;
        if (default_bias) config.default_bias = true;
        if (repeats >= 0) config.repeats = repeats;
        if (temperature >= 0) config.temperature = temperature;
        if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
        if (concurrency >= 0) config.concurrency = concurrency;
        if (!output_root.empty()) config.output_root = output_root;
        if (!backend_kind.empty()) config.backend.kind = backend_kind;
        if (!backend_script.empty()) config.backend.script = backend_script;
        if (!base_url.empty()) config.backend.base_url = base_url;
        if (!model.empty()) config.backend.model = model;
        return config;
    }
};

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
    CLI::App app{"Persona-driven roll-call vote simulation harness"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    ConfigArgs ingest_args, simulate_args, counterfact_args, evaluate_args,
        analyze_args, report_args;
    std::string ingest_out, labels_file, run_dir, alternate_dir, analyze_label;

    CLI::App* ingest = app.add_subcommand("ingest", "validate and snapshot a corpus");
    ingest_args.attach(ingest, false);
    ingest->add_option("--out", ingest_out, "snapshot directory")->required();

    CLI::App* simulate = app.add_subcommand("simulate", "run the vote simulation");
    simulate_args.attach(simulate, true);

    CLI::App* counterfact = app.add_subcommand(
        "counterfact", "classify stances and generate counterfactual speeches");
    counterfact_args.attach(counterfact, true);

    CLI::App* annotate =
        app.add_subcommand("annotate", "score rater labels (majority + kappa)");
    annotate->add_option("--labels", labels_file, "annotation CSV")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "compute the metric report");
    evaluate_args.attach(evaluate, true);
    evaluate->add_option("--run", run_dir, "run directory")->required();
    evaluate->add_option("--alternate", alternate_dir,
                         "second run directory for flip rates");

    CLI::App* analyze =
        app.add_subcommand("analyze", "scan reasoning chains for attribute mentions");
    analyze_args.attach(analyze, true);
    analyze->add_option("--run", run_dir, "run directory")->required();
    analyze->add_option("--label", analyze_label, "row label for the mention table");

    CLI::App* report = app.add_subcommand("report", "emit plot-ready tabular data");
    report_args.attach(report, true);
    report->add_option("--run", run_dir, "run directory")->required();
    report->add_option("--alternate", alternate_dir,
                       "second run directory for the flip heatmap");

    std::vector<std::string> argv = args;
    std::reverse(argv.begin(), argv.end());  // CLI11 parses back to front
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_args.resolve(), ingest_out, out);
        if (simulate->parsed()) return cmd_simulate(simulate_args.resolve(), out);
        if (counterfact->parsed())
            return cmd_counterfact(counterfact_args.resolve(), out);
        if (annotate->parsed()) return cmd_annotate(labels_file, out);
        if (evaluate->parsed())
            return cmd_evaluate(
                evaluate_args.resolve(), run_dir,
                alternate_dir.empty()
                    ? std::nullopt
                    : std::optional<std::filesystem::path>(alternate_dir),
                out);
        if (analyze->parsed()) {
            std::string label = analyze_label;
            if (label.empty()) label = analyze_args.resolve().persona;
            return cmd_analyze(analyze_args.resolve(), run_dir, label, out);
        }
        if (report->parsed())
            return cmd_report(
                report_args.resolve(), run_dir,
                alternate_dir.empty()
                    ? std::nullopt
                    : std::optional<std::filesystem::path>(alternate_dir),
                out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace epsim
