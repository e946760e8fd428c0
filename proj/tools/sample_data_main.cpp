#include "epsim/sample_data.hpp"

#include <CLI11.hpp>

#include <iostream>

// Emits the bundled synthetic roll-call dataset (votes, MEPs, proposals,
// lexicon, sample annotations) so the pipeline can be exercised end to end
// without any external data or model.
int main(int argc, char** argv) {
    CLI::App app{"write the synthetic sample dataset"};
    std::string out_dir = "sample_data";
    std::uint64_t seed = epsim::kDefaultSampleSeed;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    try {
        epsim::write_sample_dataset(out_dir, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << "sample dataset written to " << out_dir << "\n";
    return 0;
}
