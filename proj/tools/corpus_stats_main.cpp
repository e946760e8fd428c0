#include "epsim/metrics.hpp"
#include "epsim/sample_data.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <vector>

// Prints the dataset-level statistics of the synthetic sample corpus.
// Used to verify the generator against its calibration targets.
int main() {
    using namespace epsim;
    const Corpus corpus = make_sample_corpus();

    std::size_t decisions = 0;
    for (const VoteRecord& v : corpus.votes())
        if (v.position != VotePosition::DidNotVote) ++decisions;
    std::printf("meps        %zu\n", corpus.meps().size());
    std::printf("proposals   %zu\n", corpus.proposals().size());
    std::printf("decisions   %zu\n", decisions);

    const auto dist = vote_distribution(corpus);
    std::printf("for         %.5f\n", dist.at(VotePosition::For));
    std::printf("against     %.5f\n", dist.at(VotePosition::Against));
    std::printf("abstention  %.5f\n", dist.at(VotePosition::Abstention));

    const TruthMap truth = truth_from_corpus(corpus);
    const GroupingFn grouping = grouping_from_corpus(corpus);
    const PredictionSet majority = constant_baseline(corpus, VotePosition::For);
    std::printf("majority_f1 %.5f\n",
                weighted_f1_report(truth, majority, grouping).overall_weighted_f1);

    std::printf("cohesion_party %.5f\n",
                cohesion_median_variance(cohesion_observations_from_corpus(
                    corpus, CohesionUnit::NationalParty)));
    std::printf("cohesion_group %.5f\n",
                cohesion_median_variance(cohesion_observations_from_corpus(
                    corpus, CohesionUnit::EuropeanGroup)));

    // Decile profile of per-cell variances, for generator calibration.
    for (CohesionUnit unit :
         {CohesionUnit::NationalParty, CohesionUnit::EuropeanGroup}) {
        const auto obs = cohesion_observations_from_corpus(corpus, unit);
        std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
        for (const auto& o : obs) {
            double x = o.position == VotePosition::For
                           ? 1.0
                           : (o.position == VotePosition::Abstention ? 0.5 : 0.0);
            cells[{o.unit, o.proposal_id}].push_back(x);
        }
        std::vector<double> vars;
        for (const auto& [key, values] : cells) {
            if (values.size() < 2) continue;
            double m = 0, m2 = 0;
            for (double v : values) { m += v; m2 += v * v; }
            const double n = static_cast<double>(values.size());
            vars.push_back(m2 / n - (m / n) * (m / n));
        }
        std::sort(vars.begin(), vars.end());
        std::printf("%s cells=%zu deciles:",
                    unit == CohesionUnit::NationalParty ? "party" : "group",
                    vars.size());
        for (int d = 1; d <= 9; ++d)
            std::printf(" %.3f", vars[vars.size() * static_cast<std::size_t>(d) / 10]);
        std::printf("\n");
    }
    return 0;
}
