#pragma once

#include "epsim/corpus.hpp"
#include "epsim/simulator_types.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace epsim {

// A scored grid cell.
using Cell = std::pair<std::string, std::string>;  // (mep_id, proposal_id)

struct ClassStats {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct F1Report {
    // Pooled over all repeats.
    std::map<VotePosition, ClassStats> per_class;
    double overall_weighted_f1 = 0.0;  // support-weighted mean of per_class f1
    std::size_t scored_cells = 0;      // predictions with ground truth

    // Per repeat, then averaged (the headline measure).
    std::vector<double> per_run_f1;
    double mean_weighted_f1 = 0.0;

    std::map<GroupCode, double> per_group_weighted_f1;
};

// Ground truth and grouping for scoring.
using TruthMap = std::map<Cell, VotePosition>;
using GroupingFn = std::function<GroupCode(const Cell&)>;

TruthMap truth_from_corpus(const Corpus& corpus);
GroupingFn grouping_from_corpus(const Corpus& corpus);

// Per-class F1 with 0/0 defined as 0; per-run weighted F1 averaged across
// repeats. Every scored prediction must have ground truth in
// {For, Against, Abstention}. Throws EmptyInput.
F1Report weighted_f1_report(const TruthMap& truth, const PredictionSet& predictions,
                            const GroupingFn& grouping);

// Fraction of (mep, proposal) cells whose repeat votes all agree; only cells
// with all repeats present are counted. Requires repeats >= 2.
double robustness(const PredictionSet& predictions);

struct GroupLineResult {
    std::optional<VotePosition> line;  // nullopt = NoLine
    bool tie = false;

    bool operator==(const GroupLineResult&) const = default;
};

// Plurality position over {For, Against, Abstention}. Ties break
// For > Against > Abstention (flagged); no countable votes means NoLine.
GroupLineResult group_line(const std::vector<VotePosition>& votes);

// Plurality with the group_line tie order, over non-DidNotVote votes.
// Requires at least one countable vote.
VotePosition majority_vote(const std::vector<VotePosition>& votes);

using LineMap = std::map<std::pair<GroupCode, std::string>, GroupLineResult>;

LineMap actual_group_lines(const Corpus& corpus);
LineMap predicted_group_lines(const PredictionSet& predictions, const Corpus& corpus);

// Fraction of shared (group, proposal) keys whose lines match; NoLine cells
// are dropped. With the flag set, cells whose actual line is Abstention are
// excluded from the denominator. Throws EmptyDenominator.
double group_line_accuracy(const LineMap& predicted, const LineMap& actual,
                           bool exclude_abstention_lines);

struct VoteObservation {
    std::string unit;  // national party name or group code
    std::string proposal_id;
    VotePosition position = VotePosition::DidNotVote;
};

enum class CohesionUnit { NationalParty, EuropeanGroup };

// Population variance of the 1/0.5/0 encoded votes per (unit, proposal),
// median over all cells; units with fewer than two voters on a proposal are
// skipped. Throws NoCells.
double cohesion_median_variance(const std::vector<VoteObservation>& observations);

std::vector<VoteObservation> cohesion_observations_from_corpus(const Corpus& corpus,
                                                               CohesionUnit unit);
// Uses the per-cell majority vote over repeats.
std::vector<VoteObservation> cohesion_observations_from_predictions(
    const PredictionSet& predictions, const Corpus& corpus, CohesionUnit unit);

struct FlipRates {
    double median_against_to_for_pct = 0.0;
    double median_for_to_against_pct = 0.0;
};

// Per-cell majority votes of both sets; per (group, proposal) the percentage
// of the group's scored cells transitioning, medianed over proposals. The
// committee filter restricts the proposal set. Throws GridMismatch when the
// two sets cover different cells.
std::map<GroupCode, FlipRates> flip_rates(
    const PredictionSet& baseline, const PredictionSet& alternate,
    const Corpus& corpus,
    const std::optional<std::set<std::string>>& committee_filter = std::nullopt);

// Constant predictor over the targeted grid (repeats = 1).
PredictionSet constant_baseline(const Corpus& corpus, VotePosition vote);

// Group spokesperson baseline: each group's first real speech in debate
// order sets the whole group's vote (InFavor -> For, Against -> Against,
// Neutral -> Abstention); NI members always vote For. Cells without a
// spokesperson or stance become logged failures.
PredictionSet spokesperson_baseline(
    const Corpus& corpus,
    const std::function<std::optional<Stance>(const Speech&)>& stance_of);

struct AnnotationMatrix {
    std::vector<std::string> item_ids;           // parallel to rows (may be empty)
    std::vector<std::vector<std::string>> rows;  // N items x k raters

    static AnnotationMatrix load_csv(const std::filesystem::path& file);
};

// Fleiss' kappa with the standard fixed-rater formulation; chance agreement
// from pooled category proportions. Throws DegenerateAgreement.
double fleiss_kappa(const AnnotationMatrix& matrix);

// Majority label per item (ties -> lexicographically smallest label).
std::vector<std::string> annotation_majorities(const AnnotationMatrix& matrix);

// Agreement of one vote vector with each group's actual line, ranked
// descending (stable by group enum order). Throws EmptyOverlap.
std::vector<std::pair<GroupCode, double>> bias_alignment(
    const std::map<std::string, VotePosition>& vote_vector, const LineMap& actual_lines);

}  // namespace epsim
