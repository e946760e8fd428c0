#include "epsim/metrics.hpp"

#include "epsim/errors.hpp"
#include "epsim/util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace epsim {

namespace {

constexpr std::array<VotePosition, 3> kClasses = {
    VotePosition::For, VotePosition::Against, VotePosition::Abstention};

int class_index(VotePosition p) {
    switch (p) {
        case VotePosition::For: return 0;
        case VotePosition::Against: return 1;
        case VotePosition::Abstention: return 2;
        case VotePosition::DidNotVote: break;
    }
    throw EmptyInput("DID_NOT_VOTE is not a scoreable class");
}

using Confusion = std::array<std::array<std::size_t, 3>, 3>;  // [truth][pred]

Confusion operator+(const Confusion& a, const Confusion& b) {
    Confusion out{};
    for (int t = 0; t < 3; ++t)
        for (int p = 0; p < 3; ++p) out[t][p] = a[t][p] + b[t][p];
    return out;
}

struct ClassDerived {
    double precision, recall, f1;
    std::size_t support;
};

ClassDerived derive_class(const Confusion& m, int c) {
    std::size_t tp = m[c][c], truth_total = 0, pred_total = 0;
    for (int i = 0; i < 3; ++i) {
        truth_total += m[c][i];
        pred_total += m[i][c];
    }
    const double precision =
        pred_total ? static_cast<double>(tp) / static_cast<double>(pred_total) : 0.0;
    const double recall =
        truth_total ? static_cast<double>(tp) / static_cast<double>(truth_total) : 0.0;
    const double f1 =
        (precision + recall) > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    return {precision, recall, f1, truth_total};
}

double weighted_f1_of(const Confusion& m) {
    double weighted = 0.0;
    std::size_t total = 0;
    for (int c = 0; c < 3; ++c) {
        const ClassDerived d = derive_class(m, c);
        weighted += static_cast<double>(d.support) * d.f1;
        total += d.support;
    }
    if (total == 0) throw EmptyInput("empty confusion matrix");
    return weighted / static_cast<double>(total);
}

double median_of(std::vector<double> values) {
    if (values.empty()) throw NoCells("median of nothing");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double encode(VotePosition p) {
    switch (p) {
        case VotePosition::For: return 1.0;
        case VotePosition::Abstention: return 0.5;
        case VotePosition::Against: return 0.0;
        case VotePosition::DidNotVote: break;
    }
    throw NoCells("DID_NOT_VOTE has no numeric encoding");
}

}  // namespace

TruthMap truth_from_corpus(const Corpus& corpus) {
    TruthMap truth;
    for (const VoteRecord& v : corpus.votes()) {
        if (v.position == VotePosition::DidNotVote) continue;
        truth[{v.mep_id, v.proposal_id}] = v.position;
    }
    return truth;
}

GroupingFn grouping_from_corpus(const Corpus& corpus) {
    return [&corpus](const Cell& cell) {
        const Mep& mep = corpus.mep(cell.first);
        const Proposal& proposal = corpus.proposal(cell.second);
        return resolve_affiliation(mep, proposal.vote_date).group;
    };
}

F1Report weighted_f1_report(const TruthMap& truth, const PredictionSet& predictions,
                            const GroupingFn& grouping) {
    if (predictions.predictions.empty()) throw EmptyInput("no predictions to score");

    std::map<int, Confusion> per_run;
    std::map<GroupCode, std::map<int, Confusion>> per_group_run;

    for (const Prediction& p : predictions.predictions) {
        const Cell cell{p.mep_id, p.proposal_id};
        const auto t = truth.find(cell);
        if (t == truth.end())
            throw IntegrityError("prediction without ground truth: (" + p.mep_id +
                                 ", " + p.proposal_id + ")");
        const int ti = class_index(t->second);
        const int pi = class_index(p.vote);
        per_run[p.repeat][static_cast<std::size_t>(ti)][static_cast<std::size_t>(pi)]++;
        per_group_run[grouping(cell)][p.repeat][static_cast<std::size_t>(ti)]
                     [static_cast<std::size_t>(pi)]++;
    }

    Confusion pooled{};
    for (const auto& [run, confusion] : per_run) pooled = pooled + confusion;

    F1Report report;
    std::size_t total_support = 0;
    for (int c = 0; c < 3; ++c) {
        const ClassDerived d = derive_class(pooled, c);
        report.per_class[kClasses[static_cast<std::size_t>(c)]] =
            ClassStats{d.precision, d.recall, d.f1, d.support};
        report.overall_weighted_f1 += static_cast<double>(d.support) * d.f1;
        total_support += d.support;
    }
    report.overall_weighted_f1 /= static_cast<double>(total_support);
    report.scored_cells = total_support;

    for (const auto& [run, confusion] : per_run)
        report.per_run_f1.push_back(weighted_f1_of(confusion));
    double sum = 0.0;
    for (double f : report.per_run_f1) sum += f;
    report.mean_weighted_f1 = sum / static_cast<double>(report.per_run_f1.size());

    for (const auto& [group, runs] : per_group_run) {
        double group_sum = 0.0;
        for (const auto& [run, confusion] : runs) group_sum += weighted_f1_of(confusion);
        report.per_group_weighted_f1[group] =
            group_sum / static_cast<double>(runs.size());
    }

    return report;
}

double robustness(const PredictionSet& predictions) {
    const int repeats = predictions.repeats();
    if (repeats < 2)
        throw EmptyInput("robustness requires at least 2 repeats, manifest has " +
                         std::to_string(repeats));

    std::map<Cell, std::vector<VotePosition>> cells;
    for (const Prediction& p : predictions.predictions)
        cells[{p.mep_id, p.proposal_id}].push_back(p.vote);

    std::size_t complete = 0, stable = 0;
    for (const auto& [cell, votes] : cells) {
        if (votes.size() != static_cast<std::size_t>(repeats)) continue;
        ++complete;
        if (std::all_of(votes.begin(), votes.end(),
                        [&](VotePosition v) { return v == votes.front(); }))
            ++stable;
    }
    if (complete == 0) throw NoCompleteCells("no cell has all repeats present");
    return static_cast<double>(stable) / static_cast<double>(complete);
}

GroupLineResult group_line(const std::vector<VotePosition>& votes) {
    std::array<std::size_t, 3> counts{};
    for (VotePosition v : votes) {
        if (v == VotePosition::DidNotVote) continue;
        counts[static_cast<std::size_t>(class_index(v))]++;
    }
    if (counts[0] + counts[1] + counts[2] == 0) return {std::nullopt, false};

    // kClasses is already in the tie order For > Against > Abstention.
    std::size_t best = 0;
    for (std::size_t c = 1; c < 3; ++c)
        if (counts[c] > counts[best]) best = c;
    bool tie = false;
    for (std::size_t c = 0; c < 3; ++c)
        if (c != best && counts[c] == counts[best]) tie = true;
    return {kClasses[best], tie};
}

VotePosition majority_vote(const std::vector<VotePosition>& votes) {
    const GroupLineResult line = group_line(votes);
    if (!line.line) throw EmptyInput("majority of zero countable votes");
    return *line.line;
}

LineMap actual_group_lines(const Corpus& corpus) {
    std::map<std::pair<GroupCode, std::string>, std::vector<VotePosition>> buckets;
    for (const VoteRecord& v : corpus.votes()) {
        const Mep& mep = corpus.mep(v.mep_id);
        const Proposal& proposal = corpus.proposal(v.proposal_id);
        const GroupCode group = resolve_affiliation(mep, proposal.vote_date).group;
        buckets[{group, v.proposal_id}].push_back(v.position);
    }
    LineMap lines;
    for (const auto& [key, votes] : buckets) lines[key] = group_line(votes);
    return lines;
}

LineMap predicted_group_lines(const PredictionSet& predictions, const Corpus& corpus) {
    std::map<Cell, std::vector<VotePosition>> cells;
    for (const Prediction& p : predictions.predictions)
        cells[{p.mep_id, p.proposal_id}].push_back(p.vote);

    std::map<std::pair<GroupCode, std::string>, std::vector<VotePosition>> buckets;
    for (const auto& [cell, votes] : cells) {
        const Mep& mep = corpus.mep(cell.first);
        const Proposal& proposal = corpus.proposal(cell.second);
        const GroupCode group = resolve_affiliation(mep, proposal.vote_date).group;
        buckets[{group, cell.second}].push_back(majority_vote(votes));
    }
    LineMap lines;
    for (const auto& [key, votes] : buckets) lines[key] = group_line(votes);
    return lines;
}

double group_line_accuracy(const LineMap& predicted, const LineMap& actual,
                           bool exclude_abstention_lines) {
    std::size_t total = 0, matched = 0;
    for (const auto& [key, actual_line] : actual) {
        const auto pred_it = predicted.find(key);
        if (pred_it == predicted.end()) continue;
        if (!actual_line.line || !pred_it->second.line) continue;  // NoLine dropped
        if (exclude_abstention_lines && *actual_line.line == VotePosition::Abstention)
            continue;
        ++total;
        if (*actual_line.line == *pred_it->second.line) ++matched;
    }
    if (total == 0) throw EmptyDenominator("no comparable group lines");
    return static_cast<double>(matched) / static_cast<double>(total);
}

double cohesion_median_variance(const std::vector<VoteObservation>& observations) {
    std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
    for (const VoteObservation& o : observations) {
        if (o.position == VotePosition::DidNotVote) continue;
        cells[{o.unit, o.proposal_id}].push_back(encode(o.position));
    }
    std::vector<double> variances;
    for (const auto& [cell, values] : cells) {
        if (values.size() < 2) continue;
        double mean = 0.0, mean_sq = 0.0;
        for (double v : values) {
            mean += v;
            mean_sq += v * v;
        }
        const double n = static_cast<double>(values.size());
        mean /= n;
        mean_sq /= n;
        variances.push_back(mean_sq - mean * mean);
    }
    if (variances.empty()) throw NoCells("no (unit, proposal) cell has 2+ voters");
    return median_of(std::move(variances));
}

std::vector<VoteObservation> cohesion_observations_from_corpus(const Corpus& corpus,
                                                               CohesionUnit unit) {
    std::vector<VoteObservation> out;
    for (const VoteRecord& v : corpus.votes()) {
        if (v.position == VotePosition::DidNotVote) continue;
        const Mep& mep = corpus.mep(v.mep_id);
        const Proposal& proposal = corpus.proposal(v.proposal_id);
        const Affiliation& a = resolve_affiliation(mep, proposal.vote_date);
        out.push_back({unit == CohesionUnit::NationalParty ? a.national_party
                                                           : to_string(a.group),
                       v.proposal_id, v.position});
    }
    return out;
}

std::vector<VoteObservation> cohesion_observations_from_predictions(
    const PredictionSet& predictions, const Corpus& corpus, CohesionUnit unit) {
    std::map<Cell, std::vector<VotePosition>> cells;
    for (const Prediction& p : predictions.predictions)
        cells[{p.mep_id, p.proposal_id}].push_back(p.vote);
    std::vector<VoteObservation> out;
    for (const auto& [cell, votes] : cells) {
        const Mep& mep = corpus.mep(cell.first);
        const Proposal& proposal = corpus.proposal(cell.second);
        const Affiliation& a = resolve_affiliation(mep, proposal.vote_date);
        out.push_back({unit == CohesionUnit::NationalParty ? a.national_party
                                                           : to_string(a.group),
                       cell.second, majority_vote(votes)});
    }
    return out;
}

std::map<GroupCode, FlipRates> flip_rates(
    const PredictionSet& baseline, const PredictionSet& alternate, const Corpus& corpus,
    const std::optional<std::set<std::string>>& committee_filter) {
    auto cell_votes = [](const PredictionSet& set) {
        std::map<Cell, std::vector<VotePosition>> cells;
        for (const Prediction& p : set.predictions)
            cells[{p.mep_id, p.proposal_id}].push_back(p.vote);
        std::map<Cell, VotePosition> votes;
        for (const auto& [cell, vs] : cells) votes[cell] = majority_vote(vs);
        return votes;
    };

    const auto base_votes = cell_votes(baseline);
    const auto alt_votes = cell_votes(alternate);
    if (base_votes.size() != alt_votes.size())
        throw GridMismatch("prediction sets cover different grids");
    for (const auto& [cell, vote] : base_votes)
        if (!alt_votes.count(cell))
            throw GridMismatch("cell (" + cell.first + ", " + cell.second +
                               ") missing from alternate set");

    auto keep_proposal = [&](const std::string& proposal_id) {
        if (!committee_filter) return true;
        const Proposal& p = corpus.proposal(proposal_id);
        return std::any_of(p.committees.begin(), p.committees.end(),
                           [&](const std::string& c) {
                               return committee_filter->count(c) > 0;
                           });
    };

    struct CellCounts {
        std::size_t total = 0, against_to_for = 0, for_to_against = 0;
    };
    std::map<std::pair<GroupCode, std::string>, CellCounts> counts;
    for (const auto& [cell, base_vote] : base_votes) {
        if (!keep_proposal(cell.second)) continue;
        const Mep& mep = corpus.mep(cell.first);
        const Proposal& proposal = corpus.proposal(cell.second);
        const GroupCode group = resolve_affiliation(mep, proposal.vote_date).group;
        CellCounts& c = counts[{group, cell.second}];
        ++c.total;
        const VotePosition alt_vote = alt_votes.at(cell);
        if (base_vote == VotePosition::Against && alt_vote == VotePosition::For)
            ++c.against_to_for;
        if (base_vote == VotePosition::For && alt_vote == VotePosition::Against)
            ++c.for_to_against;
    }

    std::map<GroupCode, std::vector<double>> a2f, f2a;
    for (const auto& [key, c] : counts) {
        const double n = static_cast<double>(c.total);
        a2f[key.first].push_back(100.0 * static_cast<double>(c.against_to_for) / n);
        f2a[key.first].push_back(100.0 * static_cast<double>(c.for_to_against) / n);
    }

    std::map<GroupCode, FlipRates> result;
    for (const auto& [group, values] : a2f) {
        result[group] = FlipRates{median_of(values), median_of(f2a.at(group))};
    }
    return result;
}

PredictionSet constant_baseline(const Corpus& corpus, VotePosition vote) {
    if (vote == VotePosition::DidNotVote)
        throw EmptyInput("constant baseline cannot predict DID_NOT_VOTE");
    PredictionSet set;
    set.manifest = {{"baseline", "constant"},
                    {"vote", to_string(vote)},
                    {"repeats", 1}};
    for (const VoteRecord& v : corpus.votes()) {
        if (v.position == VotePosition::DidNotVote) continue;
        set.predictions.push_back({v.mep_id, v.proposal_id, 0, vote, std::nullopt, ""});
    }
    canonicalize(set);
    return set;
}

PredictionSet spokesperson_baseline(
    const Corpus& corpus,
    const std::function<std::optional<Stance>(const Speech&)>& stance_of) {
    // First real speech in debate order per (proposal, group).
    std::map<std::pair<std::string, GroupCode>, const Speech*> spokesperson;
    for (const auto& [pid, proposal] : corpus.proposals()) {
        for (const Speech* s : proposal.speeches_of(SpeechVariant::Real)) {
            if (!s->speaker_group) continue;
            auto key = std::pair(pid, *s->speaker_group);
            auto it = spokesperson.find(key);
            if (it == spokesperson.end() ||
                s->position_in_debate < it->second->position_in_debate)
                spokesperson[key] = s;
        }
    }

    PredictionSet set;
    set.manifest = {{"baseline", "spokesperson"}, {"repeats", 1}};
    for (const VoteRecord& v : corpus.votes()) {
        if (v.position == VotePosition::DidNotVote) continue;
        const Mep& mep = corpus.mep(v.mep_id);
        const Proposal& proposal = corpus.proposal(v.proposal_id);
        const GroupCode group = resolve_affiliation(mep, proposal.vote_date).group;

        if (group == GroupCode::Ni) {
            // No NI spokesperson exists; the baseline falls back to For.
            set.predictions.push_back(
                {v.mep_id, v.proposal_id, 0, VotePosition::For, std::nullopt, ""});
            continue;
        }
        const auto sp = spokesperson.find({v.proposal_id, group});
        if (sp == spokesperson.end()) {
            set.failures.push_back({v.mep_id, v.proposal_id, 0,
                                    "MissingSpokesperson: " + to_string(group) +
                                        " has no speech on " + v.proposal_id});
            continue;
        }
        const auto stance = stance_of(*sp->second);
        if (!stance) {
            set.failures.push_back({v.mep_id, v.proposal_id, 0,
                                    "MissingStance: spokesperson speech of " +
                                        to_string(group) + " on " + v.proposal_id});
            continue;
        }
        VotePosition vote = VotePosition::Against;
        if (*stance == Stance::InFavor) vote = VotePosition::For;
        if (*stance == Stance::Neutral) vote = VotePosition::Abstention;
        set.predictions.push_back({v.mep_id, v.proposal_id, 0, vote, std::nullopt, ""});
    }
    canonicalize(set);
    return set;
}

AnnotationMatrix AnnotationMatrix::load_csv(const std::filesystem::path& file) {
    std::istringstream in(read_file(file));
    std::string line;
    std::size_t lineno = 0;
    auto where = [&] { return file.string() + ":" + std::to_string(lineno); };

    if (!std::getline(in, line)) throw SchemaError(file.string() + ": empty file");
    ++lineno;
    if (line.rfind("# ", 0) != 0 || trim(line.substr(2)) != "epsim-annotations-v1")
        throw SchemaError(where() + ": expected schema line '# epsim-annotations-v1'");
    if (!std::getline(in, line)) throw SchemaError(file.string() + ": missing header");
    ++lineno;

    AnnotationMatrix matrix;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(trim(cur));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        fields.push_back(trim(cur));
        if (fields.size() < 3)
            throw SchemaError(where() + ": need an item id and at least 2 raters");
        std::vector<std::string> labels(fields.begin() + 1, fields.end());
        for (const std::string& label : labels)
            if (label.empty()) throw SchemaError(where() + ": empty label cell");
        if (width == 0)
            width = labels.size();
        else if (labels.size() != width)
            throw SchemaError(where() + ": ragged rater count");
        matrix.item_ids.push_back(fields.front());
        matrix.rows.push_back(std::move(labels));
    }
    if (matrix.rows.empty()) throw SchemaError(file.string() + ": no annotation rows");
    return matrix;
}

double fleiss_kappa(const AnnotationMatrix& matrix) {
    const std::size_t n_items = matrix.rows.size();
    if (n_items == 0) throw EmptyInput("empty annotation matrix");
    const std::size_t k = matrix.rows.front().size();
    if (k < 2) throw EmptyInput("fleiss kappa requires at least 2 raters");
    for (const auto& row : matrix.rows) {
        if (row.size() != k) throw EmptyInput("ragged annotation matrix");
        for (const std::string& label : row)
            if (label.empty()) throw EmptyInput("empty annotation cell");
    }

    std::map<std::string, double> pooled;
    double mean_agreement = 0.0;
    const double kd = static_cast<double>(k);
    for (const auto& row : matrix.rows) {
        std::map<std::string, std::size_t> counts;
        for (const std::string& label : row) ++counts[label];
        double sum_sq = 0.0;
        for (const auto& [label, count] : counts) {
            const double c = static_cast<double>(count);
            sum_sq += c * c;
            pooled[label] += c;
        }
        mean_agreement += (sum_sq - kd) / (kd * (kd - 1.0));
    }
    mean_agreement /= static_cast<double>(n_items);

    double chance = 0.0;
    const double total = static_cast<double>(n_items) * kd;
    for (const auto& [label, count] : pooled) {
        const double p = count / total;
        chance += p * p;
    }

    constexpr double kEps = 1e-12;
    if (1.0 - chance < kEps) {
        if (1.0 - mean_agreement < kEps) return 1.0;
        throw DegenerateAgreement("chance agreement is 1 without perfect agreement");
    }
    return (mean_agreement - chance) / (1.0 - chance);
}

std::vector<std::string> annotation_majorities(const AnnotationMatrix& matrix) {
    std::vector<std::string> out;
    for (const auto& row : matrix.rows) {
        std::map<std::string, std::size_t> counts;
        for (const std::string& label : row) ++counts[label];
        const std::string* best = nullptr;
        std::size_t best_count = 0;
        for (const auto& [label, count] : counts) {
            if (count > best_count) {  // map order makes ties lexicographic
                best = &label;
                best_count = count;
            }
        }
        out.push_back(*best);
    }
    return out;
}

std::vector<std::pair<GroupCode, double>> bias_alignment(
    const std::map<std::string, VotePosition>& vote_vector,
    const LineMap& actual_lines) {
    std::vector<std::pair<GroupCode, double>> result;
    for (GroupCode group : kAllGroups) {
        std::size_t total = 0, matched = 0;
        for (const auto& [key, line] : actual_lines) {
            if (key.first != group || !line.line) continue;
            const auto v = vote_vector.find(key.second);
            if (v == vote_vector.end()) continue;
            ++total;
            if (v->second == *line.line) ++matched;
        }
        if (total == 0) continue;
        result.emplace_back(group, static_cast<double>(matched) /
                                       static_cast<double>(total));
    }
    if (result.empty()) throw EmptyOverlap("vote vector shares no proposal with any line");
    std::stable_sort(result.begin(), result.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return result;
}

}  // namespace epsim
