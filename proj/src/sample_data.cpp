#include "epsim/sample_data.hpp"

#include "epsim/lexicons.hpp"
#include "epsim/metrics.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace epsim {

namespace {

// --- deterministic date arithmetic -----------------------------------------

// Howard Hinnant's days-from-civil algorithm.
long to_serial(Date d) {
    const int y = d.year - (d.month <= 2 ? 1 : 0);
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(d.month + (d.month > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d.day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

Date from_serial(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned month = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (month <= 2 ? 1 : 0)), static_cast<int>(month),
                static_cast<int>(day)};
}

Date add_days(Date d, long days) { return from_serial(to_serial(d) + days); }

// --- roster constants -------------------------------------------------------

struct GroupPlan {
    GroupCode code;
    int members;
    // Probabilities that a proposal's group line is For / Against (rest
    // abstention), loosely tracking each group's political lean.
    double p_line_for;
    double p_line_against;
};

constexpr std::array<GroupPlan, 8> kGroupPlans = {{
    {GroupCode::GueNgl, 37, 0.84, 0.11},
    {GroupCode::SD, 139, 0.97, 0.02},
    {GroupCode::GreensEfa, 72, 0.96, 0.03},
    {GroupCode::Renew, 102, 0.97, 0.02},
    {GroupCode::Epp, 176, 0.94, 0.045},
    {GroupCode::Ecr, 69, 0.72, 0.24},
    {GroupCode::Id, 49, 0.56, 0.32},
    {GroupCode::Ni, 66, 0.70, 0.25},
}};

// Party size sequences per group; each party belongs to one country.
const std::map<GroupCode, std::vector<int>>& party_sizes() {
    static const std::map<GroupCode, std::vector<int>> kSizes = {
        {GroupCode::Epp, {30, 24, 16, 13, 12, 10, 9, 8, 7, 6, 6, 5, 5,
                          4,  4,  3,  3,  3,  2,  2, 2, 2}},
        {GroupCode::SD,
         {21, 18, 14, 12, 10, 9, 8, 7, 6, 5, 5, 4, 4, 3, 3, 3, 2, 2, 2, 1}},
        {GroupCode::Renew, {15, 12, 10, 9, 8, 7, 6, 6, 5, 4, 4, 3, 3, 3, 2, 2, 2, 1}},
        {GroupCode::GreensEfa, {12, 10, 8, 7, 6, 5, 4, 4, 3, 3, 2, 2, 2, 2, 1, 1}},
        {GroupCode::Ecr, {16, 12, 9, 7, 5, 4, 4, 3, 3, 2, 2, 1, 1}},
        {GroupCode::Id, {14, 10, 8, 5, 4, 3, 2, 2, 1}},
        {GroupCode::GueNgl, {8, 6, 5, 4, 4, 3, 3, 2, 1, 1}},
        {GroupCode::Ni, {10, 8, 6, 5, 5, 4, 4, 3, 3, 3, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1}},
    };
    return kSizes;
}

const std::vector<std::string>& male_given_names() {
    static const std::vector<std::string> kNames = {
        "Andrej",  "Bart",    "Carlos",  "Dario",   "Emil",    "Filip",
        "Gunnar",  "Henrik",  "Ivo",     "Janusz",  "Koen",    "Luca",
        "Mateusz", "Nikolaos","Oskar",   "Pavel",   "Quentin", "Radu",
        "Sandor",  "Tomas",   "Urmas",   "Viktor",  "Wolfgang","Xavier",
        "Yannick", "Zoltan",  "Alvaro",  "Bruno",   "Cormac",  "Dimitri"};
    return kNames;
}

const std::vector<std::string>& female_given_names() {
    static const std::vector<std::string> kNames = {
        "Agnese",  "Beata",   "Clara",    "Daniela", "Elena",   "Franka",
        "Greta",   "Hanna",   "Ilona",    "Jolanta", "Katrin",  "Livia",
        "Marta",   "Nadia",   "Oona",     "Petra",   "Roberta", "Silvia",
        "Terezia", "Ulla",    "Vesna",    "Wanda",   "Ximena",  "Yvona",
        "Zofia",   "Amalia",  "Birgitta", "Celine",  "Doroteja","Evelin"};
    return kNames;
}

const std::vector<std::string>& surnames() {
    static const std::vector<std::string> kNames = {
        "Aalders",    "Babic",     "Carvallo",  "Dimitrov",  "Eriksen",
        "Ferrando",   "Gruber",    "Hartman",   "Ilves",     "Jankowski",
        "Kalnins",    "Laurent",   "Meyerink",  "Novak",     "Olsen",
        "Petrauskas", "Quirin",    "Rosselli",  "Sandoval",  "Tamm",
        "Urbanek",    "Vasquez",   "Wouters",   "Xirau",     "Ypsilanti",
        "Zelenka",    "Andersson", "Bergkamp",  "Cikanek",   "Dobrescu",
        "Egger",      "Fontaine",  "Galvao",    "Horvath",   "Ioannou",
        "Jurgens",    "Kowalczyk", "Lindqvist", "Moretti",   "Nieminen",
        "Oliveira",   "Pappas",    "Ramirez",   "Sorensen",  "Toth",
        "Ulmanis",    "Vandenberg","Wagner",    "Zaharia",   "Brandt"};
    return kNames;
}

const std::vector<std::string>& party_adjectives() {
    static const std::vector<std::string> kWords = {
        "Civic",    "United",   "National", "Progressive", "Democratic",
        "Free",     "Social",   "Popular",  "Modern",      "New",
        "Northern", "Southern", "Liberal",  "Sovereign",   "Future",
        "Open",     "Common",   "Coastal",  "Agrarian",    "Urban"};
    return kWords;
}

const std::vector<std::string>& party_nouns() {
    static const std::vector<std::string> kWords = {
        "Alliance", "Platform", "Movement", "Union",  "Initiative",
        "Forum",    "League",   "Assembly", "Front",  "Coalition",
        "Bloc",     "Voice",    "Current",  "Accord", "Wave"};
    return kWords;
}

const std::vector<std::string>& birth_cities() {
    static const std::vector<std::string> kCities = {
        "Vienna",    "Brussels", "Sofia",     "Zagreb",   "Nicosia",
        "Prague",    "Copenhagen","Tallinn",  "Helsinki", "Lyon",
        "Hamburg",   "Athens",   "Debrecen",  "Cork",     "Turin",
        "Riga",      "Vilnius",  "Esch",      "Valletta", "Utrecht",
        "Krakow",    "Porto",    "Cluj",      "Kosice",   "Maribor",
        "Valencia",  "Gothenburg"};
    return kCities;
}

// The 47 key proposals of the reference corpus and the committees that
// initiated them (public roll-call metadata).
struct ProposalPlan {
    const char* title;
    std::vector<const char*> committees;
};

const std::vector<ProposalPlan>& proposal_plans() {
    static const std::vector<ProposalPlan> kPlans = {
        {"Ambient air quality and cleaner air for Europe. Recast",
         {"Environment, Public Health and Food Safety"}},
        {"Artificial Intelligence Act",
         {"Civil Liberties, Justice and Home Affairs",
          "Internal Market and Consumer Protection"}},
        {"Authorisation and supervision of medicinal products for human use and "
         "governing rules for the European Medicines Agency",
         {"Environment, Public Health and Food Safety"}},
        {"Combating violence against women and domestic violence",
         {"Civil Liberties, Justice and Home Affairs",
          "Women's Rights and Gender Equality"}},
        {"Common rules promoting the repair of goods",
         {"Internal Market and Consumer Protection"}},
        {"Cyber Resilience Act", {"Industry, Research and Energy"}},
        {"Data collection and sharing relating to short-term accommodation rental "
         "services",
         {"Internal Market and Consumer Protection"}},
        {"Deepening EU integration in view of future enlargement",
         {"Constitutional Affairs", "Foreign Affairs"}},
        {"Definition of criminal offences and penalties for the violation of Union "
         "restrictive measures",
         {"Civil Liberties, Justice and Home Affairs"}},
        {"Driving licences", {"Transport and Tourism"}},
        {"Ecodesign for Sustainable Products Regulation",
         {"Environment, Public Health and Food Safety"}},
        {"Economic governance: requirements for budgetary frameworks of the Member "
         "States",
         {"Economic and Monetary Affairs"}},
        {"Empowering consumers for the green transition",
         {"Internal Market and Consumer Protection"}},
        {"Energy Charter Treaty: withdrawal of the Union",
         {"Industry, Research and Energy", "International Trade"}},
        {"Energy performance of buildings", {"Industry, Research and Energy"}},
        {"Establishing the Strategic Technologies for Europe Platform ('STEP')",
         {"Budgets", "Industry, Research and Energy"}},
        {"Establishing the Ukraine Facility", {"Budgets", "Foreign Affairs"}},
        {"European Digital Identity framework", {"Industry, Research and Energy"}},
        {"European Health Data Space",
         {"Civil Liberties, Justice and Home Affairs",
          "Environment, Public Health and Food Safety"}},
        {"Extending the list of EU crimes to hate speech and hate crime",
         {"Civil Liberties, Justice and Home Affairs"}},
        {"Fluorinated gases regulation",
         {"Environment, Public Health and Food Safety"}},
        {"Framework of measures for strengthening Europe's net-zero technology "
         "products manufacturing ecosystem (Net Zero Industry Act)",
         {"Industry, Research and Energy"}},
        {"Geographical Indications for wine, spirit drinks and agricultural "
         "products",
         {"Agriculture and Rural Development"}},
        {"Inclusion of the right to abortion in the EU Charter of Fundamental "
         "Rights",
         {"Women's Rights and Gender Equality"}},
        {"Instant payments in euro", {"Economic and Monetary Affairs"}},
        {"Limit values for lead and its inorganic compounds and diisocyanates",
         {"Employment and Social Affairs"}},
        {"Methane emissions reduction in the energy sector",
         {"Environment, Public Health and Food Safety",
          "Industry, Research and Energy"}},
        {"Nature restoration", {"Environment, Public Health and Food Safety"}},
        {"Ozone depleting substances",
         {"Environment, Public Health and Food Safety"}},
        {"Packaging and packaging waste",
         {"Environment, Public Health and Food Safety"}},
        {"Plants obtained by certain new genomic techniques and their food and "
         "feed",
         {"Environment, Public Health and Food Safety"}},
        {"Preventing and combating trafficking in human beings and protecting its "
         "victims",
         {"Civil Liberties, Justice and Home Affairs",
          "Women's Rights and Gender Equality"}},
        {"Prevention of the use of the financial system for the purposes of money "
         "laundering or terrorist financing",
         {"Civil Liberties, Justice and Home Affairs",
          "Economic and Monetary Affairs"}},
        {"Prohibiting products made with forced labour on the Union market",
         {"Internal Market and Consumer Protection", "International Trade"}},
        {"Report on the Commission's 2023 Rule of Law report",
         {"Civil Liberties, Justice and Home Affairs"}},
        {"Resolution on ongoing hearings under Article 7(1) TEU regarding Hungary "
         "to strengthen the rule of law and its budgetary implications",
         {"Budgets", "Constitutional Affairs"}},
        {"Resolution on the situation in Hungary and frozen EU funds",
         {"Budgets", "Constitutional Affairs"}},
        {"Shipments of waste", {"Environment, Public Health and Food Safety"}},
        {"Single Permit Directive. Recast",
         {"Civil Liberties, Justice and Home Affairs"}},
        {"Situation of fundamental rights in the European Union - annual report "
         "2022 and 2023",
         {"Civil Liberties, Justice and Home Affairs"}},
        {"Strengthening the CO2 emission performance targets for new heavy-duty "
         "vehicles",
         {"Environment, Public Health and Food Safety"}},
        {"Substantiation and communication of explicit environmental claims (Green "
         "Claims Directive)",
         {"Internal Market and Consumer Protection",
          "Environment, Public Health and Food Safety"}},
        {"Type-approval of motor vehicles and engines with respect to their "
         "emissions and battery durability (Euro 7)",
         {"Environment, Public Health and Food Safety"}},
        {"Union certification framework for carbon removals",
         {"Environment, Public Health and Food Safety"}},
        {"Union-wide effect of certain driving disqualifications",
         {"Transport and Tourism"}},
        {"Urban wastewater treatment. Recast",
         {"Environment, Public Health and Food Safety"}},
        {"Wholesale energy market: Union's protection against market manipulation",
         {"Industry, Research and Energy"}},
    };
    return kPlans;
}

// --- vote engineering knobs --------------------------------------------------
//
// Calibrated so that the assembled corpus reproduces the reference
// dataset-level statistics: 76.7/17.0/6.3 class split, and median
// within-(unit, proposal) vote variance of about 0.13 for national parties
// and 0.10 for European groups under the 1/0.5/0 encoding.

constexpr int kTotalPairs = 710 * 47;
constexpr int kTargetDecisions = 27770;
constexpr int kTargetFor = 21300;
constexpr int kTargetAgainst = 4720;
constexpr int kTargetAbstention = kTargetDecisions - kTargetFor - kTargetAgainst;

// Probability that a party "breaks" (shows internal dissent) on a proposal,
// by party size class. Small parties break often but carry little weight,
// which keeps party-level cell variance above group-level cell variance.
// Share of (group, proposal) cells that stay near-unanimous; the rest carry
// visible dissent. The split drives the group-level variance median.
constexpr double kQuietCellProbability = 0.40;

double break_probability(int present) {
    if (present <= 6) return 0.92;
    if (present <= 12) return 0.70;
    return 0.30;
}

// Dissent intensity scale by party size: large delegations dampen their
// dissent share, which keeps group-level variance below party-level variance.
double intensity_scale(int present) {
    if (present <= 6) return 1.0;
    if (present <= 12) return 0.85;
    return 0.30;
}

struct DissentLevel {
    double off_line;   // share of members leaving the line to the opposite pole
    double third_way;  // share leaving to the remaining position
};

DissentLevel draw_dissent(SplitMix64& rng) {
    const double u = rng.unit();
    if (u < 0.35) return {0.10, 0.035};
    if (u < 0.65) return {0.15, 0.050};
    if (u < 0.85) return {0.20, 0.067};
    return {0.28, 0.093};
}

// Whole-party defection cells (between-party splits) as a small garnish.
constexpr double kBetweenCellProbability = 0.03;

int stochastic_round(double x, SplitMix64& rng) {
    const double floor_x = std::floor(x);
    return static_cast<int>(floor_x) + (rng.unit() < (x - floor_x) ? 1 : 0);
}

}  // namespace

const char* group_long_name(GroupCode group) {
    switch (group) {
        case GroupCode::GueNgl: return "The Left group in the European Parliament";
        case GroupCode::SD:
            return "Group of the Progressive Alliance of Socialists and Democrats "
                   "in the European Parliament";
        case GroupCode::GreensEfa: return "Group of the Greens/European Free Alliance";
        case GroupCode::Renew: return "Renew Europe Group";
        case GroupCode::Epp: return "Group of the European People's Party";
        case GroupCode::Ecr: return "European Conservatives and Reformists Group";
        case GroupCode::Id: return "Identity and Democracy Group";
        case GroupCode::Ni: return "Non-attached Members";
    }
    return "?";
}

SampleParts make_sample_parts(std::uint64_t seed) {
    SplitMix64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x517cc1b727220a95ULL);
    SampleParts parts;

    const Date term_start{2019, 7, 2};
    const Date first_vote{2024, 1, 16};
    const Date switch_date{2024, 3, 5};

    // ---- parties & MEPs -----------------------------------------------------
    struct PartyInfo {
        std::string name;
        GroupCode group;
        std::string country;
        std::vector<int> member_indexes;  // into parts.meps
    };
    std::vector<PartyInfo> parties;

    std::vector<std::string> countries;
    for (const auto& [country, words] : country_lexicon()) countries.push_back(country);

    std::size_t adjective_index = 0, noun_index = 0, country_index = 0;
    auto next_party_name = [&] {
        const std::string name = party_adjectives()[adjective_index] + " " +
                                 party_nouns()[noun_index];
        adjective_index = (adjective_index + 1) % party_adjectives().size();
        if (adjective_index == 0) noun_index = (noun_index + 1) % party_nouns().size();
        return name;
    };

    int mep_counter = 0;
    std::map<GroupCode, std::vector<int>> group_parties;
    for (const GroupPlan& plan : kGroupPlans) {
        for (int size : party_sizes().at(plan.code)) {
            PartyInfo party;
            party.name = next_party_name();
            party.group = plan.code;
            party.country = countries[country_index];
            country_index = (country_index + 1) % countries.size();
            const int party_index = static_cast<int>(parties.size());
            group_parties[plan.code].push_back(party_index);

            for (int m = 0; m < size; ++m) {
                Mep mep;
                mep.id = "mep" + std::to_string(1000 + mep_counter);
                mep.gender = rng.unit() < 0.40 ? Gender::Female : Gender::Male;
                const auto& givens = mep.gender == Gender::Female
                                         ? female_given_names()
                                         : male_given_names();
                mep.full_name = givens[rng.bounded(givens.size())] + " " +
                                surnames()[rng.bounded(surnames().size())];
                // De-duplicate by appending a middle initial when needed.
                mep.full_name += " " +
                                 std::string(1, static_cast<char>('A' + mep_counter % 26)) +
                                 ".";
                mep.birth_date = Date{1950 + static_cast<int>(rng.bounded(45)),
                                      1 + static_cast<int>(rng.bounded(12)),
                                      1 + static_cast<int>(rng.bounded(28))};
                mep.birthplace = birth_cities()[rng.bounded(birth_cities().size())];
                mep.country = party.country;
                mep.affiliations.push_back(
                    {party.name, party.group, term_start, std::nullopt});
                mep.wikipedia_article =
                    mep.full_name + " is a politician from " + mep.country +
                    " serving in the European Parliament. Born in " + mep.birthplace +
                    ", they joined the " + party.name +
                    " and have worked on committee files since " +
                    std::to_string(2004 + rng.bounded(16)) + ".";
                party.member_indexes.push_back(mep_counter);
                parts.meps.push_back(std::move(mep));
                ++mep_counter;
            }
            parties.push_back(std::move(party));
        }
    }

    // ---- affiliation switchers ----------------------------------------------
    // A few members change national party (and sometimes group) mid-term; the
    // old interval closes at the switch date, the new one opens on it.
    struct SwitchPlan {
        GroupCode from;
        GroupCode to;
    };
    const std::vector<SwitchPlan> switch_plans = {
        {GroupCode::Epp, GroupCode::Epp},     {GroupCode::SD, GroupCode::SD},
        {GroupCode::Renew, GroupCode::Renew}, {GroupCode::Ecr, GroupCode::Ecr},
        {GroupCode::Epp, GroupCode::Ecr},     {GroupCode::SD, GroupCode::Ni},
        {GroupCode::Renew, GroupCode::Epp},   {GroupCode::Id, GroupCode::Ni},
    };
    for (std::size_t s = 0; s < switch_plans.size(); ++s) {
        const SwitchPlan& plan = switch_plans[s];
        // Move the (s+1)-th member of the source group's largest party.
        const PartyInfo& from_party = parties[static_cast<std::size_t>(
            group_parties.at(plan.from).front())];
        const int mep_index =
            from_party.member_indexes[(s + 1) % from_party.member_indexes.size()];
        // Land in the target group's second party (or first if only one).
        const auto& targets = group_parties.at(plan.to);
        const PartyInfo& to_party =
            parties[static_cast<std::size_t>(targets[targets.size() > 1 ? 1 : 0])];
        if (to_party.name == from_party.name) continue;
        Mep& mep = parts.meps[static_cast<std::size_t>(mep_index)];
        mep.affiliations.clear();
        mep.affiliations.push_back(
            {from_party.name, from_party.group, term_start, switch_date});
        mep.affiliations.push_back(
            {to_party.name, to_party.group, switch_date, std::nullopt});
    }

    auto affiliation_at = [&](int mep_index, Date date) -> const Affiliation& {
        for (const Affiliation& a : parts.meps[static_cast<std::size_t>(mep_index)].affiliations)
            if (a.contains(date)) return a;
        return parts.meps[static_cast<std::size_t>(mep_index)].affiliations.back();
    };

    // ---- proposals ------------------------------------------------------------
    const auto& plans = proposal_plans();
    std::vector<Date> vote_dates;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        // Spread the 47 votes over the session days of early 2024.
        vote_dates.push_back(add_days(first_vote, static_cast<long>(i * 100 / 47 + i)));
    }
    for (std::size_t i = 0; i < plans.size(); ++i) {
        Proposal p;
        p.id = "p" + std::to_string(i + 1);
        p.title = plans[i].title;
        p.vote_date = vote_dates[i];
        for (const char* c : plans[i].committees) p.committees.insert(c);
        p.has_press_release = true;
        p.has_dedicated_debate = true;
        parts.proposals.push_back(std::move(p));
    }

    // ---- absences ---------------------------------------------------------------
    // Exactly 5,600 of the 33,370 (MEP, proposal) pairs are DID_NOT_VOTE,
    // leaving the 27,770 scored decisions.
    std::vector<std::uint8_t> absent(kTotalPairs, 0);
    int marked = 0;
    for (int i = 0; i < kTotalPairs; ++i) {
        if (rng.unit() < static_cast<double>(kTotalPairs - kTargetDecisions) /
                             static_cast<double>(kTotalPairs)) {
            absent[static_cast<std::size_t>(i)] = 1;
            ++marked;
        }
    }
    while (marked != kTotalPairs - kTargetDecisions) {
        const int i = static_cast<int>(rng.bounded(kTotalPairs));
        if (marked < kTotalPairs - kTargetDecisions && !absent[static_cast<std::size_t>(i)]) {
            absent[static_cast<std::size_t>(i)] = 1;
            ++marked;
        } else if (marked > kTotalPairs - kTargetDecisions &&
                   absent[static_cast<std::size_t>(i)]) {
            absent[static_cast<std::size_t>(i)] = 0;
            --marked;
        }
    }
    auto pair_index = [&](int mep_index, std::size_t proposal_index) {
        return mep_index * 47 + static_cast<int>(proposal_index);
    };

    // ---- vote engineering ----------------------------------------------------
    // Counts per (party cell): first choose group lines and per-party dissent,
    // then nudge counts onto the exact class totals, then materialize.
    struct CellCounts {
        std::size_t proposal_index;
        std::vector<int> member_indexes;  // present members
        int n_for = 0, n_against = 0, n_abstain = 0;
        bool broken = false;
    };
    std::vector<CellCounts> cells;

    for (std::size_t pi = 0; pi < parts.proposals.size(); ++pi) {
        const Date date = parts.proposals[pi].vote_date;

        // Present members per (group, party) at this date.
        std::map<GroupCode, std::map<std::string, std::vector<int>>> roster;
        for (int mi = 0; mi < mep_counter; ++mi) {
            if (absent[static_cast<std::size_t>(pair_index(mi, pi))]) continue;
            const Affiliation& a = affiliation_at(mi, date);
            roster[a.group][a.national_party].push_back(mi);
        }

        for (const GroupPlan& plan : kGroupPlans) {
            const auto group_it = roster.find(plan.code);
            if (group_it == roster.end()) continue;

            const double u = rng.unit();
            const VotePosition line =
                u < plan.p_line_for
                    ? VotePosition::For
                    : (u < plan.p_line_for + plan.p_line_against
                           ? VotePosition::Against
                           : VotePosition::Abstention);
            const bool between_cell = rng.unit() < kBetweenCellProbability;
            const bool quiet_cell = rng.unit() < kQuietCellProbability;

            // Quiet cells: near-unanimous group, except one or two smallish
            // parties each fielding a single defector to the opposite pole.
            std::set<std::string> quiet_defectors;
            if (quiet_cell) {
                std::vector<const std::string*> eligible;
                for (const auto& [party_name, members] : group_it->second)
                    if (members.size() >= 2 && members.size() <= 6)
                        eligible.push_back(&party_name);
                std::size_t defector_count = 1 + rng.bounded(2);
                if (group_it->second.size() >= 12) defector_count += 1 + rng.bounded(2);
                for (std::size_t d = 0; d < defector_count && !eligible.empty(); ++d) {
                    const std::size_t pick = rng.bounded(eligible.size());
                    quiet_defectors.insert(*eligible[pick]);
                    eligible.erase(eligible.begin() + static_cast<long>(pick));
                }
            }

            for (const auto& [party_name, members] : group_it->second) {
                CellCounts cell;
                cell.proposal_index = pi;
                cell.member_indexes = members;
                const int n = static_cast<int>(members.size());

                const VotePosition opposite = line == VotePosition::Against
                                                  ? VotePosition::For
                                                  : VotePosition::Against;
                auto assign = [&](VotePosition pos, int count) {
                    if (pos == VotePosition::For) cell.n_for += count;
                    if (pos == VotePosition::Against) cell.n_against += count;
                    if (pos == VotePosition::Abstention) cell.n_abstain += count;
                };

                if (quiet_cell) {
                    if (quiet_defectors.count(party_name)) {
                        cell.broken = true;
                        assign(line, n - 1);
                        assign(opposite, 1);
                    } else {
                        assign(line, n);
                    }
                    cells.push_back(std::move(cell));
                    continue;
                }

                if (between_cell && rng.unit() < 0.30) {
                    // Whole party defects to the opposite pole.
                    assign(opposite, n);
                    cells.push_back(std::move(cell));
                    continue;
                }

                if (rng.unit() >= break_probability(n)) {
                    assign(line, n);  // party holds the line
                    cells.push_back(std::move(cell));
                    continue;
                }

                cell.broken = true;
                DissentLevel level = draw_dissent(rng);
                level.off_line *= intensity_scale(n);
                level.third_way *= intensity_scale(n);
                if (line == VotePosition::Abstention) {
                    // Abstaining groups bleed toward both poles.
                    int to_for = stochastic_round(level.off_line * 0.5 * n, rng);
                    int to_against = stochastic_round(level.off_line * 0.5 * n, rng);
                    if (to_for + to_against > n) to_against = n - to_for;
                    cell.n_for = to_for;
                    cell.n_against = to_against;
                    cell.n_abstain = n - to_for - to_against;
                } else {
                    int off = stochastic_round(level.off_line * n, rng);
                    int third = stochastic_round(level.third_way * n, rng);
                    // Small broken parties always split toward the opposite
                    // pole; otherwise their cells collapse back to variance 0.
                    if (n <= 4) {
                        off = std::max(1, off);
                        third = 0;
                    } else if (n <= 8) {
                        off = std::max(1, off);
                    }
                    if (off > n) off = n;
                    if (off + third > n) third = n - off;
                    assign(line, n - off - third);
                    assign(opposite, off);
                    assign(VotePosition::Abstention, third);
                }
                cells.push_back(std::move(cell));
            }
        }
    }

    // ---- exact class totals -----------------------------------------------------
    long total_for = 0, total_against = 0, total_abstain = 0;
    for (const CellCounts& c : cells) {
        total_for += c.n_for;
        total_against += c.n_against;
        total_abstain += c.n_abstain;
    }
    long d_for = kTargetFor - total_for;
    long d_against = kTargetAgainst - total_against;
    long d_abstain = kTargetAbstention - total_abstain;

    // Shift single votes inside already-mixed cells until the totals match.
    auto shift = [&](CellCounts& c, long& from_delta, long& to_delta, int& from_count,
                     int& to_count) {
        if (from_delta < 0 && to_delta > 0 && from_count >= 2) {
            --from_count;
            ++to_count;
            ++from_delta;
            --to_delta;
            return true;
        }
        return false;
    };
    for (int pass = 0; pass < 64 && (d_for || d_against || d_abstain); ++pass) {
        for (CellCounts& c : cells) {
            if (!d_for && !d_against && !d_abstain) break;
            if (!c.broken || c.member_indexes.size() < 3) continue;
            shift(c, d_for, d_against, c.n_for, c.n_against);
            shift(c, d_for, d_abstain, c.n_for, c.n_abstain);
            shift(c, d_against, d_for, c.n_against, c.n_for);
            shift(c, d_against, d_abstain, c.n_against, c.n_abstain);
            shift(c, d_abstain, d_for, c.n_abstain, c.n_for);
            shift(c, d_abstain, d_against, c.n_abstain, c.n_against);
        }
    }

    // ---- materialize votes ---------------------------------------------------
    std::vector<std::vector<VotePosition>> positions(
        static_cast<std::size_t>(mep_counter),
        std::vector<VotePosition>(parts.proposals.size(), VotePosition::DidNotVote));
    for (CellCounts& c : cells) {
        std::vector<int> order = c.member_indexes;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.bounded(i)]);
        std::size_t k = 0;
        for (int i = 0; i < c.n_for; ++i)
            positions[static_cast<std::size_t>(order[k++])][c.proposal_index] =
                VotePosition::For;
        for (int i = 0; i < c.n_against; ++i)
            positions[static_cast<std::size_t>(order[k++])][c.proposal_index] =
                VotePosition::Against;
        for (int i = 0; i < c.n_abstain; ++i)
            positions[static_cast<std::size_t>(order[k++])][c.proposal_index] =
                VotePosition::Abstention;
        // Any remainder from clamping stays on the line... there is none: the
        // counts always sum to the present membership.
    }

    for (int mi = 0; mi < mep_counter; ++mi) {
        for (std::size_t pi = 0; pi < parts.proposals.size(); ++pi) {
            VoteRecord v;
            v.mep_id = parts.meps[static_cast<std::size_t>(mi)].id;
            v.proposal_id = parts.proposals[pi].id;
            v.position = positions[static_cast<std::size_t>(mi)][pi];
            parts.votes.push_back(std::move(v));
        }
    }

    // ---- speeches ----------------------------------------------------------------
    // One speech per group (the Non-Inscrits have no spokesperson), stance
    // following the group line, with names/groups/parties woven in so the
    // anonymizer has real work to do.
    std::map<std::pair<std::size_t, GroupCode>, VotePosition> group_lines;
    {
        std::map<std::pair<std::size_t, GroupCode>, std::vector<VotePosition>> bucket;
        for (int mi = 0; mi < mep_counter; ++mi)
            for (std::size_t pi = 0; pi < parts.proposals.size(); ++pi) {
                if (positions[static_cast<std::size_t>(mi)][pi] == VotePosition::DidNotVote)
                    continue;
                const Affiliation& a =
                    affiliation_at(mi, parts.proposals[pi].vote_date);
                bucket[{pi, a.group}].push_back(positions[static_cast<std::size_t>(mi)][pi]);
            }
        for (const auto& [key, votes] : bucket) {
            const GroupLineResult line = group_line(votes);
            if (line.line) group_lines[key] = *line.line;
        }
    }

    for (std::size_t pi = 0; pi < parts.proposals.size(); ++pi) {
        Proposal& proposal = parts.proposals[pi];
        std::vector<GroupCode> speaking;
        for (const GroupPlan& plan : kGroupPlans)
            if (plan.code != GroupCode::Ni) speaking.push_back(plan.code);
        for (std::size_t i = speaking.size(); i > 1; --i)
            std::swap(speaking[i - 1], speaking[rng.bounded(i)]);

        for (std::size_t pos = 0; pos < speaking.size(); ++pos) {
            const GroupCode group = speaking[pos];
            const PartyInfo& party =
                parties[static_cast<std::size_t>(group_parties.at(group).front())];
            const Mep& speaker =
                parts.meps[static_cast<std::size_t>(party.member_indexes.front())];
            const Mep& colleague = parts.meps[static_cast<std::size_t>(
                party.member_indexes[1 % party.member_indexes.size()])];

            const VotePosition line =
                group_lines.count({pi, group}) ? group_lines.at({pi, group})
                                               : VotePosition::For;
            std::string stance_text;
            Stance stance_label = Stance::InFavor;
            if (line == VotePosition::For) {
                stance_text =
                    "We welcome this text and will support it. It strengthens the "
                    "position of citizens across the Union and deserves a broad "
                    "majority.";
                stance_label = Stance::InFavor;
            } else if (line == VotePosition::Against) {
                stance_text =
                    "We cannot support this text. It imposes burdens without "
                    "solving the underlying problem, and we will vote it down.";
                stance_label = Stance::Against;
            } else {
                stance_text =
                    "This text leaves too many questions open for our delegation "
                    "to commit either way at this stage.";
                stance_label = Stance::Neutral;
            }

            Speech speech;
            speech.proposal_id = proposal.id;
            speech.speaker_name = speaker.full_name;
            speech.speaker_group = group;
            speech.position_in_debate = static_cast<int>(pos);
            speech.variant = SpeechVariant::Real;
            speech.stance_label = stance_label;
            speech.text =
                "Madam President, speaking for the " +
                std::string(group_long_name(group)) + " on " + proposal.title +
                ": " + stance_text + " My colleague " + colleague.full_name +
                " of the " + party.name +
                " has worked on this file from the start, and the " +
                to_string(group) + " position reflects that work.";
            proposal.speeches.push_back(std::move(speech));
        }
    }

    // ---- two non-key proposals (dropped by the key-vote filter) -------------------
    for (int extra = 0; extra < 2; ++extra) {
        Proposal p;
        p.id = "px" + std::to_string(extra + 1);
        p.title = extra == 0 ? "Adjustment of technical annexes (procedural)"
                             : "Discharge for the 2022 budget: follow-up note";
        p.vote_date = add_days(first_vote, 30 + extra);
        p.committees.insert("Budgets");
        p.has_press_release = extra == 1;
        p.has_dedicated_debate = false;
        for (int s = 0; s < 2; ++s) {
            Speech speech;
            speech.proposal_id = p.id;
            speech.speaker_name = parts.meps[static_cast<std::size_t>(s)].full_name;
            speech.speaker_group = GroupCode::Epp;
            speech.position_in_debate = s;
            speech.variant = SpeechVariant::Real;
            speech.text = "A short procedural remark on " + p.title + ".";
            p.speeches.push_back(std::move(speech));
        }
        for (int mi = 0; mi < 100; ++mi) {
            VoteRecord v;
            v.mep_id = parts.meps[static_cast<std::size_t>(mi)].id;
            v.proposal_id = p.id;
            v.position = mi % 9 == 0 ? VotePosition::Against : VotePosition::For;
            parts.votes.push_back(std::move(v));
        }
        parts.proposals.push_back(std::move(p));
    }

    // ---- anonymization lexicon -----------------------------------------------
    parts.lexicon = AnonymizationLexicon::with_default_groups();
    for (const Mep& mep : parts.meps) parts.lexicon.politician_names.insert(mep.full_name);
    for (const PartyInfo& party : parties) parts.lexicon.party_names.insert(party.name);

    return parts;
}

Corpus make_sample_corpus(std::uint64_t seed, bool key_votes_only) {
    SampleParts parts = make_sample_parts(seed);
    return make_corpus(std::move(parts.meps), std::move(parts.proposals),
                       std::move(parts.votes), key_votes_only);
}

void write_sample_dataset(const std::filesystem::path& dir, std::uint64_t seed) {
    SampleParts parts = make_sample_parts(seed);
    Corpus corpus = make_corpus(parts.meps, parts.proposals, parts.votes,
                                /*key_votes_only=*/false);
    save_corpus(corpus, CorpusPaths{dir / "votes.csv", dir / "meps.json",
                                    dir / "proposals.json"});
    parts.lexicon.save(dir / "lexicon.json");

    // Sample annotation matrix: three raters labeling one counterfactual
    // speech per proposal, with occasional disagreement.
    SplitMix64 rng(seed ^ 0xabcdef1234567890ULL);
    std::string csv = "# epsim-annotations-v1\nitem,rater1,rater2,rater3\n";
    const char* labels[3] = {"in_favor", "against", "neutral"};
    for (int i = 0; i < 47; ++i) {
        const char* truth = rng.unit() < 0.66 ? labels[1] : labels[0];
        csv += "p" + std::to_string(i + 1);
        for (int r = 0; r < 3; ++r) {
            const char* pick =
                rng.unit() < 0.93 ? truth : labels[rng.bounded(3)];
            csv += ",";
            csv += pick;
        }
        csv += "\n";
    }
    write_file_atomic(dir / "annotations.csv", csv);
}

}  // namespace epsim
