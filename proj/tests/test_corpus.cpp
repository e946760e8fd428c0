#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epsim/corpus.hpp"
#include "epsim/errors.hpp"
#include "epsim/sample_data.hpp"

#include "support/fixtures.hpp"

#include <filesystem>

using namespace epsim;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("epsim_corpus_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("date parsing and validation") {
    CHECK(Date::parse("2024-03-01") == Date{2024, 3, 1});
    CHECK(Date::parse("2024-02-29").valid());  // leap year
    CHECK_THROWS_AS(Date::parse("2023-02-29"), SchemaError);
    CHECK_THROWS_AS(Date::parse("2024-13-01"), SchemaError);
    CHECK_THROWS_AS(Date::parse("2024-3-1"), SchemaError);
    CHECK_THROWS_AS(Date::parse("garbage"), SchemaError);
    CHECK(Date{2024, 3, 1} > Date{2024, 2, 29});
}

TEST_CASE("compute_age counts completed years") {
    CHECK(compute_age(Date::parse("1980-03-01"), Date::parse("2024-02-28")) == 43);
    CHECK(compute_age(Date::parse("1980-03-01"), Date::parse("2024-03-01")) == 44);
    CHECK(compute_age(Date::parse("2000-06-15"), Date::parse("2000-06-15")) == 0);
    CHECK_THROWS_AS(compute_age(Date::parse("2000-06-15"), Date::parse("1999-01-01")),
                    InvalidDates);
}

TEST_CASE("resolve_affiliation uses closed-start open-end intervals") {
    Mep m = fixtures::mep("m1", "Anna Example", Gender::Female, "1970-05-01",
                          "Austria", "Civic Alliance", GroupCode::Epp);

    SUBCASE("single lifelong affiliation") {
        CHECK(resolve_affiliation(m, Date::parse("2024-06-01")).national_party ==
              "Civic Alliance");
    }

    SUBCASE("switch date belongs to the new affiliation") {
        m.affiliations.clear();
        m.affiliations.push_back({"Old Party", GroupCode::Epp,
                                  Date::parse("2019-07-02"),
                                  Date::parse("2024-03-01")});
        m.affiliations.push_back({"New Party", GroupCode::Ecr,
                                  Date::parse("2024-03-01"), std::nullopt});
        CHECK(resolve_affiliation(m, Date::parse("2024-02-29")).national_party ==
              "Old Party");
        CHECK(resolve_affiliation(m, Date::parse("2024-03-01")).national_party ==
              "New Party");
    }

    SUBCASE("date before all intervals") {
        CHECK_THROWS_AS(resolve_affiliation(m, Date::parse("2018-01-01")),
                        NoAffiliation);
    }
}

TEST_CASE("make_corpus validates integrity") {
    SUBCASE("vote referencing unknown mep") {
        std::vector<Mep> meps = {fixtures::mep("m1", "Anna Example", Gender::Female,
                                               "1970-05-01", "Austria",
                                               "Civic Alliance", GroupCode::Epp)};
        std::vector<Proposal> proposals = {
            fixtures::proposal("p1", "First Proposal", "2024-02-01")};
        std::vector<VoteRecord> votes = {{"ghost", "p1", VotePosition::For}};
        CHECK_THROWS_WITH_AS(
            make_corpus(std::move(meps), std::move(proposals), std::move(votes), true),
            doctest::Contains("ghost"), IntegrityError);
    }

    SUBCASE("overlapping affiliations rejected") {
        Mep m = fixtures::mep("m1", "Anna Example", Gender::Female, "1970-05-01",
                              "Austria", "Civic Alliance", GroupCode::Epp);
        m.affiliations.push_back(
            {"Shadow Party", GroupCode::Ecr, Date::parse("2020-01-01"), std::nullopt});
        CHECK_THROWS_AS(make_corpus({m}, {}, {}, true), IntegrityError);
    }

    SUBCASE("vote date outside affiliations is an affiliation gap") {
        Mep m = fixtures::mep("m1", "Anna Example", Gender::Female, "1970-05-01",
                              "Austria", "Civic Alliance", GroupCode::Epp);
        m.affiliations.front().end_date = Date::parse("2023-01-01");
        std::vector<Proposal> proposals = {
            fixtures::proposal("p1", "First Proposal", "2024-02-01")};
        std::vector<VoteRecord> votes = {{"m1", "p1", VotePosition::For}};
        CHECK_THROWS_WITH_AS(
            make_corpus({m}, std::move(proposals), std::move(votes), true),
            doctest::Contains("affiliation gap"), IntegrityError);
    }

    SUBCASE("duplicate votes rejected") {
        std::vector<Mep> meps = {fixtures::mep("m1", "Anna Example", Gender::Female,
                                               "1970-05-01", "Austria",
                                               "Civic Alliance", GroupCode::Epp)};
        std::vector<Proposal> proposals = {
            fixtures::proposal("p1", "First Proposal", "2024-02-01")};
        std::vector<VoteRecord> votes = {{"m1", "p1", VotePosition::For},
                                         {"m1", "p1", VotePosition::Against}};
        CHECK_THROWS_AS(
            make_corpus(std::move(meps), std::move(proposals), std::move(votes), true),
            IntegrityError);
    }
}

TEST_CASE("vote_distribution") {
    SUBCASE("hand-counted fractions") {
        // 2 For, 1 Against, 1 Abstention -> 0.5 / 0.25 / 0.25.
        std::vector<Mep> meps = {
            fixtures::mep("m1", "A B", Gender::Female, "1970-05-01", "Austria", "P1",
                          GroupCode::Epp),
            fixtures::mep("m2", "C D", Gender::Male, "1970-05-01", "Austria", "P1",
                          GroupCode::Epp)};
        std::vector<Proposal> proposals = {
            fixtures::proposal("p1", "First", "2024-02-01"),
            fixtures::proposal("p2", "Second", "2024-03-01")};
        std::vector<VoteRecord> votes = {{"m1", "p1", VotePosition::For},
                                         {"m1", "p2", VotePosition::For},
                                         {"m2", "p1", VotePosition::Against},
                                         {"m2", "p2", VotePosition::Abstention}};
        Corpus corpus =
            make_corpus(std::move(meps), std::move(proposals), std::move(votes), true);
        const auto dist = vote_distribution(corpus);
        CHECK(dist.at(VotePosition::For) == doctest::Approx(0.5));
        CHECK(dist.at(VotePosition::Against) == doctest::Approx(0.25));
        CHECK(dist.at(VotePosition::Abstention) == doctest::Approx(0.25));
    }

    SUBCASE("all For") {
        Corpus corpus = fixtures::tiny_corpus();
        const auto dist = vote_distribution(corpus);
        CHECK(dist.at(VotePosition::For) == doctest::Approx(1.0));
        CHECK(dist.at(VotePosition::Against) == doctest::Approx(0.0));
    }

    SUBCASE("fractions sum to one") {
        Corpus corpus = make_sample_corpus();
        const auto dist = vote_distribution(corpus);
        double sum = 0;
        for (const auto& [pos, f] : dist) {
            CHECK(f >= 0.0);
            sum += f;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }

    SUBCASE("empty corpus") {
        std::vector<Mep> meps = {fixtures::mep("m1", "A B", Gender::Female,
                                               "1970-05-01", "Austria", "P1",
                                               GroupCode::Epp)};
        Corpus corpus = make_corpus(std::move(meps), {}, {}, true);
        CHECK_THROWS_AS(vote_distribution(corpus), EmptyCorpus);
    }
}

TEST_CASE("file loading") {
    const fs::path dir = temp_dir("files");

    SUBCASE("round trip is idempotent") {
        Corpus corpus = fixtures::tiny_corpus();
        CorpusPaths paths{dir / "votes.csv", dir / "meps.json", dir / "proposals.json"};
        save_corpus(corpus, paths);
        Corpus reloaded = load_corpus(paths, true);
        CHECK(corpus == reloaded);
        CHECK(corpus_content_hash(corpus) == corpus_content_hash(reloaded));

        // And once more through the serializer.
        CorpusPaths paths2{dir / "votes2.csv", dir / "meps2.json",
                           dir / "proposals2.json"};
        save_corpus(reloaded, paths2);
        CHECK(read_file(paths.votes) == read_file(paths2.votes));
        CHECK(read_file(paths.meps) == read_file(paths2.meps));
        CHECK(read_file(paths.proposals) == read_file(paths2.proposals));
    }

    SUBCASE("empty vote file with valid MEP file") {
        Corpus corpus = fixtures::tiny_corpus();
        CorpusPaths paths{dir / "votes.csv", dir / "meps.json", dir / "proposals.json"};
        save_corpus(corpus, paths);
        write_file_atomic(paths.votes,
                          "# epsim-votes-v1\nmep_id,proposal_id,position\n");
        Corpus reloaded = load_corpus(paths, true);
        CHECK(reloaded.votes().empty());
        CHECK(reloaded.meps().size() == 2);
    }

    SUBCASE("schema line is required") {
        Corpus corpus = fixtures::tiny_corpus();
        CorpusPaths paths{dir / "votes.csv", dir / "meps.json", dir / "proposals.json"};
        save_corpus(corpus, paths);
        write_file_atomic(paths.votes, "mep_id,proposal_id,position\n");
        CHECK_THROWS_AS(load_corpus(paths, true), SchemaError);
    }

    SUBCASE("malformed row carries a locator") {
        Corpus corpus = fixtures::tiny_corpus();
        CorpusPaths paths{dir / "votes.csv", dir / "meps.json", dir / "proposals.json"};
        save_corpus(corpus, paths);
        write_file_atomic(paths.votes,
                          "# epsim-votes-v1\nmep_id,proposal_id,position\nm1,p1,MAYBE\n");
        CHECK_THROWS_WITH_AS(load_corpus(paths, true), doctest::Contains(":3"),
                             SchemaError);
    }

    SUBCASE("unknown gender is rejected by name") {
        Corpus corpus = fixtures::tiny_corpus();
        CorpusPaths paths{dir / "votes.csv", dir / "meps.json", dir / "proposals.json"};
        save_corpus(corpus, paths);
        std::string meps = read_file(paths.meps);
        const auto pos = meps.find("\"female\"");
        REQUIRE(pos != std::string::npos);
        meps.replace(pos, 8, "\"other\"");
        write_file_atomic(paths.meps, meps);
        CHECK_THROWS_WITH_AS(load_corpus(paths, true), doctest::Contains("gender"),
                             SchemaError);
    }
}

TEST_CASE("key-vote filtering drops proposals and their votes") {
    std::vector<Mep> meps = {fixtures::mep("m1", "A B", Gender::Female, "1970-05-01",
                                           "Austria", "P1", GroupCode::Epp)};
    Proposal key = fixtures::proposal("p1", "Key", "2024-02-01");
    Proposal non_key = fixtures::proposal("p2", "Non-key", "2024-02-02");
    non_key.has_press_release = false;
    std::vector<VoteRecord> votes = {{"m1", "p1", VotePosition::For},
                                     {"m1", "p2", VotePosition::For}};

    Corpus filtered = make_corpus(meps, {key, non_key}, votes, true);
    CHECK(filtered.proposals().size() == 1);
    CHECK(filtered.votes().size() == 1);

    Corpus unfiltered = make_corpus(meps, {key, non_key}, votes, false);
    CHECK(unfiltered.proposals().size() == 2);
    CHECK(unfiltered.votes().size() == 2);
}

TEST_CASE("sample corpus matches the reference shape") {
    Corpus corpus = make_sample_corpus();
    CHECK(corpus.meps().size() == 710);
    CHECK(corpus.proposals().size() == 47);

    std::size_t decisions = 0;
    for (const VoteRecord& v : corpus.votes())
        if (v.position != VotePosition::DidNotVote) ++decisions;
    CHECK(decisions == 27770);

    SUBCASE("every vote date is covered by an affiliation") {
        for (const VoteRecord& v : corpus.votes()) {
            const Proposal& p = corpus.proposal(v.proposal_id);
            CHECK_NOTHROW(resolve_affiliation(corpus.mep(v.mep_id), p.vote_date));
        }
    }

    SUBCASE("generator is deterministic") {
        Corpus again = make_sample_corpus();
        CHECK(corpus_content_hash(corpus) == corpus_content_hash(again));
    }

    SUBCASE("unfiltered view includes the non-key proposals") {
        Corpus all = make_sample_corpus(kDefaultSampleSeed, false);
        CHECK(all.proposals().size() == 49);
    }
}
