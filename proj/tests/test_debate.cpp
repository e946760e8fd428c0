#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epsim/debate.hpp"
#include "epsim/errors.hpp"
#include "epsim/prompts.hpp"
#include "epsim/sample_data.hpp"

#include "support/fixtures.hpp"

#include <set>

using namespace epsim;

TEST_CASE("anonymize") {
    AnonymizationLexicon lexicon;
    lexicon.politician_names = {"Weber"};
    lexicon.group_aliases = {"EPP"};

    SUBCASE("replaces names and groups with placeholders") {
        CHECK(anonymize("Mr Weber of the EPP agrees", lexicon) ==
              "Mr [NAME] of the [GROUP] agrees");
    }

    SUBCASE("text without lexicon hits passes through") {
        CHECK(anonymize("Nothing to redact here.", lexicon) ==
              "Nothing to redact here.");
        CHECK(anonymize("", lexicon) == "");
    }

    SUBCASE("longest match wins") {
        AnonymizationLexicon renew;
        renew.group_aliases = {"Renew Europe", "Renew"};
        CHECK(anonymize("Renew Europe Group", renew) == "[GROUP] Group");
        CHECK(anonymize("Renew alone", renew) == "[GROUP] alone");
    }

    SUBCASE("every occurrence is replaced") {
        CHECK(anonymize("EPP, EPP and EPP", lexicon) ==
              "[GROUP], [GROUP] and [GROUP]");
    }

    SUBCASE("party names get the party placeholder") {
        AnonymizationLexicon parties;
        parties.party_names = {"Civic Alliance"};
        CHECK(anonymize("the Civic Alliance proposal", parties) ==
              "the [PARTY] proposal");
    }

    SUBCASE("matching is case sensitive as listed") {
        CHECK(anonymize("epp is lowercase", lexicon) == "epp is lowercase");
    }

    SUBCASE("no residual matches after anonymization (spot fuzz)") {
        const AnonymizationLexicon full = make_sample_parts().lexicon;
        std::vector<std::string> entries;
        for (const auto& e : full.politician_names) entries.push_back(e);
        for (const auto& e : full.group_aliases) entries.push_back(e);
        for (const auto& e : full.party_names) entries.push_back(e);
        SplitMix64 rng(99);
        for (int i = 0; i < 300; ++i) {
            std::string text;
            const int pieces = 1 + static_cast<int>(rng.bounded(8));
            for (int k = 0; k < pieces; ++k) {
                text += entries[rng.bounded(entries.size())];
                if (rng.bounded(2)) text += " filler ";
            }
            CHECK_FALSE(contains_lexicon_entry(anonymize(text, full), full));
        }
    }
}

TEST_CASE("order_speeches") {
    auto speeches_for = [](int count) {
        std::vector<Speech> out;
        for (int i = 0; i < count; ++i)
            out.push_back(fixtures::speech("p1", i, "text " + std::to_string(i)));
        return out;
    };

    SUBCASE("single speech is identity") {
        const auto ordered = order_speeches(speeches_for(1), 42);
        REQUIRE(ordered.size() == 1);
        CHECK(ordered.front().position_in_debate == 0);
    }

    SUBCASE("same seed gives the same permutation") {
        const auto a = order_speeches(speeches_for(7), 42);
        const auto b = order_speeches(speeches_for(7), 42);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i].position_in_debate == b[i].position_in_debate);
    }

    SUBCASE("permutations differ across seeds") {
        // 100 seeds over 7 speeches should give at least 99 distinct orders.
        std::set<std::vector<int>> orders;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            std::vector<int> order;
            for (const Speech& s : order_speeches(speeches_for(7), seed))
                order.push_back(s.position_in_debate);
            orders.insert(order);
        }
        CHECK(orders.size() >= 99);
    }

    SUBCASE("output is always a permutation") {
        SplitMix64 rng(4);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + static_cast<int>(rng.bounded(12));
            const auto ordered = order_speeches(speeches_for(n), rng.next());
            std::set<int> seen;
            for (const Speech& s : ordered) seen.insert(s.position_in_debate);
            CHECK(seen.size() == static_cast<std::size_t>(n));
            CHECK(*seen.begin() == 0);
            CHECK(*seen.rbegin() == n - 1);
        }
    }

    SUBCASE("order depends on the proposal id") {
        auto other = speeches_for(7);
        for (Speech& s : other) s.proposal_id = "p2";
        std::vector<int> a, b;
        for (const Speech& s : order_speeches(speeches_for(7), 1))
            a.push_back(s.position_in_debate);
        for (const Speech& s : order_speeches(other, 1)) b.push_back(s.position_in_debate);
        CHECK(a != b);  // astronomically unlikely to collide
    }

    SUBCASE("mixed proposals are rejected") {
        auto mixed = speeches_for(2);
        mixed[1].proposal_id = "p2";
        CHECK_THROWS_AS(order_speeches(mixed, 1), MixedProposal);

        auto mixed_variant = speeches_for(2);
        mixed_variant[1].variant = SpeechVariant::Counterfactual;
        CHECK_THROWS_AS(order_speeches(mixed_variant, 1), MixedProposal);
    }
}

namespace {

std::shared_ptr<ChatClient> scripted_client(std::vector<MockRule> rules) {
    MockScript script;
    script.rules = std::move(rules);
    return std::make_shared<ChatClient>(std::make_shared<MockBackend>(script),
                                        RetryPolicy{}, std::nullopt, 1);
}

StancePrompts stance_prompts() {
    PromptConfig prompts;
    return {prompts.stance_instruction, prompts.stance_format};
}

CounterfactualPrompts counterfactual_prompts() {
    PromptConfig prompts;
    return {prompts.counterfactual_instruction, prompts.counterfactual_format};
}

}  // namespace

TEST_CASE("classify_stance") {
    const Speech speech = fixtures::speech("p1", 0, "We support this proposal.");

    SUBCASE("parses the scripted labels") {
        auto client = scripted_client({{"stance|p1", {"in favor"}, false}});
        CHECK(classify_stance(speech, "Title", *client, stance_prompts()) ==
              Stance::InFavor);

        client = scripted_client({{"stance|p1", {"NEUTRAL"}, false}});
        CHECK(classify_stance(speech, "Title", *client, stance_prompts()) ==
              Stance::Neutral);

        client = scripted_client({{"stance|p1", {"The speech argues AGAINST."}, false}});
        CHECK(classify_stance(speech, "Title", *client, stance_prompts()) ==
              Stance::Against);
    }

    SUBCASE("garbage exhausts retries into FormatViolation") {
        auto client = scripted_client({{"stance|p1", {"blah"}, false}});
        CHECK_THROWS_AS(classify_stance(speech, "Title", *client, stance_prompts()),
                        FormatViolation);
    }

    SUBCASE("earliest stance mention wins on ambiguity") {
        CHECK(parse_stance_response("in favor, not against") == Stance::InFavor);
        CHECK(parse_stance_response("not against, but in favor") == Stance::Against);
        CHECK(parse_stance_response("no stance at all") == std::nullopt);
    }
}

TEST_CASE("generate_counterfactual") {
    const Speech speech = fixtures::speech("p1", 3, "We support this proposal.");

    SUBCASE("stores the generated speech at the same debate position") {
        auto client = scripted_client(
            {{"counterfactual|p1",
              {R"({"stance": "IN FAVOR", "speech": "We oppose this proposal."})"},
              false}});
        const CounterfactualResult result = generate_counterfactual(
            speech, "Some Title", *client, counterfactual_prompts());
        CHECK(result.speech.variant == SpeechVariant::Counterfactual);
        CHECK(result.speech.position_in_debate == 3);
        CHECK(result.speech.text == "We oppose this proposal.");
        CHECK(result.declared_original == Stance::InFavor);
    }

    SUBCASE("the instruction carries the title in place of the placeholder") {
        // Capture the outgoing prompt through a mock that echoes nothing useful,
        // then inspect via the request the backend received.
        struct Capture : ChatBackend {
            std::string last_user;
            std::string complete(const ChatRequest& r) override {
                last_user = r.user_prompt;
                return R"({"stance": "AGAINST", "speech": "x"})";
            }
            std::string name() const override { return "capture"; }
        };
        auto capture = std::make_shared<Capture>();
        ChatClient client(capture, RetryPolicy{}, std::nullopt, 1);
        generate_counterfactual(speech, "Driving licences", client,
                                counterfactual_prompts());
        CHECK(capture->last_user.find("the EU parliament with the name Driving "
                                      "licences") != std::string::npos);
        CHECK(capture->last_user.find("[Title]") == std::string::npos);
        CHECK(capture->last_user.find("generate a new speech that takes the opposite "
                                      "stance") != std::string::npos);
        CHECK(capture->last_user.find(speech.text) != std::string::npos);
    }

    SUBCASE("counterfactual input must be a real speech") {
        Speech counterfactual = speech;
        counterfactual.variant = SpeechVariant::Counterfactual;
        auto client = scripted_client({});
        CHECK_THROWS_AS(generate_counterfactual(counterfactual, "Title", *client,
                                                counterfactual_prompts()),
                        Error);
    }

    SUBCASE("empty generation is a named error") {
        auto client = scripted_client(
            {{"counterfactual|p1", {R"({"stance": "AGAINST", "speech": "  "})"}, false}});
        CHECK_THROWS_AS(generate_counterfactual(speech, "Title", *client,
                                                counterfactual_prompts()),
                        EmptyGeneration);
    }

    SUBCASE("position multisets stay aligned across a whole proposal") {
        Proposal proposal = fixtures::proposal("p9", "Ninth", "2024-02-05", 5);
        auto client = scripted_client(
            {{"counterfactual|p9",
              {R"({"stance": "IN FAVOR", "speech": "opposite"})"},
              false}});
        std::multiset<int> real_positions, counter_positions;
        for (const Speech* s : proposal.speeches_of(SpeechVariant::Real)) {
            real_positions.insert(s->position_in_debate);
            const auto result = generate_counterfactual(*s, proposal.title, *client,
                                                        counterfactual_prompts());
            counter_positions.insert(result.speech.position_in_debate);
        }
        CHECK(real_positions == counter_positions);
    }
}
