#include "epsim/debate.hpp"

#include "epsim/lexicons.hpp"
#include "epsim/prompts.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <map>

namespace epsim {

using nlohmann::json;

AnonymizationLexicon AnonymizationLexicon::with_default_groups() {
    AnonymizationLexicon lexicon;
    for (const std::string& alias : all_group_aliases())
        lexicon.group_aliases.insert(alias);
    return lexicon;
}

AnonymizationLexicon AnonymizationLexicon::load(const std::filesystem::path& file) {
    json root;
    try {
        root = json::parse(read_file(file));
    } catch (const json::exception& e) {
        throw SchemaError(file.string() + ": " + e.what());
    }
    if (!root.is_object() || root.value("schema", "") != "epsim-lexicon-v1")
        throw SchemaError(file.string() + ": expected schema 'epsim-lexicon-v1'");
    AnonymizationLexicon lexicon;
    for (const json& v : root.value("politician_names", json::array()))
        lexicon.politician_names.insert(v.get<std::string>());
    for (const json& v : root.value("group_aliases", json::array()))
        lexicon.group_aliases.insert(v.get<std::string>());
    for (const json& v : root.value("party_names", json::array()))
        lexicon.party_names.insert(v.get<std::string>());
    return lexicon;
}

void AnonymizationLexicon::save(const std::filesystem::path& file) const {
    json root{{"schema", "epsim-lexicon-v1"},
              {"politician_names", politician_names},
              {"group_aliases", group_aliases},
              {"party_names", party_names}};
    write_file_atomic(file, root.dump(2) + "\n");
}

namespace {

struct LexEntry {
    std::string_view token;
    const char* placeholder;
    int category;  // names < groups < parties; breaks equal-length ties
};

// Entries bucketed by first byte, longest first within a bucket.
std::map<char, std::vector<LexEntry>> build_buckets(const AnonymizationLexicon& lexicon) {
    std::map<char, std::vector<LexEntry>> buckets;
    auto add = [&](const std::set<std::string>& entries, const char* placeholder,
                   int category) {
        for (const std::string& e : entries) {
            if (e.empty()) continue;
            buckets[e[0]].push_back({e, placeholder, category});
        }
    };
    add(lexicon.politician_names, AnonymizationLexicon::kNamePlaceholder, 0);
    add(lexicon.group_aliases, AnonymizationLexicon::kGroupPlaceholder, 1);
    add(lexicon.party_names, AnonymizationLexicon::kPartyPlaceholder, 2);
    for (auto& [first, entries] : buckets) {
        std::sort(entries.begin(), entries.end(),
                  [](const LexEntry& a, const LexEntry& b) {
                      if (a.token.size() != b.token.size())
                          return a.token.size() > b.token.size();
                      if (a.category != b.category) return a.category < b.category;
                      return a.token < b.token;
                  });
    }
    return buckets;
}

}  // namespace

std::string anonymize(const std::string& text, const AnonymizationLexicon& lexicon) {
    const auto buckets = build_buckets(lexicon);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto bucket = buckets.find(text[i]);
        const LexEntry* hit = nullptr;
        if (bucket != buckets.end()) {
            for (const LexEntry& entry : bucket->second) {
                if (text.compare(i, entry.token.size(), entry.token) == 0) {
                    hit = &entry;
                    break;  // entries are longest-first
                }
            }
        }
        if (hit) {
            out += hit->placeholder;
            i += hit->token.size();
        } else {
            out += text[i++];
        }
    }
    return out;
}

bool contains_lexicon_entry(const std::string& text,
                            const AnonymizationLexicon& lexicon) {
    for (const auto* entries :
         {&lexicon.politician_names, &lexicon.group_aliases, &lexicon.party_names}) {
        for (const std::string& e : *entries) {
            if (!e.empty() && text.find(e) != std::string::npos) return true;
        }
    }
    return false;
}

std::vector<Speech> order_speeches(const std::vector<Speech>& speeches,
                                   std::uint64_t seed) {
    if (speeches.empty()) return {};
    for (const Speech& s : speeches) {
        if (s.proposal_id != speeches.front().proposal_id ||
            s.variant != speeches.front().variant)
            throw MixedProposal("speeches span more than one (proposal, variant)");
    }

    std::vector<Speech> out = speeches;
    std::sort(out.begin(), out.end(), [](const Speech& a, const Speech& b) {
        return a.position_in_debate < b.position_in_debate;
    });

    // Hand-rolled Fisher-Yates: std::shuffle is implementation-defined, and
    // the permutation must be identical across platforms.
    SplitMix64 rng(seed ^ (fnv1a64(out.front().proposal_id) * 0x9e3779b97f4a7c15ULL));
    for (std::size_t i = out.size() - 1; i > 0; --i) {
        const std::size_t j = rng.bounded(i + 1);
        std::swap(out[i], out[j]);
    }
    return out;
}

std::optional<Stance> parse_stance_response(const std::string& raw) {
    const std::string lowered = to_lower(raw);
    struct Hit {
        std::size_t pos;
        Stance stance;
    };
    std::array<Hit, 3> hits = {{{lowered.find("in favor"), Stance::InFavor},
                                {lowered.find("against"), Stance::Against},
                                {lowered.find("neutral"), Stance::Neutral}}};
    const Hit* best = nullptr;
    for (const Hit& h : hits) {
        if (h.pos == std::string::npos) continue;
        if (!best || h.pos < best->pos) best = &h;
    }
    if (!best) return std::nullopt;
    return best->stance;
}

Stance classify_stance(const Speech& speech, const std::string& proposal_title,
                       ChatClient& client, const StancePrompts& prompts) {
    ChatRequest request;
    request.system_prompt = PromptConfig{}.default_system;
    request.user_prompt = substitute(prompts.instruction, "[Title]", proposal_title) +
                          "\n" + prompts.format + "\n\nSpeech:\n" + speech.text;
    request.temperature = 0.0;
    request.max_tokens = 16;
    request.request_tag = "stance|" + speech.proposal_id + "|" +
                          to_string(speech.variant) + "|" +
                          std::to_string(speech.position_in_debate);

    const std::string raw = client.complete_with_policy(request, [](const std::string& text) {
        return parse_stance_response(text).has_value();
    });
    return *parse_stance_response(raw);
}

namespace {

struct ParsedCounterfactual {
    Stance stance;
    std::string speech_text;
};

std::optional<ParsedCounterfactual> parse_counterfactual(const std::string& raw) {
    const auto object_text = extract_first_json_object(raw);
    if (!object_text) return std::nullopt;
    json j;
    try {
        j = json::parse(*object_text);
    } catch (const json::exception&) {
        return std::nullopt;
    }
    if (!j.contains("stance") || !j.at("stance").is_string()) return std::nullopt;
    if (!j.contains("speech") || !j.at("speech").is_string()) return std::nullopt;
    const auto stance = parse_stance_response(j.at("stance").get<std::string>());
    if (!stance) return std::nullopt;
    return ParsedCounterfactual{*stance, j.at("speech").get<std::string>()};
}

}  // namespace

CounterfactualResult generate_counterfactual(const Speech& speech,
                                             const std::string& proposal_title,
                                             ChatClient& client,
                                             const CounterfactualPrompts& prompts) {
    if (speech.variant != SpeechVariant::Real)
        throw Error("counterfactual generation requires a real speech");

    ChatRequest request;
    request.system_prompt = PromptConfig{}.default_system;
    request.user_prompt = substitute(prompts.instruction, "[Title]", proposal_title) +
                          "\n" + prompts.format + "\n\nSpeech:\n" + speech.text;
    request.temperature = 0.6;
    request.max_tokens = 2048;
    request.request_tag = "counterfactual|" + speech.proposal_id + "|" +
                          std::to_string(speech.position_in_debate);

    const std::string raw = client.complete_with_policy(request, [](const std::string& text) {
        return parse_counterfactual(text).has_value();
    });
    const auto parsed = *parse_counterfactual(raw);
    if (trim(parsed.speech_text).empty())
        throw EmptyGeneration("empty counterfactual speech for '" +
                              request.request_tag + "'");

    CounterfactualResult result;
    result.declared_original = parsed.stance;
    result.speech = speech;
    result.speech.variant = SpeechVariant::Counterfactual;
    result.speech.text = parsed.speech_text;
    result.speech.stance_label = std::nullopt;
    return result;
}

}  // namespace epsim
