#include "epsim/persona.hpp"

#include "epsim/prompts.hpp"

#include <nlohmann/json.hpp>

namespace epsim {

using nlohmann::json;

std::string to_string(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::Name: return "name";
        case AttributeKind::Gender: return "gender";
        case AttributeKind::Age: return "age";
        case AttributeKind::Birthplace: return "birthplace";
        case AttributeKind::Country: return "country";
        case AttributeKind::Group: return "group";
        case AttributeKind::NationalParty: return "national_party";
    }
    return "?";
}

AttributeKind parse_attribute_kind(std::string_view s) {
    for (AttributeKind k :
         {AttributeKind::Name, AttributeKind::Gender, AttributeKind::Age,
          AttributeKind::Birthplace, AttributeKind::Country, AttributeKind::Group,
          AttributeKind::NationalParty}) {
        if (s == to_string(k)) return k;
    }
    throw SchemaError("unknown attribute kind: '" + std::string(s) + "'");
}

AttributeSet all_attributes() {
    return {AttributeKind::Name,       AttributeKind::Gender,
            AttributeKind::Age,        AttributeKind::Birthplace,
            AttributeKind::Country,    AttributeKind::Group,
            AttributeKind::NationalParty};
}

std::string PersonaTemplate::content_hash() const {
    return sha256_hex(header + "\x1f" + gender_line + "\x1f" + age_line + "\x1f" +
                      birthplace_line + "\x1f" + country_line + "\x1f" + party_line +
                      "\x1f" + group_line);
}

std::string substitute(std::string text, std::string_view placeholder,
                       std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

PersonaSpec render_attribute_persona(const Mep& mep, Date vote_date,
                                     const AttributeSet& subset,
                                     const PersonaTemplate& tmpl) {
    if (!subset.count(AttributeKind::Name))
        throw ConfigError("attribute persona requires the name attribute");

    std::string out = substitute(tmpl.header, "{name}", mep.full_name);

    if (subset.count(AttributeKind::Gender))
        out += "\n" + substitute(tmpl.gender_line, "{gender}", to_string(mep.gender));
    if (subset.count(AttributeKind::Age)) {
        const int age = compute_age(mep.birth_date, vote_date);
        out += "\n" + substitute(tmpl.age_line, "{age}", std::to_string(age));
    }
    if (subset.count(AttributeKind::Birthplace))
        out += "\n" + substitute(tmpl.birthplace_line, "{birthplace}", mep.birthplace);
    if (subset.count(AttributeKind::Country))
        out += "\n" + substitute(tmpl.country_line, "{country}", mep.country);

    const bool needs_affiliation = subset.count(AttributeKind::NationalParty) ||
                                   subset.count(AttributeKind::Group);
    if (needs_affiliation) {
        const Affiliation& affiliation = resolve_affiliation(mep, vote_date);
        if (subset.count(AttributeKind::NationalParty))
            out += "\n" +
                   substitute(tmpl.party_line, "{party}", affiliation.national_party);
        if (subset.count(AttributeKind::Group))
            out += "\n" +
                   substitute(tmpl.group_line, "{group}", to_string(affiliation.group));
    }

    PersonaSpec spec;
    spec.mode = PersonaMode{PersonaMode::Kind::Attributes, subset};
    spec.rendered = std::move(out);
    return spec;
}

// ---------------------------------------------------------------------------

PersonaCache::PersonaCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::optional<std::string> PersonaCache::get(const std::string& key) const {
    const auto file = dir_ / (key + ".json");
    if (!std::filesystem::exists(file)) return std::nullopt;
    try {
        json j = json::parse(read_file(file));
        return j.at("rendered").get<std::string>();
    } catch (...) {
        return std::nullopt;
    }
}

void PersonaCache::put(const std::string& key, const std::string& mep_id,
                       const std::string& mode, const std::string& rendered) const {
    json record{{"schema", "epsim-persona-v1"},
                {"key", key},
                {"mep_id", mep_id},
                {"mode", mode},
                {"rendered", rendered}};
    write_file_atomic(dir_ / (key + ".json"), record.dump(2) + "\n");
}

std::string PersonaCache::summary_key(const std::string& article,
                                      const std::string& summarizer_prompt) {
    return sha256_hex(summarizer_prompt + "\x1f" + article);
}

std::string summarize_wikipedia(const std::string& article, ChatClient& client,
                                const std::string& summarizer_prompt,
                                const PersonaCache* cache,
                                const std::string& mep_id) {
    if (trim(article).empty()) throw EmptyArticle("empty Wikipedia article");

    const std::string key = PersonaCache::summary_key(article, summarizer_prompt);
    if (cache) {
        if (auto hit = cache->get(key)) return *hit;
    }

    ChatRequest request;
    request.system_prompt = PromptConfig{}.default_system;
    request.user_prompt = summarizer_prompt + "\n\n" + article;
    request.temperature = 0.2;
    request.max_tokens = 512;
    request.request_tag = "summary|" + key;

    const std::string summary = client.complete_with_policy(request, accept_any);
    if (cache) cache->put(key, mep_id, "wikipedia", summary);
    return summary;
}

}  // namespace epsim
