#include "epsim/lexicons.hpp"

namespace epsim {

const std::map<GroupCode, std::vector<std::string>>& group_alias_lexicon() {
    static const std::map<GroupCode, std::vector<std::string>> kAliases = {
        {GroupCode::Renew, {"RENEW", "Renew Group", "Renew Europe", "ALDE"}},
        {GroupCode::Epp,
         {"EPP", "People's Party", "Christian Democrats", "Christian Party",
          "Christian Democrat"}},
        {GroupCode::SD,
         {"SD", "S&D", "Progressive Alliance of Socialists and Democrats",
          "Social Democrats", "Socialists & Democrats", "Socialists and Democrats",
          "Social Democrat"}},
        {GroupCode::GreensEfa,
         {"GREEN_EFA", "Greens", "Greens/EFA", "GREENS/EFA", "Green Party",
          "Green Alliance", "European Free Alliance"}},
        {GroupCode::Ecr, {"ECR", "Reformists", "Reformist"}},
        {GroupCode::GueNgl,
         {"GUE_NGL", "GUE/NGL", "the Left", "The Left", "Left group"}},
        {GroupCode::Ni, {"NI", "Non-attached Members", "Non-attached Member"}},
        {GroupCode::Id, {"ID", "Identity and Democracy"}},
    };
    return kAliases;
}

const std::vector<std::string>& all_group_aliases() {
    static const std::vector<std::string> kAll = [] {
        std::vector<std::string> out;
        for (const auto& [group, aliases] : group_alias_lexicon())
            out.insert(out.end(), aliases.begin(), aliases.end());
        return out;
    }();
    return kAll;
}

const std::map<std::string, std::vector<std::string>>& country_lexicon() {
    static const std::map<std::string, std::vector<std::string>> kCountries = {
        {"Luxembourg",
         {"Luxembourg", "Luxembourger", "Luxembourgers", "Luxembourgian",
          "Luxembourgish"}},
        {"Portugal", {"Portugal", "Portuguese"}},
        {"Germany", {"Germany", "German", "Germans"}},
        {"Spain", {"Spain", "Spanish", "Spaniard", "Spaniards"}},
        {"Finland", {"Finland", "Finnish", "Finn", "Finns"}},
        {"Austria", {"Austria", "Austrian", "Austrians"}},
        {"Belgium", {"Belgium", "Belgian", "Belgians"}},
        {"Netherlands", {"Netherlands", "Dutch", "Holland"}},
        {"Italy", {"Italy", "Italian", "Italians"}},
        {"France", {"France", "French"}},
        {"Czechia", {"Czechia", "Czech Republic", "Czech", "Czechs"}},
        {"Poland", {"Poland", "Polish"}},
        {"Hungary", {"Hungary", "Hungarian", "Hungarians"}},
        {"Slovakia", {"Slovakia", "Slovak", "Slovaks"}},
        {"Malta", {"Malta", "Maltese"}},
        {"Denmark", {"Denmark", "Danish", "Dane", "Danes"}},
        {"Slovenia",
         {"Slovenia", "Slovenian", "Slovene", "Slovenians", "Slovenes"}},
        {"Greece", {"Greece", "Greek"}},
        {"Latvia", {"Latvia", "Latvian", "Latvians", "Letts"}},
        {"Romania", {"Romania", "Romanian", "Romanians"}},
        {"Ireland", {"Ireland", "Irish"}},
        {"Lithuania", {"Lithuania", "Lithuanian", "Lithuanians"}},
        {"Bulgaria", {"Bulgaria", "Bulgarian", "Bulgarians"}},
        {"Croatia", {"Croatia", "Croatian", "Croatians", "Croat", "Croats"}},
        {"Sweden", {"Sweden", "Swedish", "Swede", "Swedes"}},
        {"Cyprus", {"Cyprus", "Cypriots", "Cypriot"}},
        {"Estonia", {"Estonia", "Estonian", "Estonians"}},
    };
    return kCountries;
}

const std::vector<std::string>& male_identity_words() {
    static const std::vector<std::string> kWords = {"male", "Male", "man",
                                                    "Man",  "men",  "Men"};
    return kWords;
}

const std::vector<std::string>& female_identity_words() {
    static const std::vector<std::string> kWords = {"female", "Female", "woman",
                                                    "Woman",  "women",  "Women"};
    return kWords;
}

}  // namespace epsim
