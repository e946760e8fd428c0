#pragma once

#include <string>

namespace epsim {

// All instruction wording sent to the model, in one configurable place.
// The vote/stance option lists are fixed protocol (the parser depends on
// them); the surrounding phrasing is a reconstruction and can be overridden
// per experiment via the config file.
struct PromptConfig {
    std::string default_system = "You are a helpful assistant.";

    // {title} is substituted with the proposal title.
    std::string proposal_intro =
        "The European Parliament is voting on the following proposal: \"{title}\".";

    std::string speeches_intro =
        "The following speeches were given in the parliamentary debate on this "
        "proposal, in no particular order:";

    // {index} is the 1-based speech number.
    std::string speech_heading = "Speech {index}:";

    std::string vote_instruction_reasoning =
        "Consider how you would vote on this proposal. First give your "
        "reasoning in open text, then respond with exactly one of the options: "
        "FOR, AGAINST, or ABSTENTION. Answer in JSON format as "
        "{\"reasoning\": \"<your reasoning>\", \"vote\": "
        "\"<FOR|AGAINST|ABSTENTION>\"}.";

    std::string vote_instruction_no_reasoning =
        "Consider how you would vote on this proposal. Respond with exactly one "
        "of the options: FOR, AGAINST, or ABSTENTION. Answer in JSON format as "
        "{\"vote\": \"<FOR|AGAINST|ABSTENTION>\"}.";

    // Counterfactual generation instruction; {title} is substituted.
    std::string counterfactual_instruction =
        "In the following you are given a speech arguing for, against or being "
        "neutral towards a proposal in the EU parliament with the name [Title]. "
        "First, indicate which stance the given speech takes. Then, generate a "
        "new speech that takes the opposite stance (or stays neutral) and only "
        "use arguments and information that appear in the given speech.";

    // The standalone stance classifier reuses the first clause of the
    // counterfactual instruction.
    std::string stance_instruction =
        "In the following you are given a speech arguing for, against or being "
        "neutral towards a proposal in the EU parliament with the name [Title]. "
        "First, indicate which stance the given speech takes.";

    std::string stance_format =
        "Respond with exactly one of the options: IN FAVOR, AGAINST, or NEUTRAL.";

    std::string counterfactual_format =
        "Answer in JSON format as {\"stance\": \"<IN FAVOR|AGAINST|NEUTRAL>\", "
        "\"speech\": \"<the new speech>\"}.";

    std::string summarizer_prompt =
        "Summarize the following Wikipedia article about a politician in at "
        "most 200 words, focusing on their political career, party and group "
        "affiliations, and notable positions.";
};

// Replaces every occurrence of `placeholder` in `text` with `value`.
std::string substitute(std::string text, std::string_view placeholder,
                       std::string_view value);

}  // namespace epsim
