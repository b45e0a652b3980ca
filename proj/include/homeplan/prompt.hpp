#pragma once

#include <map>
#include <string>
#include <vector>

#include "homeplan/memory_store.hpp"

namespace homeplan::prompt {

enum class PromptKind { Plan, Question, Answer };

struct AssembledPrompt {
  std::string text;
  Domain domain = Domain::Teach;
  PromptKind kind = PromptKind::Plan;
  std::vector<std::string> example_ids;
  int token_estimate = 0;  // ceil(chars / 4), used only for budget warnings
};

// Substitutes {NAME} slots; literal braces are escaped by doubling ({{, }}).
// Throws TemplateError when a required slot is missing or repeated, or when a
// slot marker remains unresolved.
std::string substitute_slots(const std::string& body,
                             const std::map<std::string, std::string>& values);

// Slot names present in a body (unescaped single-brace markers).
std::vector<std::string> find_slots(const std::string& body);

int estimate_tokens(const std::string& s);

// Per Listings-style plan prompt: domain template + API + ranked examples +
// class whitelist + the user command.
AssembledPrompt assemble_plan_prompt(const PromptTemplateRecord& tmpl,
                                     const std::vector<const ExampleRecord*>& examples,
                                     const std::string& api_text,
                                     const std::string& object_classes,
                                     const std::string& command);

AssembledPrompt assemble_question_prompt(const std::string& context,
                                         const std::string& question_api_text,
                                         const std::string& question_template,
                                         const std::string& object_classes);

AssembledPrompt assemble_answer_prompt(const std::string& context, const std::string& question,
                                       const std::string& answer,
                                       const std::string& search_api_text,
                                       const std::string& answer_template,
                                       const std::string& object_classes);

// "Tidy up the house. These are the out of place objects: ..." sentence.
std::string synthesize_tidy_command(const std::vector<std::string>& out_of_place,
                                    const std::vector<std::string>& receptacles);

}  // namespace homeplan::prompt
