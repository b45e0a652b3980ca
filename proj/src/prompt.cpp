#include "homeplan/prompt.hpp"

#include <sstream>

#include "homeplan/text.hpp"

namespace homeplan::prompt {

namespace {

// Scans for single-brace slots, handling {{ }} escapes. callback(name) for
// each slot; emits literal text through out.
template <typename SlotFn>
void scan_body(const std::string& body, std::string* out, SlotFn&& on_slot) {
  for (size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '{') {
      if (i + 1 < body.size() && body[i + 1] == '{') {
        if (out) *out += '{';
        ++i;
        continue;
      }
      size_t end = body.find('}', i + 1);
      if (end == std::string::npos) {
        throw TemplateError("unterminated slot marker near offset " + std::to_string(i));
      }
      std::string name = body.substr(i + 1, end - i - 1);
      if (name.empty() || name.find('{') != std::string::npos) {
        throw TemplateError("malformed slot marker '{" + name + "}'");
      }
      std::string replacement = on_slot(name);
      if (out) *out += replacement;
      i = end;
    } else if (c == '}') {
      if (i + 1 < body.size() && body[i + 1] == '}') {
        if (out) *out += '}';
        ++i;
        continue;
      }
      throw TemplateError("stray '}' at offset " + std::to_string(i));
    } else {
      if (out) *out += c;
    }
  }
}

}  // namespace

std::vector<std::string> find_slots(const std::string& body) {
  std::vector<std::string> slots;
  scan_body(body, nullptr, [&](const std::string& name) {
    slots.push_back(name);
    return std::string();
  });
  return slots;
}

std::string substitute_slots(const std::string& body,
                             const std::map<std::string, std::string>& values) {
  std::map<std::string, int> seen;
  std::string out;
  out.reserve(body.size() + 256);
  scan_body(body, &out, [&](const std::string& name) -> std::string {
    auto it = values.find(name);
    if (it == values.end()) throw TemplateError("no value for slot {" + name + "}");
    ++seen[name];
    return it->second;
  });
  for (const auto& [name, value] : values) {
    if (seen[name] == 0) throw TemplateError("template is missing slot {" + name + "}");
    if (seen[name] > 1) throw TemplateError("slot {" + name + "} appears more than once");
  }
  return out;
}

int estimate_tokens(const std::string& s) {
  return static_cast<int>((s.size() + 3) / 4);
}

namespace {

std::string render_examples(const std::vector<const ExampleRecord*>& examples) {
  std::ostringstream out;
  for (size_t i = 0; i < examples.size(); ++i) {
    if (i) out << "\n";
    out << examples[i]->key_text << "\n"
        << "Python script:\n"
        << examples[i]->program_text << "\n";
  }
  return out.str();
}

}  // namespace

AssembledPrompt assemble_plan_prompt(const PromptTemplateRecord& tmpl,
                                     const std::vector<const ExampleRecord*>& examples,
                                     const std::string& api_text,
                                     const std::string& object_classes,
                                     const std::string& command) {
  if (command.empty()) throw InputError("empty command");
  if (object_classes.empty()) throw InputError("empty object class list");
  AssembledPrompt out;
  out.domain = tmpl.domain;
  out.kind = PromptKind::Plan;
  out.text = substitute_slots(tmpl.template_text,
                              {{"API", api_text},
                               {"RETRIEVED_EXAMPLES", render_examples(examples)},
                               {"OBJECT_CLASSES", object_classes},
                               {"command", command}});
  for (const auto* e : examples) out.example_ids.push_back(e->id);
  out.token_estimate = estimate_tokens(out.text);
  return out;
}

AssembledPrompt assemble_question_prompt(const std::string& context,
                                         const std::string& question_api_text,
                                         const std::string& question_template,
                                         const std::string& object_classes) {
  if (context.empty()) throw InputError("empty question context");
  if (question_api_text.empty()) throw TemplateError("missing question API text");
  AssembledPrompt out;
  out.kind = PromptKind::Question;
  out.text = substitute_slots(question_template, {{"API", question_api_text},
                                                  {"OBJECT_CLASSES", object_classes},
                                                  {"context", context}});
  out.token_estimate = estimate_tokens(out.text);
  return out;
}

AssembledPrompt assemble_answer_prompt(const std::string& context, const std::string& question,
                                       const std::string& answer,
                                       const std::string& search_api_text,
                                       const std::string& answer_template,
                                       const std::string& object_classes) {
  if (context.empty()) throw InputError("empty answer context");
  if (question.empty()) throw InputError("empty question");
  if (answer.empty()) throw InputError("empty answer");
  if (search_api_text.empty()) throw TemplateError("missing search API text");
  AssembledPrompt out;
  out.kind = PromptKind::Answer;
  out.text = substitute_slots(answer_template, {{"API", search_api_text},
                                                {"OBJECT_CLASSES", object_classes},
                                                {"context", context},
                                                {"question", question},
                                                {"answer", answer}});
  out.token_estimate = estimate_tokens(out.text);
  return out;
}

std::string synthesize_tidy_command(const std::vector<std::string>& out_of_place,
                                    const std::vector<std::string>& receptacles) {
  return "Tidy up the house. These are the out of place objects: " +
         text::join(out_of_place, ", ") +
         ". These are the receptacles in the current scene: " + text::join(receptacles, ", ") +
         ".";
}

}  // namespace homeplan::prompt
