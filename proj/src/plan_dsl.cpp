#include "homeplan/plan_dsl.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "homeplan/text.hpp"

#include <json.hpp>

namespace homeplan::dsl {

namespace {

// ---------------------------------------------------------------- lexer ----

enum class TokKind { Ident, String, Symbol, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string value;  // identifier text, string contents, or the symbol itself
  int column = 0;     // 1-based
};

// Tokenizes one logical line (comments already stripped).
class LineLexer {
 public:
  LineLexer(const std::string& line, int line_no) : line_(line), line_no_(line_no) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line_.size()) {
      char c = line_[i];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      int col = static_cast<int>(i) + 1;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < line_.size() &&
               (std::isalnum(static_cast<unsigned char>(line_[j])) || line_[j] == '_')) {
          ++j;
        }
        out.push_back({TokKind::Ident, line_.substr(i, j - i), col});
        i = j;
      } else if (c == '"' || c == '\'') {
        size_t j = i + 1;
        while (j < line_.size() && line_[j] != c) ++j;
        if (j >= line_.size()) {
          throw ParseError(line_no_, col, "unterminated string literal");
        }
        out.push_back({TokKind::String, line_.substr(i + 1, j - i - 1), col});
        i = j + 1;
      } else if (std::string("=.,()[]").find(c) != std::string::npos) {
        out.push_back({TokKind::Symbol, std::string(1, c), col});
        ++i;
      } else {
        throw ParseError(line_no_, col, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({TokKind::End, "", static_cast<int>(line_.size()) + 1});
    return out;
  }

 private:
  const std::string& line_;
  int line_no_;
};

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, int line_no)
      : tokens_(std::move(tokens)), line_no_(line_no) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  Token expect(TokKind kind, const std::string& what) {
    const Token& t = peek();
    if (t.kind != kind) throw ParseError(line_no_, t.column, "expected " + what);
    return next();
  }

  Token expect_symbol(const std::string& sym) {
    const Token& t = peek();
    if (t.kind != TokKind::Symbol || t.value != sym) {
      throw ParseError(line_no_, t.column, "expected '" + sym + "'");
    }
    return next();
  }

  bool accept_symbol(const std::string& sym) {
    if (peek().kind == TokKind::Symbol && peek().value == sym) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_end() {
    if (peek().kind != TokKind::End) {
      throw ParseError(line_no_, peek().column, "unexpected trailing input");
    }
  }

  int line_no() const { return line_no_; }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  int line_no_;
};

// Strips a '#' comment, respecting string literals.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

// ------------------------------------------------------------ whitelist ----

Whitelist Whitelist::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open whitelist file: " + path);
  std::vector<std::string> categories;
  std::map<std::string, std::string> display;
  std::string line;
  while (std::getline(in, line)) {
    line = text::trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto parts = text::split(line, '\t');
    categories.push_back(text::trim(parts[0]));
    if (parts.size() > 1 && !text::trim(parts[1]).empty()) {
      display[categories.back()] = text::trim(parts[1]);
    }
  }
  Whitelist wl = from_categories(std::move(categories));
  for (auto& [cat, name] : display) {
    wl.display_[cat] = name;
    wl.from_display_[text::to_lower(name)] = cat;
  }
  return wl;
}

Whitelist Whitelist::from_categories(std::vector<std::string> categories) {
  Whitelist wl;
  wl.categories_ = std::move(categories);
  for (const auto& cat : wl.categories_) {
    std::string name = text::split_camel_lower(cat);
    wl.display_[cat] = name;
    wl.from_display_[name] = cat;
    // Also accept the glued spelling ("countertop") when parsing prose.
    std::string glued;
    for (char c : name) {
      if (c != ' ') glued += c;
    }
    wl.from_display_.emplace(glued, cat);
  }
  return wl;
}

bool Whitelist::contains(const std::string& category) const {
  return display_.count(category) > 0;
}

std::string Whitelist::display_name(const std::string& category) const {
  auto it = display_.find(category);
  return it == display_.end() ? text::split_camel_lower(category) : it->second;
}

std::optional<std::string> Whitelist::category_from_display(const std::string& phrase) const {
  auto it = from_display_.find(text::to_lower(text::trim(phrase)));
  if (it == from_display_.end()) return std::nullopt;
  return it->second;
}

std::string Whitelist::comma_joined() const { return text::join(categories_, ", "); }

// ----------------------------------------------------------- affordance ----

const char* to_string(Capability c) {
  switch (c) {
    case Capability::Openable: return "openable";
    case Capability::Toggleable: return "toggleable";
    case Capability::Pickupable: return "pickupable";
    case Capability::Receptacle: return "receptacle";
    case Capability::Sliceable: return "sliceable";
    case Capability::Fillable: return "fillable";
    case Capability::Cleanable: return "cleanable";
    case Capability::Heatable: return "heatable";
  }
  return "?";
}

std::optional<Capability> capability_from_name(const std::string& name) {
  static const std::map<std::string, Capability> kMap = {
      {"openable", Capability::Openable},   {"toggleable", Capability::Toggleable},
      {"pickupable", Capability::Pickupable}, {"receptacle", Capability::Receptacle},
      {"sliceable", Capability::Sliceable}, {"fillable", Capability::Fillable},
      {"cleanable", Capability::Cleanable}, {"heatable", Capability::Heatable},
  };
  auto it = kMap.find(name);
  if (it == kMap.end()) return std::nullopt;
  return it->second;
}

Affordances Affordances::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open affordance file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad affordance file " + path + ": " + e.what());
  }
  std::map<std::string, std::set<Capability>> table;
  for (auto& [category, caps] : doc.items()) {
    std::set<Capability> set;
    for (const auto& c : caps) {
      auto cap = capability_from_name(c.get<std::string>());
      if (!cap) throw ConfigError("unknown capability '" + c.get<std::string>() + "'");
      set.insert(*cap);
    }
    table[category] = std::move(set);
  }
  return from_map(std::move(table));
}

Affordances Affordances::from_map(std::map<std::string, std::set<Capability>> table) {
  Affordances a;
  a.table_ = std::move(table);
  return a;
}

bool Affordances::allows(const std::string& category, Capability c) const {
  auto it = table_.find(category);
  return it != table_.end() && it->second.count(c) > 0;
}

bool Affordances::has_entry(const std::string& category) const {
  return table_.count(category) > 0;
}

void Affordances::check_covers(const Whitelist& whitelist) const {
  for (const auto& cat : whitelist.categories()) {
    if (!has_entry(cat)) throw ConfigError("no affordance entry for category " + cat);
  }
}

// ------------------------------------------------------------ plan AST -----

const char* to_string(Method m) {
  switch (m) {
    case Method::GoTo: return "go_to";
    case Method::Pickup: return "pickup";
    case Method::Place: return "place";
    case Method::PutDown: return "put_down";
    case Method::Open: return "open";
    case Method::Close: return "close";
    case Method::ToggleOn: return "toggle_on";
    case Method::ToggleOff: return "toggle_off";
    case Method::Slice: return "slice";
    case Method::Pour: return "pour";
    case Method::Clean: return "clean";
  }
  return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
  static const std::map<std::string, Method> kMap = {
      {"go_to", Method::GoTo},        {"pickup", Method::Pickup},
      {"place", Method::Place},       {"put_down", Method::PutDown},
      {"open", Method::Open},         {"close", Method::Close},
      {"toggle_on", Method::ToggleOn}, {"toggle_off", Method::ToggleOff},
      {"slice", Method::Slice},       {"pour", Method::Pour},
      {"clean", Method::Clean},
  };
  auto it = kMap.find(name);
  if (it == kMap.end()) return std::nullopt;
  return it->second;
}

const ObjectBinding* PlanProgram::find_binding(const std::string& var_name) const {
  for (const auto& b : bindings) {
    if (b.var_name == var_name) return &b;
  }
  return nullptr;
}

PlanProgram parse_plan(const std::string& source, const Whitelist& whitelist) {
  PlanProgram program;
  std::set<std::string> bound;
  std::istringstream in(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = text::trim(strip_comment(raw));
    if (line.empty()) continue;
    LineParser p(LineLexer(line, line_no).run(), line_no);

    Token head = p.expect(TokKind::Ident, "identifier");
    if (p.accept_symbol("=")) {
      // var = InteractionObject("Category", landmark = "...", attributes = [...])
      Token ctor = p.expect(TokKind::Ident, "constructor name");
      if (ctor.value != "InteractionObject") {
        throw ParseError(line_no, ctor.column, "unknown function '" + ctor.value + "'");
      }
      p.expect_symbol("(");
      Token category = p.expect(TokKind::String, "object category string");
      ObjectBinding binding;
      binding.var_name = head.value;
      binding.category = category.value;
      binding.span = {line_no, head.column};
      while (p.accept_symbol(",")) {
        Token kw = p.expect(TokKind::Ident, "keyword argument");
        p.expect_symbol("=");
        if (kw.value == "landmark") {
          binding.landmark = p.expect(TokKind::String, "landmark string").value;
        } else if (kw.value == "attributes") {
          p.expect_symbol("[");
          if (!p.accept_symbol("]")) {
            do {
              binding.attributes.push_back(
                  p.expect(TokKind::String, "attribute string").value);
            } while (p.accept_symbol(","));
            p.expect_symbol("]");
          }
        } else {
          throw ParseError(line_no, kw.column, "unknown keyword '" + kw.value + "'");
        }
      }
      p.expect_symbol(")");
      p.expect_end();
      if (!whitelist.contains(binding.category)) {
        throw ParseError(line_no, category.column,
                         "unknown object category '" + binding.category + "'");
      }
      if (binding.landmark && !whitelist.contains(*binding.landmark)) {
        throw ParseError(line_no, category.column,
                         "unknown landmark category '" + *binding.landmark + "'");
      }
      if (bound.count(binding.var_name)) {
        throw ParseError(line_no, head.column,
                         "duplicate object variable '" + binding.var_name + "'");
      }
      bound.insert(binding.var_name);
      program.bindings.push_back(std::move(binding));
    } else if (p.accept_symbol(".")) {
      // var.method([arg])
      Token method_tok = p.expect(TokKind::Ident, "method name");
      auto method = method_from_name(method_tok.value);
      if (!method) {
        throw ParseError(line_no, method_tok.column,
                         "unknown method '" + method_tok.value + "'");
      }
      p.expect_symbol("(");
      Statement stmt;
      stmt.receiver = head.value;
      stmt.method = *method;
      stmt.span = {line_no, head.column};
      if (!p.accept_symbol(")")) {
        Token arg = p.expect(TokKind::Ident, "argument variable");
        stmt.arg = arg.value;
        p.expect_symbol(")");
      }
      p.expect_end();
      if (!bound.count(stmt.receiver)) {
        throw ParseError(line_no, head.column,
                         "use of unbound variable '" + stmt.receiver + "'");
      }
      if (stmt.method == Method::Place) {
        if (!stmt.arg) throw ParseError(line_no, head.column, "place() needs a target");
        if (!bound.count(*stmt.arg)) {
          throw ParseError(line_no, head.column,
                           "place target '" + *stmt.arg + "' is not bound");
        }
      } else if (stmt.arg) {
        throw ParseError(line_no, head.column,
                         std::string(to_string(stmt.method)) + "() takes no argument");
      }
      program.statements.push_back(std::move(stmt));
    } else {
      throw ParseError(line_no, p.peek().column, "expected '=' or '.'");
    }
  }
  return program;
}

std::string pretty_print(const PlanProgram& program) {
  std::ostringstream out;
  for (const auto& b : program.bindings) {
    out << b.var_name << " = InteractionObject(\"" << b.category << "\"";
    if (b.landmark) out << ", landmark = \"" << *b.landmark << "\"";
    if (!b.attributes.empty()) {
      out << ", attributes = [";
      for (size_t i = 0; i < b.attributes.size(); ++i) {
        if (i) out << ", ";
        out << "\"" << b.attributes[i] << "\"";
      }
      out << "]";
    }
    out << ")\n";
  }
  for (const auto& s : program.statements) {
    out << s.receiver << "." << to_string(s.method) << "(";
    if (s.arg) out << *s.arg;
    out << ")\n";
  }
  return out.str();
}

// ------------------------------------------------------------ validator ----

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Affordance: return "AFFORDANCE";
    case ViolationKind::DoubleHold: return "DOUBLE_HOLD";
    case ViolationKind::Redundant: return "REDUNDANT";
    case ViolationKind::UnplacedHold: return "UNPLACED_HOLD";
    case ViolationKind::PlaceTargetNotReceptacle: return "PLACE_TARGET_NOT_RECEPTACLE";
  }
  return "?";
}

namespace {

std::optional<Capability> required_capability(Method m) {
  switch (m) {
    case Method::Pickup:
    case Method::PutDown:
      return Capability::Pickupable;
    case Method::Open:
    case Method::Close:
      return Capability::Openable;
    case Method::ToggleOn:
    case Method::ToggleOff:
      return Capability::Toggleable;
    case Method::Slice:
      return Capability::Sliceable;
    case Method::Pour:
      return Capability::Fillable;
    case Method::Clean:
      return Capability::Cleanable;
    case Method::GoTo:
    case Method::Place:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Violation> validate_plan(const PlanProgram& program, const Affordances& affordances) {
  std::vector<Violation> out;
  std::optional<std::string> held;  // symbolic held-variable slot

  const Statement* prev = nullptr;
  for (const auto& stmt : program.statements) {
    const ObjectBinding* binding = program.find_binding(stmt.receiver);
    if (!binding) continue;  // parse guarantees this; defensive for hand-built ASTs

    if (auto cap = required_capability(stmt.method)) {
      if (!affordances.allows(binding->category, *cap)) {
        out.push_back({ViolationKind::Affordance, Severity::Error,
                       binding->category + " does not support " + to_string(stmt.method) +
                           "()",
                       stmt.span});
      }
    }
    if (stmt.method == Method::Place) {
      if (!affordances.allows(binding->category, Capability::Pickupable)) {
        out.push_back({ViolationKind::Affordance, Severity::Error,
                       binding->category + " cannot be placed (not pickupable)", stmt.span});
      }
      const ObjectBinding* target = stmt.arg ? program.find_binding(*stmt.arg) : nullptr;
      if (target && !affordances.allows(target->category, Capability::Receptacle)) {
        out.push_back({ViolationKind::PlaceTargetNotReceptacle, Severity::Error,
                       target->category + " is not a receptacle", stmt.span});
      }
    }

    if (prev && prev->method == stmt.method && prev->receiver == stmt.receiver) {
      out.push_back({ViolationKind::Redundant, Severity::Error,
                     std::string(to_string(stmt.method)) + "() repeated on " + stmt.receiver +
                         " in successive steps",
                     stmt.span});
    }

    switch (stmt.method) {
      case Method::Pickup:
        if (held && *held != stmt.receiver) {
          out.push_back({ViolationKind::DoubleHold, Severity::Error,
                         "pickup of " + stmt.receiver + " while still holding " + *held,
                         stmt.span});
        }
        held = stmt.receiver;
        break;
      case Method::Place:
      case Method::PutDown:
        if (held == stmt.receiver) held.reset();
        break;
      default:
        break;
    }
    prev = &stmt;
  }
  if (held) {
    out.push_back({ViolationKind::UnplacedHold, Severity::Warning,
                   "program ends while still holding " + *held,
                   {0, 0}});
  }
  return out;
}

bool has_errors(const std::vector<Violation>& violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Severity::Error; });
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << to_string(v.kind) << (v.severity == Severity::Error ? " (error): " : " (warning): ")
        << v.message << "\n";
  }
  return out.str();
}

// ------------------------------------------------------------ QA script ----

const char* to_string(MoveDirection d) {
  switch (d) {
    case MoveDirection::Left: return "left";
    case MoveDirection::Right: return "right";
    case MoveDirection::Forward: return "forward";
    case MoveDirection::Backward: return "backward";
  }
  return "?";
}

std::optional<MoveDirection> direction_from_name(const std::string& name) {
  if (name == "left") return MoveDirection::Left;
  if (name == "right") return MoveDirection::Right;
  if (name == "forward") return MoveDirection::Forward;
  if (name == "backward") return MoveDirection::Backward;
  return std::nullopt;
}

QaScript parse_qa_script(const std::string& source, const Whitelist& whitelist) {
  QaScript script;
  std::istringstream in(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = text::trim(strip_comment(raw));
    if (line.empty()) continue;
    LineParser p(LineLexer(line, line_no).run(), line_no);
    Token fn = p.expect(TokKind::Ident, "function name");
    p.expect_symbol("(");
    QaCall call;
    if (fn.value == "askForLocation" || fn.value == "askForAppearance" ||
        fn.value == "askForDirection") {
      call.kind = fn.value == "askForLocation"     ? QaCallKind::AskForLocation
                  : fn.value == "askForAppearance" ? QaCallKind::AskForAppearance
                                                   : QaCallKind::AskForDirection;
      Token cat = p.expect(TokKind::String, "object category");
      if (!whitelist.contains(cat.value)) {
        throw ParseError(line_no, cat.column, "unknown object category '" + cat.value + "'");
      }
      call.category = cat.value;
    } else if (fn.value == "turn" || fn.value == "move") {
      call.kind = fn.value == "turn" ? QaCallKind::Turn : QaCallKind::Move;
      Token dir = p.expect(TokKind::String, "direction");
      auto d = direction_from_name(dir.value);
      if (!d) throw ParseError(line_no, dir.column, "unknown direction '" + dir.value + "'");
      call.direction = d;
    } else if (fn.value == "search_near_other_object") {
      call.kind = QaCallKind::SearchNearOtherObject;
      Token cat = p.expect(TokKind::String, "object category");
      p.expect_symbol(",");
      Token lm = p.expect(TokKind::String, "landmark category");
      if (!whitelist.contains(cat.value)) {
        throw ParseError(line_no, cat.column, "unknown object category '" + cat.value + "'");
      }
      if (!whitelist.contains(lm.value)) {
        throw ParseError(line_no, lm.column, "unknown landmark category '" + lm.value + "'");
      }
      call.category = cat.value;
      call.landmark_category = lm.value;
    } else {
      throw ParseError(line_no, fn.column, "unknown function '" + fn.value + "'");
    }
    p.expect_symbol(")");
    p.expect_end();
    script.calls.push_back(std::move(call));
  }
  return script;
}

}  // namespace homeplan::dsl
