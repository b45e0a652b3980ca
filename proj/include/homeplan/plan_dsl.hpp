#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homeplan/error.hpp"

namespace homeplan::dsl {

struct SourceSpan {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
              ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Object categories the planner may reference, plus how the oracle names them
// in prose ("GarbageCan" <-> "garbage can").
class Whitelist {
 public:
  static Whitelist load(const std::string& path);
  static Whitelist from_categories(std::vector<std::string> categories);

  bool contains(const std::string& category) const;
  const std::vector<std::string>& categories() const { return categories_; }
  std::string display_name(const std::string& category) const;
  std::optional<std::string> category_from_display(const std::string& phrase) const;
  std::string comma_joined() const;

 private:
  std::vector<std::string> categories_;
  std::map<std::string, std::string> display_;          // category -> prose name
  std::map<std::string, std::string> from_display_;     // lowercased prose -> category
};

enum class Capability {
  Openable,
  Toggleable,
  Pickupable,
  Receptacle,
  Sliceable,
  Fillable,
  Cleanable,
  Heatable,
};

const char* to_string(Capability c);
std::optional<Capability> capability_from_name(const std::string& name);

class Affordances {
 public:
  static Affordances load(const std::string& path);
  static Affordances from_map(std::map<std::string, std::set<Capability>> table);

  bool allows(const std::string& category, Capability c) const;
  bool has_entry(const std::string& category) const;
  const std::map<std::string, std::set<Capability>>& table() const { return table_; }
  // Every whitelist category must have an affordance entry.
  void check_covers(const Whitelist& whitelist) const;

 private:
  std::map<std::string, std::set<Capability>> table_;
};

enum class Method {
  GoTo,
  Pickup,
  Place,
  PutDown,
  Open,
  Close,
  ToggleOn,
  ToggleOff,
  Slice,
  Pour,
  Clean,
};

const char* to_string(Method m);
std::optional<Method> method_from_name(const std::string& name);

struct ObjectBinding {
  std::string var_name;
  std::string category;
  std::optional<std::string> landmark;
  std::vector<std::string> attributes;
  SourceSpan span;

  bool operator==(const ObjectBinding& o) const {
    return var_name == o.var_name && category == o.category && landmark == o.landmark &&
           attributes == o.attributes;
  }
};

struct Statement {
  std::string receiver;
  Method method = Method::GoTo;
  std::optional<std::string> arg;  // Place target variable
  SourceSpan span;

  bool operator==(const Statement& o) const {
    return receiver == o.receiver && method == o.method && arg == o.arg;
  }
};

struct PlanProgram {
  std::vector<ObjectBinding> bindings;
  std::vector<Statement> statements;

  bool empty() const { return bindings.empty() && statements.empty(); }
  const ObjectBinding* find_binding(const std::string& var_name) const;
  bool structurally_equal(const PlanProgram& o) const {
    return bindings == o.bindings && statements == o.statements;
  }
};

PlanProgram parse_plan(const std::string& source, const Whitelist& whitelist);
std::string pretty_print(const PlanProgram& program);

enum class ViolationKind {
  Affordance,
  DoubleHold,
  Redundant,
  UnplacedHold,
  PlaceTargetNotReceptacle,
};

const char* to_string(ViolationKind k);

enum class Severity { Error, Warning };

struct Violation {
  ViolationKind kind;
  Severity severity;
  std::string message;
  SourceSpan span;
};

std::vector<Violation> validate_plan(const PlanProgram& program, const Affordances& affordances);
bool has_errors(const std::vector<Violation>& violations);
std::string describe(const std::vector<Violation>& violations);

// --- Question/answer scripts (Location/Appearance/Direction API) ---

enum class QaCallKind {
  AskForLocation,
  AskForAppearance,
  AskForDirection,
  Turn,
  Move,
  SearchNearOtherObject,
};

enum class MoveDirection { Left, Right, Forward, Backward };

const char* to_string(MoveDirection d);
std::optional<MoveDirection> direction_from_name(const std::string& name);

struct QaCall {
  QaCallKind kind;
  std::string category;           // ask* / search target
  std::string landmark_category;  // search landmark
  std::optional<MoveDirection> direction;

  bool operator==(const QaCall& o) const {
    return kind == o.kind && category == o.category &&
           landmark_category == o.landmark_category && direction == o.direction;
  }
};

struct QaScript {
  std::vector<QaCall> calls;
  bool empty() const { return calls.empty(); }
};

QaScript parse_qa_script(const std::string& source, const Whitelist& whitelist);

}  // namespace homeplan::dsl
