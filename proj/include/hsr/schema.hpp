#ifndef HSR_SCHEMA_HPP
#define HSR_SCHEMA_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hsr/sequent.hpp"

namespace hsr {

enum class MetavarKind { Formula, Multiset, Succedent };

struct Metavar {
  std::string name;
  MetavarKind kind;
};

// Formula pattern: a formula tree whose leaves may be formula metavariables.
class FPat;
using FPatPtr = std::shared_ptr<const FPat>;

class FPat {
public:
  enum class Kind { Atom, Bot, Top, And, Or, Imp, MVar };
  Kind kind;
  std::string name;  // Atom or MVar
  FPatPtr lhs, rhs;

  static FPatPtr atom(std::string n);
  static FPatPtr bot();
  static FPatPtr top();
  static FPatPtr conj(FPatPtr l, FPatPtr r);
  static FPatPtr disj(FPatPtr l, FPatPtr r);
  static FPatPtr imp(FPatPtr l, FPatPtr r);
  static FPatPtr mvar(std::string n);
  static FPatPtr lift(const FormulaPtr& f);  // concrete formula as pattern

private:
  FPat(Kind k, std::string n, FPatPtr l, FPatPtr r)
      : kind(k), name(std::move(n)), lhs(std::move(l)), rhs(std::move(r)) {}
};

struct MsetVar {
  std::string name;
};

using AnteItem = std::variant<FPatPtr, MsetVar>;

struct SuccVar {
  std::string name;
};
struct SuccEmpty {};
using SuccPat = std::variant<SuccEmpty, FPatPtr, SuccVar>;

struct SequentPattern {
  std::vector<AnteItem> ante;
  SuccPat succ = SuccEmpty{};
};

// Substitution value per metavariable kind.
using SubstValue =
    std::variant<FormulaPtr, FormulaMultiset, std::optional<FormulaPtr>>;

class Substitution {
public:
  void bind_formula(const std::string& n, FormulaPtr f);
  void bind_multiset(const std::string& n, FormulaMultiset m);
  void bind_succedent(const std::string& n, std::optional<FormulaPtr> s);

  bool has(const std::string& n) const { return map_.count(n) != 0; }
  const FormulaPtr& formula(const std::string& n) const;
  const FormulaMultiset& multiset(const std::string& n) const;
  const std::optional<FormulaPtr>& succedent(const std::string& n) const;

  const std::map<std::string, SubstValue>& entries() const { return map_; }
  bool agrees_with(const Substitution& other,
                   const std::set<std::string>& names) const;

private:
  std::map<std::string, SubstValue> map_;
};

struct IncompleteSubstitution : std::runtime_error {
  explicit IncompleteSubstitution(const std::string& mv)
      : std::runtime_error("substitution does not bind metavariable " + mv) {}
};

// Context-sharing hypersequent rule schema. The external context G is
// implicit: every premiss and the conclusion carry it. Linkage assigns each
// premiss to the conclusion-active component it is linked to (Def. 3.1).
struct HypRuleSchema {
  std::string name;
  std::map<std::string, MetavarKind> mvars;
  std::vector<SequentPattern> premisses;
  std::vector<SequentPattern> concl_active;
  std::vector<int> linkage;  // premiss index -> conclusion component index

  std::vector<int> group(int component) const;  // premiss indices of M_i
};

struct TopRule {
  std::string name;
  std::vector<SequentPattern> premisses;
  SequentPattern concl;
};

struct TwoSystem {
  std::string name;
  std::string bottom_name;
  std::map<std::string, MetavarKind> mvars;
  std::vector<TopRule> tops;  // k top rules; bottom has k premisses
  std::set<std::string> shared;

  int arity() const { return static_cast<int>(tops.size()); }
  const TopRule* top_by_name(const std::string& n) const;
  int top_index(const std::string& n) const;  // 1-based, 0 if absent
};

struct NDRule;  // natded.hpp

enum class BaseCalculus { LJ, HLJ, NJ };

struct Calculus {
  BaseCalculus base = BaseCalculus::HLJ;
  std::string name;
  std::map<std::string, HypRuleSchema> hyp_rules;
  std::map<std::string, TwoSystem> systems;
  std::map<std::string, std::shared_ptr<const NDRule>> nd_rules;

  const TwoSystem* system_of_rule(const std::string& rule_name) const;
};

// --- operations -----------------------------------------------------------

Sequent instantiate_pattern(const SequentPattern& pat, const Substitution& s);

struct InstantiatedRule {
  std::vector<Sequent> premisses;  // active part of each premiss
  std::vector<Sequent> conclusion;
};

InstantiatedRule instantiate(const HypRuleSchema& schema, const Substitution& s);
InstantiatedRule instantiate_top(const TopRule& top, const Substitution& s);

// All ways of matching the schema's conclusion against `goal`: a choice of
// active components plus a substitution reproducing them exactly. Finite and
// duplicate-free.
struct ActiveMatch {
  Substitution subst;
  std::vector<int> selection;  // goal component indices, one per active slot
};

std::vector<ActiveMatch> match_active(const HypRuleSchema& schema,
                                      const Hypersequent& goal);

// Matches a single pattern against a concrete sequent, extending `base`.
std::vector<Substitution> match_pattern(const SequentPattern& pat,
                                        const Sequent& s,
                                        const Substitution& base);

// Matches a formula pattern against a concrete formula, extending `s`.
bool match_fpat(const FPatPtr& p, const FormulaPtr& f, Substitution& s);

struct Violation {
  int node_id;  // -1 when not tied to a derivation node
  std::string constraint;
  std::string message;
};

struct CheckReport {
  std::vector<Violation> violations;
  std::vector<Violation> warnings;
  bool ok() const { return violations.empty(); }
  void add(int node, std::string constraint, std::string msg) {
    violations.push_back({node, std::move(constraint), std::move(msg)});
  }
  void warn(int node, std::string constraint, std::string msg) {
    warnings.push_back({node, std::move(constraint), std::move(msg)});
  }
  std::string summary() const;
};

CheckReport validate_schema(const HypRuleSchema& schema);
CheckReport validate_system(const TwoSystem& sys);

std::set<std::string> pattern_mvars(const SequentPattern& pat);
std::set<std::string> schema_mvars_used(const HypRuleSchema& schema);

std::string to_text(const SequentPattern& pat);

}  // namespace hsr

#endif
