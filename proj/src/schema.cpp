#include "hsr/schema.hpp"

#include <algorithm>
#include <functional>

namespace hsr {

FPatPtr FPat::atom(std::string n) {
  return FPatPtr(new FPat(Kind::Atom, std::move(n), nullptr, nullptr));
}
FPatPtr FPat::bot() { return FPatPtr(new FPat(Kind::Bot, "", nullptr, nullptr)); }
FPatPtr FPat::top() { return FPatPtr(new FPat(Kind::Top, "", nullptr, nullptr)); }
FPatPtr FPat::conj(FPatPtr l, FPatPtr r) {
  return FPatPtr(new FPat(Kind::And, "", std::move(l), std::move(r)));
}
FPatPtr FPat::disj(FPatPtr l, FPatPtr r) {
  return FPatPtr(new FPat(Kind::Or, "", std::move(l), std::move(r)));
}
FPatPtr FPat::imp(FPatPtr l, FPatPtr r) {
  return FPatPtr(new FPat(Kind::Imp, "", std::move(l), std::move(r)));
}
FPatPtr FPat::mvar(std::string n) {
  return FPatPtr(new FPat(Kind::MVar, std::move(n), nullptr, nullptr));
}
FPatPtr FPat::lift(const FormulaPtr& f) {
  switch (f->kind) {
    case Conn::Atom: return atom(f->name);
    case Conn::Bot: return bot();
    case Conn::Top: return top();
    case Conn::And: return conj(lift(f->lhs), lift(f->rhs));
    case Conn::Or: return disj(lift(f->lhs), lift(f->rhs));
    case Conn::Imp: return imp(lift(f->lhs), lift(f->rhs));
  }
  throw std::logic_error("bad formula kind");
}

void Substitution::bind_formula(const std::string& n, FormulaPtr f) {
  map_[n] = SubstValue(std::move(f));
}
void Substitution::bind_multiset(const std::string& n, FormulaMultiset m) {
  map_[n] = SubstValue(std::move(m));
}
void Substitution::bind_succedent(const std::string& n,
                                  std::optional<FormulaPtr> s) {
  map_[n] = SubstValue(std::move(s));
}

const FormulaPtr& Substitution::formula(const std::string& n) const {
  auto it = map_.find(n);
  if (it == map_.end()) throw IncompleteSubstitution(n);
  if (const auto* v = std::get_if<FormulaPtr>(&it->second)) return *v;
  throw std::runtime_error("metavariable " + n + " is not formula-kind");
}
const FormulaMultiset& Substitution::multiset(const std::string& n) const {
  auto it = map_.find(n);
  if (it == map_.end()) throw IncompleteSubstitution(n);
  if (const auto* v = std::get_if<FormulaMultiset>(&it->second)) return *v;
  throw std::runtime_error("metavariable " + n + " is not multiset-kind");
}
const std::optional<FormulaPtr>& Substitution::succedent(
    const std::string& n) const {
  auto it = map_.find(n);
  if (it == map_.end()) throw IncompleteSubstitution(n);
  if (const auto* v = std::get_if<std::optional<FormulaPtr>>(&it->second))
    return *v;
  throw std::runtime_error("metavariable " + n + " is not succedent-kind");
}

namespace {

bool value_eq(const SubstValue& a, const SubstValue& b) {
  if (a.index() != b.index()) return false;
  if (const auto* f = std::get_if<FormulaPtr>(&a))
    return formula_eq(*f, std::get<FormulaPtr>(b));
  if (const auto* m = std::get_if<FormulaMultiset>(&a))
    return *m == std::get<FormulaMultiset>(b);
  const auto& x = std::get<std::optional<FormulaPtr>>(a);
  const auto& y = std::get<std::optional<FormulaPtr>>(b);
  if (x.has_value() != y.has_value()) return false;
  return !x || formula_eq(*x, *y);
}

}  // namespace

bool Substitution::agrees_with(const Substitution& other,
                               const std::set<std::string>& names) const {
  for (const auto& n : names) {
    auto a = map_.find(n);
    auto b = other.map_.find(n);
    if (a == map_.end() || b == other.map_.end()) continue;
    if (!value_eq(a->second, b->second)) return false;
  }
  return true;
}

std::vector<int> HypRuleSchema::group(int component) const {
  std::vector<int> out;
  for (std::size_t p = 0; p < linkage.size(); p++)
    if (linkage[p] == component) out.push_back(static_cast<int>(p));
  return out;
}

const TopRule* TwoSystem::top_by_name(const std::string& n) const {
  for (const auto& t : tops)
    if (t.name == n) return &t;
  return nullptr;
}

int TwoSystem::top_index(const std::string& n) const {
  for (std::size_t i = 0; i < tops.size(); i++)
    if (tops[i].name == n) return static_cast<int>(i) + 1;
  return 0;
}

const TwoSystem* Calculus::system_of_rule(const std::string& rule_name) const {
  for (const auto& [_, sys] : systems) {
    if (sys.bottom_name == rule_name) return &sys;
    if (sys.top_by_name(rule_name)) return &sys;
  }
  return nullptr;
}

namespace {

FormulaPtr subst_fpat(const FPatPtr& p, const Substitution& s) {
  switch (p->kind) {
    case FPat::Kind::Atom: return Formula::atom(p->name);
    case FPat::Kind::Bot: return Formula::bot();
    case FPat::Kind::Top: return Formula::top();
    case FPat::Kind::And: return Formula::conj(subst_fpat(p->lhs, s), subst_fpat(p->rhs, s));
    case FPat::Kind::Or: return Formula::disj(subst_fpat(p->lhs, s), subst_fpat(p->rhs, s));
    case FPat::Kind::Imp: return Formula::imp(subst_fpat(p->lhs, s), subst_fpat(p->rhs, s));
    case FPat::Kind::MVar: return s.formula(p->name);
  }
  throw std::logic_error("bad pattern kind");
}

}  // namespace

Sequent instantiate_pattern(const SequentPattern& pat, const Substitution& s) {
  Sequent out;
  for (const auto& item : pat.ante) {
    if (const auto* fp = std::get_if<FPatPtr>(&item)) {
      out.ante.add(subst_fpat(*fp, s));
    } else {
      out.ante.add_all(s.multiset(std::get<MsetVar>(item).name));
    }
  }
  if (const auto* fp = std::get_if<FPatPtr>(&pat.succ)) {
    out.succ = subst_fpat(*fp, s);
  } else if (const auto* sv = std::get_if<SuccVar>(&pat.succ)) {
    out.succ = s.succedent(sv->name);
  }
  return out;
}

InstantiatedRule instantiate(const HypRuleSchema& schema, const Substitution& s) {
  InstantiatedRule out;
  for (const auto& p : schema.premisses)
    out.premisses.push_back(instantiate_pattern(p, s));
  for (const auto& c : schema.concl_active)
    out.conclusion.push_back(instantiate_pattern(c, s));
  return out;
}

InstantiatedRule instantiate_top(const TopRule& top, const Substitution& s) {
  InstantiatedRule out;
  for (const auto& p : top.premisses)
    out.premisses.push_back(instantiate_pattern(p, s));
  out.conclusion.push_back(instantiate_pattern(top.concl, s));
  return out;
}

// --- matching ---------------------------------------------------------------

bool match_fpat(const FPatPtr& p, const FormulaPtr& f, Substitution& s) {
  switch (p->kind) {
    case FPat::Kind::MVar: {
      if (s.has(p->name)) return formula_eq(s.formula(p->name), f);
      s.bind_formula(p->name, f);
      return true;
    }
    case FPat::Kind::Atom: return f->kind == Conn::Atom && f->name == p->name;
    case FPat::Kind::Bot: return f->kind == Conn::Bot;
    case FPat::Kind::Top: return f->kind == Conn::Top;
    case FPat::Kind::And:
      return f->kind == Conn::And && match_fpat(p->lhs, f->lhs, s) &&
             match_fpat(p->rhs, f->rhs, s);
    case FPat::Kind::Or:
      return f->kind == Conn::Or && match_fpat(p->lhs, f->lhs, s) &&
             match_fpat(p->rhs, f->rhs, s);
    case FPat::Kind::Imp:
      return f->kind == Conn::Imp && match_fpat(p->lhs, f->lhs, s) &&
             match_fpat(p->rhs, f->rhs, s);
  }
  return false;
}

namespace {

void dedupe(std::vector<Substitution>& subs) {
  for (std::size_t i = 0; i < subs.size(); i++) {
    for (std::size_t j = i + 1; j < subs.size();) {
      bool same = true;
      const auto& a = subs[i].entries();
      const auto& b = subs[j].entries();
      if (a.size() != b.size()) same = false;
      if (same) {
        auto it = a.begin();
        auto jt = b.begin();
        for (; it != a.end(); ++it, ++jt) {
          if (it->first != jt->first || !value_eq(it->second, jt->second)) {
            same = false;
            break;
          }
        }
      }
      if (same)
        subs.erase(subs.begin() + static_cast<std::ptrdiff_t>(j));
      else
        j++;
    }
  }
}

}  // namespace

std::vector<Substitution> match_pattern(const SequentPattern& pat,
                                        const Sequent& s,
                                        const Substitution& base) {
  std::vector<Substitution> out;

  // Succedent first: cheap filter.
  std::vector<Substitution> seeds;
  if (std::holds_alternative<SuccEmpty>(pat.succ)) {
    if (s.succ) return out;
    seeds.push_back(base);
  } else if (const auto* fp = std::get_if<FPatPtr>(&pat.succ)) {
    if (!s.succ) return out;
    Substitution sub = base;
    if (!match_fpat(*fp, *s.succ, sub)) return out;
    seeds.push_back(std::move(sub));
  } else {
    const auto& sv = std::get<SuccVar>(pat.succ);
    Substitution sub = base;
    if (sub.has(sv.name)) {
      const auto& bound = sub.succedent(sv.name);
      if (bound.has_value() != s.succ.has_value()) return out;
      if (bound && !formula_eq(*bound, *s.succ)) return out;
    } else {
      sub.bind_succedent(sv.name, s.succ);
    }
    seeds.push_back(std::move(sub));
  }

  // Antecedent: formula patterns consume individual occurrences, the
  // remainder is distributed over the multiset metavariables.
  std::vector<FPatPtr> fpats;
  std::vector<std::string> msets;
  for (const auto& item : pat.ante) {
    if (const auto* fp = std::get_if<FPatPtr>(&item))
      fpats.push_back(*fp);
    else
      msets.push_back(std::get<MsetVar>(item).name);
  }

  std::function<void(std::size_t, FormulaMultiset, Substitution)> assign_fpats =
      [&](std::size_t fi, FormulaMultiset rest, Substitution sub) {
        if (fi == fpats.size()) {
          // Distribute `rest` over the multiset metavariables.
          std::vector<FormulaMultiset> parts(msets.size());
          // Pre-bound multiset vars consume their value from rest.
          FormulaMultiset remaining = rest;
          std::vector<std::size_t> free_idx;
          for (std::size_t m = 0; m < msets.size(); m++) {
            if (sub.has(msets[m])) {
              auto left = remaining.minus(sub.multiset(msets[m]));
              if (!left) return;
              remaining = std::move(*left);
            } else {
              free_idx.push_back(m);
            }
          }
          if (free_idx.empty()) {
            if (!remaining.empty()) return;
            out.push_back(std::move(sub));
            return;
          }
          // Each remaining element goes to one of the free multiset vars.
          std::vector<FormulaMultiset> bins(free_idx.size());
          std::function<void(std::size_t)> distribute = [&](std::size_t ei) {
            if (ei == remaining.items().size()) {
              Substitution final_sub = sub;
              for (std::size_t b = 0; b < free_idx.size(); b++)
                final_sub.bind_multiset(msets[free_idx[b]], bins[b]);
              out.push_back(std::move(final_sub));
              return;
            }
            for (std::size_t b = 0; b < bins.size(); b++) {
              bins[b].add(remaining.items()[ei]);
              distribute(ei + 1);
              bins[b].remove_one(remaining.items()[ei]);
            }
          };
          distribute(0);
          return;
        }
        // Choose an occurrence for formula pattern fi.
        std::vector<FormulaPtr> tried;
        for (const auto& f : rest.items()) {
          bool seen = false;
          for (const auto& t : tried)
            if (formula_eq(t, f)) { seen = true; break; }
          if (seen) continue;
          tried.push_back(f);
          Substitution sub2 = sub;
          if (!match_fpat(fpats[fi], f, sub2)) continue;
          FormulaMultiset rest2 = rest;
          rest2.remove_one(f);
          assign_fpats(fi + 1, std::move(rest2), std::move(sub2));
        }
      };

  for (auto& seed : seeds) assign_fpats(0, s.ante, seed);
  dedupe(out);
  return out;
}

std::vector<ActiveMatch> match_active(const HypRuleSchema& schema,
                                      const Hypersequent& goal) {
  std::vector<ActiveMatch> out;
  const std::size_t k = schema.concl_active.size();
  if (goal.size() < k) return out;

  std::vector<int> sel;
  std::vector<bool> used(goal.size(), false);
  std::function<void(std::size_t, Substitution)> place =
      [&](std::size_t slot, Substitution sub) {
        if (slot == k) {
          out.push_back(ActiveMatch{std::move(sub), sel});
          return;
        }
        for (std::size_t c = 0; c < goal.size(); c++) {
          if (used[c]) continue;
          auto subs = match_pattern(schema.concl_active[slot], goal.at(c), sub);
          if (subs.empty()) continue;
          used[c] = true;
          sel.push_back(static_cast<int>(c));
          for (auto& s2 : subs) place(slot + 1, s2);
          sel.pop_back();
          used[c] = false;
        }
      };
  place(0, Substitution{});

  // Duplicate-free: drop matches equal in both selection and substitution.
  for (std::size_t i = 0; i < out.size(); i++) {
    for (std::size_t j = i + 1; j < out.size();) {
      bool same = out[i].selection == out[j].selection;
      if (same) {
        const auto& a = out[i].subst.entries();
        const auto& b = out[j].subst.entries();
        same = a.size() == b.size();
        if (same) {
          auto it = a.begin(); auto jt = b.begin();
          for (; it != a.end(); ++it, ++jt)
            if (it->first != jt->first || !value_eq(it->second, jt->second)) {
              same = false;
              break;
            }
        }
      }
      if (same)
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
      else
        j++;
    }
  }
  return out;
}

// --- validation --------------------------------------------------------------

std::set<std::string> pattern_mvars(const SequentPattern& pat) {
  std::set<std::string> out;
  std::function<void(const FPatPtr&)> walk = [&](const FPatPtr& p) {
    if (p->kind == FPat::Kind::MVar) out.insert(p->name);
    if (p->lhs) walk(p->lhs);
    if (p->rhs) walk(p->rhs);
  };
  for (const auto& item : pat.ante) {
    if (const auto* fp = std::get_if<FPatPtr>(&item))
      walk(*fp);
    else
      out.insert(std::get<MsetVar>(item).name);
  }
  if (const auto* fp = std::get_if<FPatPtr>(&pat.succ)) walk(*fp);
  if (const auto* sv = std::get_if<SuccVar>(&pat.succ)) out.insert(sv->name);
  return out;
}

std::set<std::string> schema_mvars_used(const HypRuleSchema& schema) {
  std::set<std::string> out;
  for (const auto& p : schema.premisses)
    for (const auto& n : pattern_mvars(p)) out.insert(n);
  for (const auto& c : schema.concl_active)
    for (const auto& n : pattern_mvars(c)) out.insert(n);
  return out;
}

CheckReport validate_schema(const HypRuleSchema& schema) {
  CheckReport rep;
  if (schema.concl_active.empty())
    rep.add(-1, "conclusion", "schema has no conclusion components");
  if (schema.linkage.size() != schema.premisses.size())
    rep.add(-1, "linkage", "linkage must be total on premisses");
  for (std::size_t p = 0; p < schema.linkage.size(); p++) {
    int c = schema.linkage[p];
    if (c < 0 || c >= static_cast<int>(schema.concl_active.size()))
      rep.add(-1, "linkage",
              "premiss " + std::to_string(p + 1) + " linked to missing component");
  }
  for (const auto& n : schema_mvars_used(schema))
    if (!schema.mvars.count(n))
      rep.add(-1, "metavars", "undeclared metavariable " + n);
  // One active component per premiss is structural here: each premiss
  // pattern is a single sequent, so nothing to check beyond presence.
  return rep;
}

CheckReport validate_system(const TwoSystem& sys) {
  CheckReport rep;
  if (sys.tops.empty()) rep.add(-1, "tops", "system has no top rules");
  for (const auto& t : sys.tops) {
    for (const auto& n : pattern_mvars(t.concl))
      if (!sys.mvars.count(n)) rep.add(-1, "metavars", "undeclared metavariable " + n);
    for (const auto& p : t.premisses)
      for (const auto& n : pattern_mvars(p))
        if (!sys.mvars.count(n)) rep.add(-1, "metavars", "undeclared metavariable " + n);
  }
  for (const auto& n : sys.shared)
    if (!sys.mvars.count(n)) rep.add(-1, "shared", "undeclared shared metavariable " + n);
  return rep;
}

std::string CheckReport::summary() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "\n";
    out += "node " + std::to_string(v.node_id) + " [" + v.constraint + "] " + v.message;
  }
  return out;
}

std::string to_text(const SequentPattern& pat) {
  std::string out;
  bool first = true;
  std::function<std::string(const FPatPtr&)> fp = [&](const FPatPtr& p) -> std::string {
    switch (p->kind) {
      case FPat::Kind::Atom: return p->name;
      case FPat::Kind::MVar: return p->name;
      case FPat::Kind::Bot: return "bot";
      case FPat::Kind::Top: return "top";
      case FPat::Kind::And: return "(" + fp(p->lhs) + " & " + fp(p->rhs) + ")";
      case FPat::Kind::Or: return "(" + fp(p->lhs) + " v " + fp(p->rhs) + ")";
      case FPat::Kind::Imp:
        if (p->rhs->kind == FPat::Kind::Bot) return "~" + fp(p->lhs);
        return "(" + fp(p->lhs) + " -> " + fp(p->rhs) + ")";
    }
    return "?";
  };
  for (const auto& item : pat.ante) {
    if (!first) out += ", ";
    first = false;
    if (const auto* f = std::get_if<FPatPtr>(&item))
      out += fp(*f);
    else
      out += std::get<MsetVar>(item).name;
  }
  out += out.empty() ? "=>" : " =>";
  if (const auto* f = std::get_if<FPatPtr>(&pat.succ)) {
    out += " " + fp(*f);
  } else if (const auto* sv = std::get_if<SuccVar>(&pat.succ)) {
    out += " " + sv->name;
  }
  return out;
}

}  // namespace hsr
