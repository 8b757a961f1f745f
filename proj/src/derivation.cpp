#include "hsr/derivation.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hsr {

namespace rules {
bool is_builtin(const std::string& name) {
  static const std::set<std::string> names = {ax,    bot_ax, and_l, and_r, or_l,
                                              or_r,  imp_l,  imp_r, iw,    ic,
                                              cut,   ew,     ec,    dummy};
  return names.count(name) != 0;
}
}  // namespace rules

std::unique_ptr<DNode> DNode::clone() const {
  auto out = std::make_unique<DNode>();
  out->id = id;
  out->concl = concl;
  out->rule = rule;
  out->subst = subst;
  out->sys = sys;
  for (const auto& p : premisses) out->premisses.push_back(p->clone());
  return out;
}

Derivation Derivation::copy() const {
  Derivation d;
  if (root_) d = Derivation(root_->clone());
  return d;
}

namespace {
void renumber_walk(DNode& n, int& next) {
  n.id = next++;
  for (auto& p : n.premisses) renumber_walk(*p, next);
}
}  // namespace

int Derivation::renumber() {
  int next = 1;
  if (root_) renumber_walk(*root_, next);
  return next - 1;
}

std::size_t Derivation::node_count() const {
  std::size_t n = 0;
  for_each([&](const DNode&) { n++; });
  return n;
}

void Derivation::for_each(const std::function<void(const DNode&)>& fn) const {
  std::function<void(const DNode&)> walk = [&](const DNode& n) {
    fn(n);
    for (const auto& p : n.premisses) walk(*p);
  };
  if (root_) walk(*root_);
}

void Derivation::for_each(const std::function<void(DNode&)>& fn) {
  std::function<void(DNode&)> walk = [&](DNode& n) {
    fn(n);
    for (auto& p : n.premisses) walk(*p);
  };
  if (root_) walk(*root_);
}

const DNode* Derivation::find(int id) const {
  const DNode* out = nullptr;
  for_each([&](const DNode& n) {
    if (n.id == id) out = &n;
  });
  return out;
}

Sequent end_sequent(const Derivation& d) {
  if (!d.root() || d.root()->concl.size() != 1) throw NotASequent();
  return d.root()->concl.at(0);
}

std::unique_ptr<DNode> make_node(int id, Hypersequent concl, std::string rule,
                                 Substitution subst) {
  auto n = std::make_unique<DNode>();
  n->id = id;
  n->concl = std::move(concl);
  n->rule = std::move(rule);
  n->subst = std::move(subst);
  return n;
}

// --- node checking -----------------------------------------------------------

namespace {

// Expected active sequents of one rule application: the conclusion actives
// and, per premiss, that premiss's actives.
struct RuleReading {
  std::vector<Sequent> concl_active;
  std::vector<std::vector<Sequent>> prem_active;
  bool context_free = false;  // axioms
};

FormulaPtr sf(const Substitution& s, const char* n) { return s.formula(n); }

std::optional<RuleReading> read_builtin(const DNode& node, CheckReport& rep) {
  const Substitution& s = node.subst;
  const std::string& r = node.rule;
  RuleReading out;
  auto seq = [](FormulaMultiset ante, std::optional<FormulaPtr> succ) {
    Sequent q;
    q.ante = std::move(ante);
    q.succ = std::move(succ);
    return q;
  };
  try {
    if (r == rules::ax) {
      FormulaMultiset m;
      m.add(sf(s, "phi"));
      out.concl_active.push_back(seq(std::move(m), sf(s, "phi")));
      out.context_free = true;
    } else if (r == rules::bot_ax) {
      FormulaMultiset m;
      m.add(Formula::bot());
      out.concl_active.push_back(seq(std::move(m), s.succedent("Pi")));
      out.context_free = true;
    } else if (r == rules::and_l) {
      FormulaMultiset c = s.multiset("Gamma");
      c.add(Formula::conj(sf(s, "phi"), sf(s, "psi")));
      out.concl_active.push_back(seq(std::move(c), s.succedent("Pi")));
      FormulaMultiset p = s.multiset("Gamma");
      p.add(sf(s, "phi"));
      p.add(sf(s, "psi"));
      out.prem_active.push_back({seq(std::move(p), s.succedent("Pi"))});
    } else if (r == rules::and_r) {
      FormulaMultiset c = s.multiset("Gamma");
      out.concl_active.push_back(
          seq(c, Formula::conj(sf(s, "phi"), sf(s, "psi"))));
      out.prem_active.push_back({seq(c, sf(s, "phi"))});
      out.prem_active.push_back({seq(c, sf(s, "psi"))});
    } else if (r == rules::or_l) {
      FormulaMultiset c = s.multiset("Gamma");
      c.add(Formula::disj(sf(s, "phi"), sf(s, "psi")));
      out.concl_active.push_back(seq(std::move(c), s.succedent("Pi")));
      FormulaMultiset p1 = s.multiset("Gamma");
      p1.add(sf(s, "phi"));
      out.prem_active.push_back({seq(std::move(p1), s.succedent("Pi"))});
      FormulaMultiset p2 = s.multiset("Gamma");
      p2.add(sf(s, "psi"));
      out.prem_active.push_back({seq(std::move(p2), s.succedent("Pi"))});
    } else if (r == rules::or_r) {
      // Handled in check_node: the premiss may match either disjunct.
      FormulaMultiset c = s.multiset("Gamma");
      out.concl_active.push_back(
          seq(c, Formula::disj(sf(s, "phi1"), sf(s, "phi2"))));
      out.prem_active.push_back({seq(c, sf(s, "phi1"))});
    } else if (r == rules::imp_l) {
      FormulaMultiset c = s.multiset("Gamma");
      c.add(Formula::imp(sf(s, "phi"), sf(s, "psi")));
      out.concl_active.push_back(seq(std::move(c), s.succedent("Pi")));
      out.prem_active.push_back({seq(s.multiset("Gamma"), sf(s, "phi"))});
      FormulaMultiset p2 = s.multiset("Gamma");
      p2.add(sf(s, "psi"));
      out.prem_active.push_back({seq(std::move(p2), s.succedent("Pi"))});
    } else if (r == rules::imp_r) {
      FormulaMultiset c = s.multiset("Gamma");
      out.concl_active.push_back(
          seq(c, Formula::imp(sf(s, "phi"), sf(s, "psi"))));
      FormulaMultiset p = s.multiset("Gamma");
      p.add(sf(s, "phi"));
      out.prem_active.push_back({seq(std::move(p), sf(s, "psi"))});
    } else if (r == rules::iw) {
      FormulaMultiset c = s.multiset("Gamma");
      c.add(sf(s, "phi"));
      out.concl_active.push_back(seq(std::move(c), s.succedent("Pi")));
      out.prem_active.push_back({seq(s.multiset("Gamma"), s.succedent("Pi"))});
    } else if (r == rules::ic) {
      FormulaMultiset c = s.multiset("Gamma");
      c.add(sf(s, "phi"));
      out.concl_active.push_back(seq(std::move(c), s.succedent("Pi")));
      FormulaMultiset p = s.multiset("Gamma");
      p.add(sf(s, "phi"));
      p.add(sf(s, "phi"));
      out.prem_active.push_back({seq(std::move(p), s.succedent("Pi"))});
    } else if (r == rules::cut) {
      FormulaMultiset c = s.multiset("Gamma");
      c.add_all(s.multiset("Gamma2"));
      out.concl_active.push_back(seq(std::move(c), s.succedent("Pi")));
      out.prem_active.push_back({seq(s.multiset("Gamma"), sf(s, "phi"))});
      FormulaMultiset p2 = s.multiset("Gamma2");
      p2.add(sf(s, "phi"));
      out.prem_active.push_back({seq(std::move(p2), s.succedent("Pi"))});
    } else if (r == rules::ew) {
      out.concl_active.push_back(seq(s.multiset("Gamma"), s.succedent("Pi")));
      out.prem_active.push_back({});  // premiss is the bare context
    } else if (r == rules::ec) {
      Sequent q = seq(s.multiset("Gamma"), s.succedent("Pi"));
      out.concl_active.push_back(q);
      out.prem_active.push_back({q, q});
    } else if (r == rules::dummy) {
      if (node.concl.size() != 1) {
        rep.add(node.id, "dummy-bottom", "dummy bottom must conclude a sequent");
        return std::nullopt;
      }
      Sequent q = node.concl.at(0);
      out.concl_active.push_back(q);
      for (std::size_t i = 0; i < node.premisses.size(); i++)
        out.prem_active.push_back({q});
      if (node.premisses.empty()) {
        rep.add(node.id, "dummy-bottom", "dummy bottom needs at least one premiss");
        return std::nullopt;
      }
    } else {
      rep.add(node.id, "rule", "unknown builtin " + r);
      return std::nullopt;
    }
  } catch (const IncompleteSubstitution& e) {
    rep.add(node.id, "substitution", e.what());
    return std::nullopt;
  } catch (const std::runtime_error& e) {
    rep.add(node.id, "substitution", e.what());
    return std::nullopt;
  }
  return out;
}

// Locates required active sequents among the components of `h`, first match
// wins. Returns indices, or nullopt if some active is missing.
std::optional<std::vector<int>> locate(const Hypersequent& h,
                                       const std::vector<Sequent>& active,
                                       std::vector<bool>& used) {
  std::vector<int> out;
  for (const auto& a : active) {
    int found = -1;
    for (std::size_t i = 0; i < h.size(); i++) {
      if (used[i]) continue;
      if (cmp(h.at(i), a) == 0) {
        found = static_cast<int>(i);
        break;
      }
    }
    if (found < 0) return std::nullopt;
    used[found] = true;
    out.push_back(found);
  }
  return out;
}

bool check_reading(const DNode& node, const RuleReading& rd, CheckReport& rep,
                   NodeShape* shape) {
  if (node.premisses.size() != rd.prem_active.size()) {
    rep.add(node.id, "arity",
            node.rule + " expects " + std::to_string(rd.prem_active.size()) +
                " premisses, has " + std::to_string(node.premisses.size()));
    return false;
  }
  std::vector<bool> used(node.concl.size(), false);
  auto actives = locate(node.concl, rd.concl_active, used);
  if (!actives) {
    rep.add(node.id, "conclusion",
            "conclusion does not contain the instantiated active components of " +
                node.rule);
    return false;
  }
  if (rd.context_free) {
    if (node.concl.size() != rd.concl_active.size()) {
      rep.add(node.id, "axiom", "axioms admit no hypersequent context");
      return false;
    }
    if (!node.premisses.empty()) {
      rep.add(node.id, "axiom", "axioms are leaves");
      return false;
    }
    if (shape) shape->active_concl = *actives;
    return true;
  }
  // Context components of the conclusion, in order.
  std::vector<int> ctx;
  for (std::size_t i = 0; i < node.concl.size(); i++)
    if (!used[i]) ctx.push_back(static_cast<int>(i));

  NodeShape sh;
  sh.active_concl = *actives;
  for (std::size_t p = 0; p < node.premisses.size(); p++) {
    const Hypersequent& ph = node.premisses[p]->concl;
    std::vector<bool> pused(ph.size(), false);
    auto pact = locate(ph, rd.prem_active[p], pused);
    if (!pact) {
      rep.add(node.id, "premiss",
              "premiss " + std::to_string(p + 1) +
                  " does not contain the instantiated active components of " +
                  node.rule);
      return false;
    }
    PremissShape ps;
    ps.active = *pact;
    ps.ctx_to_concl.assign(ph.size(), -1);
    std::vector<bool> cused(ctx.size(), false);
    bool ok = true;
    for (std::size_t i = 0; i < ph.size(); i++) {
      if (pused[i]) continue;
      int found = -1;
      for (std::size_t j = 0; j < ctx.size(); j++) {
        if (cused[j]) continue;
        if (cmp(node.concl.at(static_cast<std::size_t>(ctx[j])), ph.at(i)) == 0) {
          found = static_cast<int>(j);
          break;
        }
      }
      if (found < 0) {
        ok = false;
        break;
      }
      cused[found] = true;
      ps.ctx_to_concl[i] = ctx[static_cast<std::size_t>(found)];
    }
    if (!ok || std::count(cused.begin(), cused.end(), false) != 0) {
      rep.add(node.id, "context",
              "premiss " + std::to_string(p + 1) +
                  " context does not match the conclusion context of " + node.rule);
      return false;
    }
    sh.premisses.push_back(std::move(ps));
  }
  if (shape) *shape = std::move(sh);
  return true;
}

}  // namespace

bool check_node(const DNode& node, const Calculus& calc, KernelMode mode,
                CheckReport& rep, NodeShape* shape) {
  if (mode == KernelMode::Seq || mode == KernelMode::Partial) {
    if (node.concl.size() != 1) {
      rep.add(node.id, "sequent-mode", "conclusion must be a single sequent");
      return false;
    }
    if (node.rule == rules::ew || node.rule == rules::ec) {
      rep.add(node.id, "sequent-mode", node.rule + " is not a sequent rule");
      return false;
    }
  }
  if (rules::is_builtin(node.rule)) {
    if (node.rule == rules::dummy && mode == KernelMode::Hyp) {
      rep.add(node.id, "rule", "dummy-bottom is not a hypersequent rule");
      return false;
    }
    auto rd = read_builtin(node, rep);
    if (!rd) return false;
    if (node.rule == rules::or_r) {
      // The premiss may conclude either disjunct; try both readings.
      CheckReport scratch;
      if (check_reading(node, *rd, scratch, shape)) return true;
      try {
        RuleReading right = *rd;
        Sequent alt;
        alt.ante = node.subst.multiset("Gamma");
        alt.succ = node.subst.formula("phi2");
        right.prem_active[0] = {alt};
        CheckReport scratch2;
        if (check_reading(node, right, scratch2, shape)) return true;
      } catch (const std::runtime_error&) {
      }
      rep.add(node.id, "or-r", "premiss concludes neither disjunct in context");
      return false;
    }
    return check_reading(node, *rd, rep, shape);
  }

  if (mode == KernelMode::Hyp) {
    auto it = calc.hyp_rules.find(node.rule);
    if (it == calc.hyp_rules.end()) {
      rep.add(node.id, "rule", "unknown hypersequent rule " + node.rule);
      return false;
    }
    RuleReading rd;
    try {
      InstantiatedRule inst = instantiate(it->second, node.subst);
      rd.concl_active = std::move(inst.conclusion);
      for (auto& p : inst.premisses) rd.prem_active.push_back({std::move(p)});
    } catch (const std::runtime_error& e) {
      rep.add(node.id, "substitution", e.what());
      return false;
    }
    return check_reading(node, rd, rep, shape);
  }

  // Sequent mode: top or bottom of some 2-system.
  const TwoSystem* sys = calc.system_of_rule(node.rule);
  if (!sys) {
    rep.add(node.id, "rule", "unknown sequent rule " + node.rule);
    return false;
  }
  if (!node.sys && mode == KernelMode::Seq) {
    rep.add(node.id, "system", node.rule + " requires a system instance tag");
    return false;
  }
  RuleReading rd;
  try {
    if (node.rule == sys->bottom_name) {
      if (node.sys && node.sys->role != SysRole::Bottom) {
        rep.add(node.id, "system", "bottom rule tagged as top");
        return false;
      }
      Sequent q;
      q.ante = node.subst.multiset("Gamma");
      q.succ = node.subst.succedent("Pi");
      rd.concl_active.push_back(q);
      if (node.premisses.empty() ||
          node.premisses.size() > static_cast<std::size_t>(sys->arity())) {
        rep.add(node.id, "bottom-arity",
                "bottom rule of " + sys->name + " takes between 1 and " +
                    std::to_string(sys->arity()) + " premisses");
        return false;
      }
      for (std::size_t i = 0; i < node.premisses.size(); i++)
        rd.prem_active.push_back({q});
    } else {
      if (node.sys && node.sys->role != SysRole::Top) {
        rep.add(node.id, "system", "top rule tagged as bottom");
        return false;
      }
      const TopRule* top = sys->top_by_name(node.rule);
      InstantiatedRule inst = instantiate_top(*top, node.subst);
      rd.concl_active = std::move(inst.conclusion);
      for (auto& p : inst.premisses) rd.prem_active.push_back({std::move(p)});
    }
  } catch (const std::runtime_error& e) {
    rep.add(node.id, "substitution", e.what());
    return false;
  }
  return check_reading(node, rd, rep, shape);
}

namespace {

void check_tree(const DNode& n, const Calculus& calc, KernelMode mode,
                CheckReport& rep, std::set<int>& seen_ids) {
  if (!seen_ids.insert(n.id).second)
    rep.add(n.id, "node-id", "duplicate node id");
  check_node(n, calc, mode, rep, nullptr);
  for (const auto& p : n.premisses) check_tree(*p, calc, mode, rep, seen_ids);
}

bool is_ancestor(const DNode* anc, const DNode* desc) {
  if (anc == desc) return false;
  for (const auto& p : anc->premisses) {
    if (p.get() == desc || is_ancestor(p.get(), desc)) return true;
  }
  return false;
}

struct InstanceNodes {
  const DNode* bottom = nullptr;
  int bottoms = 0;
  std::vector<const DNode*> tops;
};

}  // namespace

CheckReport check_hyp(const Derivation& d, const Calculus& c) {
  CheckReport rep;
  if (!d.root()) {
    rep.add(-1, "empty", "empty derivation");
    return rep;
  }
  std::set<int> ids;
  check_tree(*d.root(), c, KernelMode::Hyp, rep, ids);
  d.for_each([&](const DNode& n) {
    if (n.sys) rep.add(n.id, "system", "system tags are not hypersequent rules");
  });
  return rep;
}

CheckReport check_sys(const Derivation& d, const Calculus& c) {
  CheckReport rep;
  if (!d.root()) {
    rep.add(-1, "empty", "empty derivation");
    return rep;
  }
  std::set<int> ids;
  check_tree(*d.root(), c, KernelMode::Seq, rep, ids);

  std::map<std::string, InstanceNodes> instances;
  d.for_each([&](const DNode& n) {
    if (!n.sys) return;
    auto& info = instances[n.sys->instance];
    if (n.sys->role == SysRole::Bottom) {
      info.bottoms++;
      info.bottom = &n;
    } else {
      info.tops.push_back(&n);
    }
  });

  for (const auto& [inst, info] : instances) {
    if (info.bottoms != 1) {
      rep.add(info.bottom ? info.bottom->id : -1, "one-bottom",
              "instance " + inst + " has " + std::to_string(info.bottoms) +
                  " bottom rules (needs exactly 1)");
      continue;
    }
    const DNode* bot = info.bottom;
    const TwoSystem* sys = c.system_of_rule(bot->rule);
    if (!sys) continue;  // already reported
    const std::size_t arity = bot->premisses.size();

    // Premiss -> top-rule-index map: explicit, identity, or inferred.
    std::vector<int> idx = bot->sys->premiss_tops;
    if (!idx.empty() && idx.size() != arity) {
      rep.add(bot->id, "bottom-arity", "premiss/top index map has wrong length");
      continue;
    }

    // Which premiss of the bottom is each top above?
    std::vector<std::vector<const DNode*>> per_premiss(arity);
    bool placed_ok = true;
    for (const DNode* t : info.tops) {
      int where = -1;
      for (std::size_t p = 0; p < arity; p++) {
        if (bot->premisses[p].get() == t || is_ancestor(bot->premisses[p].get(), t))
          where = static_cast<int>(p);
      }
      if (where < 0) {
        rep.add(t->id, "top-above-bottom",
                "top rule of instance " + inst +
                    " does not occur above a premiss of its bottom rule");
        placed_ok = false;
        continue;
      }
      per_premiss[static_cast<std::size_t>(where)].push_back(t);
    }
    if (!placed_ok) continue;

    if (idx.empty()) {
      if (arity == static_cast<std::size_t>(sys->arity())) {
        for (std::size_t p = 0; p < arity; p++)
          idx.push_back(static_cast<int>(p) + 1);
      } else {
        // Reduced bottom: infer indices from the tops above each premiss.
        bool ok = true;
        std::set<int> taken;
        for (std::size_t p = 0; p < arity; p++) {
          std::set<int> found;
          for (const DNode* t : per_premiss[p]) found.insert(sys->top_index(t->rule));
          if (found.size() != 1) {
            rep.add(bot->id, "bottom-arity",
                    "cannot infer the top rule served by premiss " +
                        std::to_string(p + 1) + " of reduced bottom " + inst);
            ok = false;
            break;
          }
          int i = *found.begin();
          if (!taken.insert(i).second) {
            rep.add(bot->id, "bottom-arity",
                    "two premisses of reduced bottom " + inst +
                        " serve the same top rule");
            ok = false;
            break;
          }
          idx.push_back(i);
        }
        if (!ok) continue;
      }
    }

    for (std::size_t p = 0; p < arity; p++) {
      for (const DNode* t : per_premiss[p]) {
        int want = idx[p];
        int have = sys->top_index(t->rule);
        if (have != want)
          rep.add(t->id, "top-index",
                  "top rule " + t->rule + " of instance " + inst +
                      " occurs above premiss " + std::to_string(p + 1) +
                      " which serves top rule " + std::to_string(want));
      }
    }

    if (info.tops.empty())
      rep.warn(bot->id, "redundant-system",
               "instance " + inst + " applies no top rules");

    // Shared metavariables agree across all tops of the instance.
    for (std::size_t i = 0; i + 1 < info.tops.size(); i++) {
      if (!info.tops[i]->subst.agrees_with(info.tops[i + 1]->subst, sys->shared))
        rep.add(info.tops[i + 1]->id, "shared-metavar",
                "tops of instance " + inst +
                    " disagree on shared metavariables");
    }
  }

  // Tops whose instance never occurs as a bottom.
  d.for_each([&](const DNode& n) {
    if (n.sys && n.sys->role == SysRole::Top) {
      auto it = instances.find(n.sys->instance);
      if (it == instances.end() || it->second.bottoms == 0)
        rep.add(n.id, "orphan-top",
                "top rule of instance " + n.sys->instance + " has no bottom rule");
    }
  });
  return rep;
}

CheckReport check_partial(const Derivation& d, const Calculus& c) {
  CheckReport rep;
  if (!d.root()) {
    rep.add(-1, "empty", "empty derivation");
    return rep;
  }
  std::set<int> ids;
  check_tree(*d.root(), c, KernelMode::Partial, rep, ids);
  return rep;
}

namespace {
void latex_walk(const DNode& n, std::string& out) {
  if (n.premisses.empty()) {
    out += to_latex(n.concl);
    return;
  }
  out += "\\infer[(" + n.rule + ")]{" + to_latex(n.concl) + "}{";
  bool first = true;
  for (const auto& p : n.premisses) {
    if (!first) out += " & ";
    first = false;
    latex_walk(*p, out);
  }
  out += "}";
}
}  // namespace

std::string to_latex(const Derivation& d) {
  std::string out = "\\[\n";
  if (d.root()) latex_walk(*d.root(), out);
  out += "\n\\]\n";
  return out;
}

}  // namespace hsr
