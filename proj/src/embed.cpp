#include "hsr/embed.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <set>

#include "hsr/sysnorm.hpp"
#include "hsr/translate_rules.hpp"

namespace hsr {

Calculus hyp_counterpart(const Calculus& c) {
  Calculus out;
  out.base = BaseCalculus::HLJ;
  out.name = c.name + "-hyp";
  out.hyp_rules = c.hyp_rules;
  for (const auto& [_, sys] : c.systems) {
    HypRuleSchema h = sys_to_hyp(sys);
    out.hyp_rules[h.name] = std::move(h);
  }
  return out;
}

Calculus sys_counterpart(const Calculus& c) {
  Calculus out;
  out.base = BaseCalculus::LJ;
  out.name = c.name + "-sys";
  out.systems = c.systems;
  for (const auto& [_, h] : c.hyp_rules) {
    TwoSystem s = hyp_to_sys(h);
    out.systems[s.name] = std::move(s);
  }
  return out;
}

namespace {

int max_node_id(const Derivation& d) {
  int m = 0;
  d.for_each([&](const DNode& n) { m = std::max(m, n.id); });
  return m;
}

bool subtree_contains(const DNode* root, const DNode* n) {
  if (root == n) return true;
  for (const auto& p : root->premisses)
    if (subtree_contains(p.get(), n)) return true;
  return false;
}

struct InstanceInfo {
  DNode* bottom = nullptr;
  std::vector<DNode*> tops;
};

std::map<std::string, InstanceInfo> collect_instances(Derivation& d) {
  std::map<std::string, InstanceInfo> out;
  d.for_each([&](DNode& n) {
    if (!n.sys) return;
    if (n.sys->role == SysRole::Bottom)
      out[n.sys->instance].bottom = &n;
    else
      out[n.sys->instance].tops.push_back(&n);
  });
  return out;
}

// Splices away 2-system instances that cannot be translated because some
// bottom premiss has no top application above it (the redundant case).
Derivation prune_redundant(Derivation d, const Calculus& c) {
  bool changed = true;
  while (changed) {
    changed = false;
    auto instances = collect_instances(d);
    for (auto& [inst, info] : instances) {
      if (!info.bottom) continue;
      DNode* bot = info.bottom;
      int bare = -1;
      for (std::size_t p = 0; p < bot->premisses.size() && bare < 0; p++) {
        bool has_top = false;
        for (DNode* t : info.tops)
          if (subtree_contains(bot->premisses[p].get(), t)) has_top = true;
        if (!has_top) bare = static_cast<int>(p);
      }
      if (bare < 0) continue;
      auto keep = std::move(bot->premisses[static_cast<std::size_t>(bare)]);
      *bot = std::move(*keep);
      changed = true;
      break;
    }
  }
  (void)c;
  d.renumber();
  return d;
}

}  // namespace

std::vector<std::vector<int>> combination_plan(const Derivation& d,
                                               const Calculus& c,
                                               const std::string& instance) {
  auto& dm = const_cast<Derivation&>(d);
  auto instances = collect_instances(dm);
  auto it = instances.find(instance);
  if (it == instances.end()) throw UnknownInstance(instance);
  const TwoSystem* sys = nullptr;
  if (it->second.bottom) sys = c.system_of_rule(it->second.bottom->rule);
  if (!sys && !it->second.tops.empty())
    sys = c.system_of_rule(it->second.tops.front()->rule);
  if (!sys) throw UnknownInstance(instance);

  std::vector<std::vector<int>> lists(static_cast<std::size_t>(sys->arity()));
  for (const DNode* t : it->second.tops) {
    int idx = sys->top_index(t->rule);
    lists[static_cast<std::size_t>(idx - 1)].push_back(t->id);
  }
  for (auto& l : lists) std::sort(l.begin(), l.end());

  std::vector<std::vector<int>> tuples;
  std::vector<int> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == lists.size()) {
      tuples.push_back(cur);
      return;
    }
    for (int id : lists[i]) {
      cur.push_back(id);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return tuples;
}

// --- the marking algorithm -------------------------------------------------------

namespace {

// One working hypersequent derivation: the conclusion components are tagged
// with the input node they translate.
struct WorkTree {
  std::unique_ptr<DNode> root;
  std::map<int, int> comp_mark;  // component id (in root->concl) -> input node id

  std::set<int> marks() const {
    std::set<int> out;
    for (const auto& [_, m] : comp_mark) out.insert(m);
    return out;
  }
  int comp_of(int mark) const {
    for (const auto& [cid, m] : comp_mark)
      if (m == mark) return cid;
    return -1;
  }
};

struct Marker {
  const Calculus& calc;
  const Calculus hyp_calc;
  int next_id = 1;
  std::vector<WorkTree> trees;

  explicit Marker(const Calculus& c) : calc(c), hyp_calc(hyp_counterpart(c)) {}

  WorkTree clone_tree(const WorkTree& t) {
    WorkTree out;
    out.root = t.root->clone();
    out.comp_mark = t.comp_mark;
    return out;
  }

  // Weakening chain adding the given (sequent, mark) components.
  void ew_extend(WorkTree& t, const std::vector<std::pair<Sequent, int>>& add) {
    for (const auto& [seq, mark] : add) {
      Hypersequent concl = t.root->concl;
      int cid = concl.add(seq);
      Substitution sub;
      sub.bind_multiset("Gamma", seq.ante);
      sub.bind_succedent("Pi", seq.succ);
      auto n = make_node(next_id++, std::move(concl), rules::ew, std::move(sub));
      n->premisses.push_back(std::move(t.root));
      t.root = std::move(n);
      t.comp_mark[cid] = mark;
    }
  }

  // Rebuilds the conclusion of a new node: keeps all context components of
  // the joined trees (merged by mark), consumes the given marks, adds the
  // new active sequents mapped to new_marks.
  struct JoinSpec {
    std::vector<std::size_t> tree_idx;          // trees joined, in premiss order
    std::vector<int> consumed;                  // marks consumed (per premiss)
    std::vector<std::pair<Sequent, int>> born;  // active conclusion comps
    std::string rule;
    Substitution subst;
  };

  // Context marks of a tree minus the consumed marks.
  static std::map<int, Sequent> context_of(const WorkTree& t,
                                           const std::set<int>& consumed) {
    std::map<int, Sequent> out;
    for (const auto& [cid, m] : t.comp_mark) {
      if (consumed.count(m)) continue;
      int idx = t.root->concl.index_of_id(cid);
      out[m] = t.root->concl.at(static_cast<std::size_t>(idx));
    }
    return out;
  }

  // Performs one rule application joining the given trees. The joined trees
  // are removed from the pool and the result appended.
  void fire_join(const JoinSpec& spec) {
    std::set<int> consumed(spec.consumed.begin(), spec.consumed.end());
    // Union context across the joined trees.
    std::map<int, Sequent> ctx;
    for (std::size_t ti : spec.tree_idx)
      for (const auto& [m, s] : context_of(trees[ti], consumed))
        ctx.emplace(m, s);

    // Pad each premiss tree up to the union context.
    std::vector<std::unique_ptr<DNode>> premisses;
    for (std::size_t k = 0; k < spec.tree_idx.size(); k++) {
      WorkTree& t = trees[spec.tree_idx[k]];
      std::vector<std::pair<Sequent, int>> missing;
      auto have = context_of(t, consumed);
      for (const auto& [m, s] : ctx)
        if (!have.count(m)) missing.push_back({s, m});
      ew_extend(t, missing);
      premisses.push_back(std::move(t.root));
    }

    Hypersequent concl;
    std::map<int, int> comp_mark;
    for (const auto& [m, s] : ctx) comp_mark[concl.add(s)] = m;
    for (const auto& [s, m] : spec.born) comp_mark[concl.add(s)] = m;

    auto node = make_node(next_id++, std::move(concl), spec.rule, spec.subst);
    for (auto& p : premisses) node->premisses.push_back(std::move(p));

    WorkTree out;
    out.root = std::move(node);
    out.comp_mark = std::move(comp_mark);

    std::vector<std::size_t> dying = spec.tree_idx;
    std::sort(dying.begin(), dying.end(), std::greater<>());
    for (std::size_t ti : dying)
      trees.erase(trees.begin() + static_cast<std::ptrdiff_t>(ti));
    trees.push_back(std::move(out));
  }

  // All trees whose component set contains the given mark.
  std::vector<std::size_t> trees_with(int mark) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < trees.size(); i++)
      if (trees[i].comp_of(mark) >= 0) out.push_back(i);
    return out;
  }
};

}  // namespace

Derivation translate_s2h(const Derivation& input, const Calculus& c) {
  {
    CheckReport rep = check_sys(input, c);
    if (!rep.ok())
      throw InvalidInput("translate_s2h: input fails check_sys: " + rep.summary());
  }
  Derivation d = prune_redundant(input.copy(), c);
  d = eliminate_same_path(std::move(d), c);
  d = prune_redundant(std::move(d), c);
  d = disentangle(std::move(d), c);
  d = prune_redundant(std::move(d), c);
  d.renumber();

  Marker mk(c);
  mk.next_id = max_node_id(d) + 1;

  // Instance bookkeeping.
  auto instances = collect_instances(d);
  std::map<int, std::string> top_instance;  // top node id -> instance
  for (const auto& [inst, info] : instances)
    for (const DNode* t : info.tops) top_instance[t->id] = inst;

  std::set<int> marked;
  std::map<int, const DNode*> by_id;
  d.for_each([&](const DNode& n) { by_id[n.id] = &n; });

  // Leaves first.
  d.for_each([&](const DNode& n) {
    if (!n.premisses.empty()) return;
    WorkTree t;
    t.root = n.clone();
    t.root->premisses.clear();
    t.comp_mark[t.root->concl.id_at(0)] = n.id;
    mk.trees.push_back(std::move(t));
    marked.insert(n.id);
  });

  auto all_marked = [&](const DNode* n) {
    for (const auto& p : n->premisses)
      if (!marked.count(p->id)) return false;
    return true;
  };

  auto fire_simple = [&](const DNode* v) {
    // One-premiss LJ rule: apply in every tree holding the premiss mark.
    int u = v->premisses[0]->id;
    for (std::size_t ti : mk.trees_with(u)) {
      WorkTree& t = mk.trees[ti];
      int cid = t.comp_of(u);
      Hypersequent concl;
      std::map<int, int> comp_mark;
      for (const auto& comp : t.root->concl.components()) {
        if (comp.id == cid) continue;
        comp_mark[concl.add(comp.seq)] = t.comp_mark.at(comp.id);
      }
      comp_mark[concl.add(v->concl.at(0))] = v->id;
      auto node = make_node(mk.next_id++, std::move(concl), v->rule, v->subst);
      node->premisses.push_back(std::move(t.root));
      t.root = std::move(node);
      t.comp_mark = std::move(comp_mark);
    }
    for (const auto& p : v->premisses) marked.erase(p->id);
    marked.insert(v->id);
  };

  auto fire_bottom = [&](const DNode* v) {
    // All premiss marks must live in the same trees; contract with (EC).
    std::vector<int> umarks;
    for (const auto& p : v->premisses) umarks.push_back(p->id);
    bool fired = false;
    for (std::size_t ti = 0; ti < mk.trees.size(); ti++) {
      WorkTree& t = mk.trees[ti];
      bool has_all = true;
      for (int u : umarks)
        if (t.comp_of(u) < 0) has_all = false;
      if (!has_all) continue;
      fired = true;
      // Keep the first premiss component, contract the others into it.
      int keep = t.comp_of(umarks[0]);
      for (std::size_t j = 1; j < umarks.size(); j++) {
        int cid = t.comp_of(umarks[j]);
        Hypersequent concl;
        std::map<int, int> comp_mark;
        for (const auto& comp : t.root->concl.components()) {
          if (comp.id == cid) continue;
          int nid = concl.add(comp.seq);
          comp_mark[nid] = t.comp_mark.at(comp.id);
          if (comp.id == keep) keep = nid;  // track the survivor
        }
        Substitution sub;
        sub.bind_multiset("Gamma", v->concl.at(0).ante);
        sub.bind_succedent("Pi", v->concl.at(0).succ);
        auto node = make_node(mk.next_id++, std::move(concl), rules::ec, sub);
        node->premisses.push_back(std::move(t.root));
        t.root = std::move(node);
        t.comp_mark = std::move(comp_mark);
      }
      int survivor = -1;
      for (const auto& [cid, m] : t.comp_mark)
        if (m == umarks[0]) survivor = cid;
      if (survivor < 0)
        throw std::logic_error("translate_s2h: lost bottom component");
      t.comp_mark[survivor] = v->id;
    }
    if (!fired)
      throw InvalidInput(
          "translate_s2h: bottom premisses are not joined in any tree");
    for (int u : umarks) marked.erase(u);
    marked.insert(v->id);
  };

  auto fire_two_premiss = [&](const DNode* v) {
    int u1 = v->premisses[0]->id, u2 = v->premisses[1]->id;
    auto c1 = mk.trees_with(u1);
    auto c2 = mk.trees_with(u2);
    std::set<int> consumed{u1, u2};
    // Pair candidates: contexts must agree (or one side misses marks that
    // the other carries; weakening reconciles).
    // Pair each u1-tree with the u2-tree sharing the most context marks;
    // a u2-tree wanted twice is cloned (combination duplication).
    std::vector<std::pair<DNode*, DNode*>> pair_roots;
    {
      std::set<std::size_t> used;
      for (std::size_t a : c1) {
        auto ctxa = Marker::context_of(mk.trees[a], consumed);
        std::size_t best = SIZE_MAX;
        int best_score = INT32_MIN;
        for (std::size_t b : c2) {
          if (a == b) continue;
          auto ctxb = Marker::context_of(mk.trees[b], consumed);
          int common = 0;
          for (const auto& [m, s] : ctxa)
            if (ctxb.count(m)) common++;
          int score = common * 1000 -
                      static_cast<int>(ctxa.size() + ctxb.size()) -
                      (used.count(b) ? 1 : 0);
          if (score > best_score) {
            best_score = score;
            best = b;
          }
        }
        if (best == SIZE_MAX)
          throw InvalidInput("translate_s2h: no matching tree for premiss pair");
        if (used.count(best)) {
          mk.trees.push_back(mk.clone_tree(mk.trees[best]));
          best = mk.trees.size() - 1;
        }
        used.insert(best);
        pair_roots.push_back(
            {mk.trees[a].root.get(), mk.trees[best].root.get()});
      }
    }
    for (auto& [ra, rb] : pair_roots) {
      std::size_t a = SIZE_MAX, b = SIZE_MAX;
      for (std::size_t i = 0; i < mk.trees.size(); i++) {
        if (mk.trees[i].root.get() == ra) a = i;
        if (mk.trees[i].root.get() == rb) b = i;
      }
      Marker::JoinSpec spec;
      spec.tree_idx = {a, b};
      spec.consumed = {u1, u2};
      spec.born = {{v->concl.at(0), v->id}};
      spec.rule = v->rule;
      spec.subst = v->subst;
      mk.fire_join(spec);
    }
    marked.erase(u1);
    marked.erase(u2);
    marked.insert(v->id);
  };

  auto fire_group = [&](const std::string& inst) {
    const InstanceInfo& info = instances.at(inst);
    const TwoSystem* sys = c.system_of_rule(info.bottom->rule);
    const HypRuleSchema& hr = mk.hyp_calc.hyp_rules.at(
        sys->name.rfind("Sys_", 0) == 0 ? sys->name.substr(4) : sys->name + "_hr");

    auto tuples = combination_plan(d, c, inst);
    // Premiss marks per tuple; trees may be shared across tuples, so each
    // use clones on demand.
    std::set<int> all_premiss_marks;
    for (const DNode* t : info.tops)
      for (const auto& p : t->premisses) all_premiss_marks.insert(p->id);

    std::vector<WorkTree> results;
    for (const auto& tuple : tuples) {
      // Gather premiss marks in schema order and the merged substitution.
      std::vector<int> premiss_marks;
      Substitution merged;
      std::vector<std::pair<Sequent, int>> born;
      for (std::size_t i = 0; i < tuple.size(); i++) {
        const DNode* a = by_id.at(tuple[i]);
        for (const auto& p : a->premisses) premiss_marks.push_back(p->id);
        for (const auto& [name, val] : a->subst.entries()) {
          if (merged.has(name)) continue;
          if (const auto* f = std::get_if<FormulaPtr>(&val))
            merged.bind_formula(name, *f);
          else if (const auto* m2 = std::get_if<FormulaMultiset>(&val))
            merged.bind_multiset(name, *m2);
          else
            merged.bind_succedent(name, std::get<std::optional<FormulaPtr>>(val));
        }
        born.push_back({a->concl.at(0), a->id});
      }
      std::set<int> consumed(premiss_marks.begin(), premiss_marks.end());

      // Pick one tree per premiss mark (clone when shared).
      std::vector<WorkTree> picked;
      for (int u : premiss_marks) {
        auto cand = mk.trees_with(u);
        if (cand.empty())
          throw InvalidInput("translate_s2h: missing tree for top premiss");
        // Prefer a candidate whose context agrees with those already picked.
        std::size_t chosen = cand[0];
        picked.push_back(mk.clone_tree(mk.trees[chosen]));
      }
      // Union context and weakening.
      std::map<int, Sequent> ctx;
      for (const auto& t : picked)
        for (const auto& [m, s] : Marker::context_of(t, consumed)) ctx.emplace(m, s);
      Hypersequent concl;
      std::map<int, int> comp_mark;
      for (const auto& [m, s] : ctx) comp_mark[concl.add(s)] = m;
      for (const auto& [s, m] : born) comp_mark[concl.add(s)] = m;

      auto node = make_node(mk.next_id++, std::move(concl), hr.name, merged);
      for (auto& t : picked) {
        std::vector<std::pair<Sequent, int>> missing;
        auto have = Marker::context_of(t, consumed);
        for (const auto& [m, s] : ctx)
          if (!have.count(m)) missing.push_back({s, m});
        mk.ew_extend(t, missing);
        node->premisses.push_back(std::move(t.root));
      }
      WorkTree out;
      out.root = std::move(node);
      out.comp_mark = std::move(comp_mark);
      results.push_back(std::move(out));
    }
    // Remove the trees holding consumed marks, then add the tuple trees.
    for (int u : all_premiss_marks) {
      for (std::size_t i = mk.trees.size(); i-- > 0;) {
        if (mk.trees[i].comp_of(u) >= 0)
          mk.trees.erase(mk.trees.begin() + static_cast<std::ptrdiff_t>(i));
      }
      marked.erase(u);
    }
    for (auto& t : results) mk.trees.push_back(std::move(t));
    for (const DNode* t : info.tops) marked.insert(t->id);
  };

  // Work loop: one-premiss rules, then two-premiss and bottoms, then whole
  // top groups.
  const std::set<std::string> one_premiss = {rules::and_l, rules::or_r,
                                             rules::imp_r, rules::iw, rules::ic};
  const std::set<std::string> two_premiss = {rules::and_r, rules::or_l,
                                             rules::imp_l, rules::cut};
  while (!marked.count(d.root()->id)) {
    const DNode* pick = nullptr;
    int pick_class = 4;
    d.for_each([&](const DNode& n) {
      if (marked.count(n.id) || n.premisses.empty() || !all_marked(&n)) return;
      int cls;
      if (one_premiss.count(n.rule)) cls = 1;
      else if (two_premiss.count(n.rule)) cls = 2;
      else if (n.sys && n.sys->role == SysRole::Bottom) cls = 2;
      else return;  // top rules fire as groups below
      if (cls < pick_class || (cls == pick_class && (!pick || n.id < pick->id))) {
        pick = &n;
        pick_class = cls;
      }
    });
    if (pick) {
      if (pick_class == 1) fire_simple(pick);
      else if (pick->sys) fire_bottom(pick);
      else fire_two_premiss(pick);
      continue;
    }
    // A top group whose tops are all ready.
    std::string group;
    for (const auto& [inst, info] : instances) {
      bool all_translated = true;
      for (const DNode* t : info.tops)
        if (marked.count(t->id)) { all_translated = false; break; }
      if (!all_translated || info.tops.empty()) continue;
      bool ready = true;
      for (const DNode* t : info.tops)
        if (!all_marked(t)) ready = false;
      if (ready) {
        group = inst;
        break;
      }
    }
    if (group.empty())
      throw InvalidInput("translate_s2h: marking stalled before the root");
    fire_group(group);
  }

  // Exactly one tree remains with the root mark as its single component.
  std::vector<std::size_t> winners = mk.trees_with(d.root()->id);
  if (winners.size() != 1)
    throw InvalidInput("translate_s2h: expected a unique final derivation");
  WorkTree& w = mk.trees[winners[0]];
  if (w.root->concl.size() != 1 ||
      cmp(w.root->concl.at(0), d.root()->concl.at(0)) != 0)
    throw InvalidInput("translate_s2h: end-sequent not preserved");
  Derivation out(std::move(w.root));
  out.renumber();
  return out;
}

// --- ancestor trees and partial derivations --------------------------------------

namespace {

struct HatInfo {
  const DNode* source = nullptr;  // node above the root (EC) queue
};

HatInfo hat_of(const Derivation& d) {
  HatInfo out;
  const DNode* cur = d.root();
  while (cur->rule == rules::ec) cur = cur->premisses[0].get();
  out.source = cur;
  return out;
}

// Traces a component of `node` (position `comp`) up through the (EW) queue
// above premiss `p` of `node`; returns the position at the queue's source or
// -1 when the component is introduced inside the queue.
struct Tracer {
  const Calculus& calc;

  NodeShape shape_of(const DNode& n) const {
    CheckReport tmp;
    NodeShape s;
    if (!check_node(n, calc, KernelMode::Hyp, tmp, &s))
      throw InvalidInput("invalid node " + std::to_string(n.id) + ": " +
                         tmp.summary());
    return s;
  }

  std::pair<const DNode*, int> through_ews(const DNode* node, int comp) const {
    while (node->rule == rules::ew) {
      NodeShape s = shape_of(*node);
      if (s.active_concl[0] == comp) return {nullptr, -1};
      int up = -1;
      for (std::size_t k = 0; k < s.premisses[0].ctx_to_concl.size(); k++)
        if (s.premisses[0].ctx_to_concl[k] == comp) up = static_cast<int>(k);
      if (up < 0) throw std::logic_error("through_ews: lost component");
      comp = up;
      node = node->premisses[0].get();
    }
    return {node, comp};
  }
};

struct PartialBuilder {
  const Calculus& calc;
  const Calculus sys_calc;
  Tracer tracer;
  int next_id = 1;
  std::map<int, std::pair<int, int>> provenance;

  explicit PartialBuilder(const Calculus& c)
      : calc(c), sys_calc(sys_counterpart(c)), tracer{c} {}

  std::unique_ptr<DNode> build(const DNode* node, int comp) {
    NodeShape shape = tracer.shape_of(*node);
    Sequent here = node->concl.at(static_cast<std::size_t>(comp));

    int active_slot = -1;
    for (std::size_t i = 0; i < shape.active_concl.size(); i++)
      if (shape.active_concl[i] == comp) active_slot = static_cast<int>(i);

    if (node->premisses.empty()) {
      auto leaf = node->clone();
      leaf->id = next_id++;
      leaf->premisses.clear();
      return leaf;
    }

    if (active_slot >= 0) {
      if (rules::is_builtin(node->rule)) {
        if (node->rule == rules::ew || node->rule == rules::ec)
          throw std::logic_error("partial build reached an external rule");
        auto out = make_node(next_id++, Hypersequent::single(here), node->rule,
                             node->subst);
        for (std::size_t p = 0; p < node->premisses.size(); p++) {
          auto [src, idx] = tracer.through_ews(
              node->premisses[p].get(), shape.premisses[p].active[0]);
          if (!src) throw std::logic_error("active premiss introduced by (EW)");
          out->premisses.push_back(build(src, idx));
        }
        return out;
      }
      // A hypersequent rule application: top rule `active_slot + 1`.
      auto hit = calc.hyp_rules.find(node->rule);
      if (hit == calc.hyp_rules.end())
        throw InvalidInput("unknown rule " + node->rule);
      const TwoSystem& sys = *sys_calc.system_of_rule(hit->second.name + "_B");
      const TopRule& top = sys.tops[static_cast<std::size_t>(active_slot)];
      auto out =
          make_node(next_id++, Hypersequent::single(here), top.name, node->subst);
      auto group = hit->second.group(active_slot);
      for (int p : group) {
        auto [src, idx] = tracer.through_ews(
            node->premisses[static_cast<std::size_t>(p)].get(),
            shape.premisses[static_cast<std::size_t>(p)].active[0]);
        if (!src) throw std::logic_error("linked premiss introduced by (EW)");
        out->premisses.push_back(build(src, idx));
      }
      provenance[out->id] = {node->id, active_slot + 1};
      return out;
    }

    // Context component: parents in every premiss where it survives the
    // (EW) queue; several parents join through a dummy bottom rule.
    std::vector<std::unique_ptr<DNode>> parents;
    for (std::size_t p = 0; p < node->premisses.size(); p++) {
      int up = -1;
      for (std::size_t k = 0; k < shape.premisses[p].ctx_to_concl.size(); k++)
        if (shape.premisses[p].ctx_to_concl[k] == comp) up = static_cast<int>(k);
      if (up < 0) continue;
      auto [src, idx] = tracer.through_ews(node->premisses[p].get(), up);
      if (!src) continue;  // introduced inside the queue: no parent here
      parents.push_back(build(src, idx));
    }
    if (parents.empty())
      throw InvalidInput("context component of node " + std::to_string(node->id) +
                         " has no parent (derivation not in structured form)");
    if (parents.size() == 1) return std::move(parents[0]);
    auto join = make_node(next_id++, Hypersequent::single(here), rules::dummy);
    for (auto& p : parents) join->premisses.push_back(std::move(p));
    return join;
  }
};

}  // namespace

AncestorTree ancestor_tree(const Derivation& d, const Calculus& c,
                           int hat_comp_id) {
  auto sf = is_structured_form(d, c);
  if (!sf.structured)
    throw NotStructured("ancestor_tree: " + sf.reason);
  HatInfo hat = hat_of(d);
  int comp = hat.source->concl.index_of_id(hat_comp_id);
  if (comp < 0)
    throw UnknownComponent("no component with id " + std::to_string(hat_comp_id));

  Tracer tracer{c};
  std::function<std::unique_ptr<AncestorNode>(const DNode*, int)> build =
      [&](const DNode* node, int ci) -> std::unique_ptr<AncestorNode> {
    auto out = std::make_unique<AncestorNode>();
    out->node_id = node->id;
    out->comp_index = ci;
    if (node->premisses.empty()) {
      out->via = "leaf";
      return out;
    }
    NodeShape shape = tracer.shape_of(*node);
    int active_slot = -1;
    for (std::size_t i = 0; i < shape.active_concl.size(); i++)
      if (shape.active_concl[i] == ci) active_slot = static_cast<int>(i);
    if (active_slot >= 0) {
      bool is_hyp_rule = !rules::is_builtin(node->rule);
      out->via = is_hyp_rule ? "active-linked" : "active-hlj";
      std::vector<int> prems;
      if (is_hyp_rule) {
        for (int p : c.hyp_rules.at(node->rule).group(active_slot))
          prems.push_back(p);
      } else {
        for (std::size_t p = 0; p < node->premisses.size(); p++)
          prems.push_back(static_cast<int>(p));
      }
      for (int p : prems) {
        auto [src, idx] = tracer.through_ews(
            node->premisses[static_cast<std::size_t>(p)].get(),
            shape.premisses[static_cast<std::size_t>(p)].active[0]);
        if (src) out->parents.push_back(build(src, idx));
      }
      return out;
    }
    out->via = "context";
    for (std::size_t p = 0; p < node->premisses.size(); p++) {
      int up = -1;
      for (std::size_t k = 0; k < shape.premisses[p].ctx_to_concl.size(); k++)
        if (shape.premisses[p].ctx_to_concl[k] == ci) up = static_cast<int>(k);
      if (up < 0) continue;
      auto [src, idx] = tracer.through_ews(node->premisses[p].get(), up);
      if (!src) continue;
      out->parents.push_back(build(src, idx));
    }
    return out;
  };
  AncestorTree out;
  out.root = build(hat.source, comp);
  return out;
}

std::size_t AncestorTree::size() const {
  std::size_t n = 0;
  std::function<void(const AncestorNode&)> walk = [&](const AncestorNode& a) {
    n++;
    for (const auto& p : a.parents) walk(*p);
  };
  if (root) walk(*root);
  return n;
}

Partials partial_derivations(const Derivation& d, const Calculus& c) {
  auto sf = is_structured_form(d, c);
  if (!sf.structured)
    throw NotStructured("partial_derivations: " + sf.reason);
  if (d.root()->concl.size() != 1)
    throw NotStructured("partial_derivations: end conclusion must be a sequent");

  HatInfo hat = hat_of(d);
  PartialBuilder pb(c);
  Partials out;
  out.end = d.root()->concl.at(0);
  for (std::size_t i = 0; i < hat.source->concl.size(); i++)
    out.parts.emplace_back(pb.build(hat.source, static_cast<int>(i)));
  out.provenance = std::move(pb.provenance);

  for (auto& part : out.parts) {
    CheckReport rep = check_partial(part, pb.sys_calc);
    if (!rep.ok())
      throw InvalidInput("partial derivation fails its checker: " + rep.summary());
  }
  return out;
}

// --- attach and split ------------------------------------------------------------

namespace {

struct GroupTop {
  DNode* node;
  int index;  // 1-based top rule index
};

// Group tag stored on partial tops before final instance assignment.
std::string placeholder(int hyp_app, int index) {
  return "@" + std::to_string(hyp_app) + ":" + std::to_string(index);
}

struct Splitter {
  const Calculus& sys_calc;
  Sequent end;
  int next_id = 1;
  int next_instance = 1;

  std::map<int, std::vector<GroupTop>> groups_in(DNode* root) {
    std::map<int, std::vector<GroupTop>> out;
    std::function<void(DNode&)> walk = [&](DNode& n) {
      if (n.sys && n.sys->role == SysRole::Top &&
          n.sys->instance.rfind('@', 0) == 0) {
        auto colon = n.sys->instance.find(':');
        int app = std::stoi(n.sys->instance.substr(1, colon - 1));
        int idx = std::stoi(n.sys->instance.substr(colon + 1));
        out[app].push_back({&n, idx});
      }
      for (auto& p : n.premisses) walk(*p);
    };
    walk(*root);
    return out;
  }

  std::unique_ptr<DNode> fresh_clone(const DNode& n) {
    auto c = n.clone();
    std::function<void(DNode&)> renum = [&](DNode& m) {
      m.id = next_id++;
      for (auto& p : m.premisses) renum(*p);
    };
    renum(*c);
    return c;
  }

  // Minimal group id among the placeholder tops of a subtree; INT_MAX if none.
  int min_group(const DNode& n) {
    int best = INT32_MAX;
    std::function<void(const DNode&)> walk = [&](const DNode& m) {
      if (m.sys && m.sys->instance.rfind('@', 0) == 0) {
        auto colon = m.sys->instance.find(':');
        best = std::min(best, std::stoi(m.sys->instance.substr(1, colon - 1)));
      }
      for (const auto& p : m.premisses) walk(*p);
    };
    walk(n);
    return best;
  }

  // Clone of `root` with every dummy bottom resolved to a single premiss:
  // the one containing `keep` when present, otherwise the premiss holding
  // the minimal group id.
  std::unique_ptr<DNode> restrict_to(const DNode* root, const DNode* keep) {
    if (root->rule == rules::dummy) {
      const DNode* chosen = nullptr;
      if (keep) {
        for (const auto& p : root->premisses)
          if (subtree_contains(p.get(), keep)) chosen = p.get();
      }
      if (!chosen) {
        int best = INT32_MAX;
        for (const auto& p : root->premisses) {
          int g = min_group(*p);
          if (g < best || !chosen) {
            best = g;
            chosen = p.get();
          }
        }
      }
      return restrict_to(chosen, keep);
    }
    auto out = std::make_unique<DNode>();
    out->id = next_id++;
    out->concl = root->concl;
    out->rule = root->rule;
    out->subst = root->subst;
    out->sys = root->sys;
    for (const auto& p : root->premisses)
      out->premisses.push_back(restrict_to(p.get(), keep));
    return out;
  }

  std::unique_ptr<DNode> strip_dummies(const DNode* root) {
    return restrict_to(root, nullptr);
  }

  // Builds the bottom rule complex for group `g`, using `anchors` for the
  // indices whose branch is already fixed. `fullJ` is the joined material.
  std::unique_ptr<DNode> build_bottom(int g, std::map<int, std::unique_ptr<DNode>> anchors,
                                      const DNode* fullJ, std::set<int> served) {
    auto all_groups = groups_in(const_cast<DNode*>(fullJ));
    auto git = all_groups.find(g);
    if (git == all_groups.end())
      throw MixedUnresolvable("group " + std::to_string(g) +
                              " has no tops in the joined material");
    // Indices of this group, ascending.
    std::map<int, DNode*> tops_by_index;
    for (const auto& t : git->second) {
      if (tops_by_index.count(t.index))
        throw MixedUnresolvable("group " + std::to_string(g) +
                                " has two tops with index " +
                                std::to_string(t.index));
      tops_by_index[t.index] = t.node;
    }
    const TwoSystem* sys = sys_calc.system_of_rule(
        git->second.front().node->rule);
    if (!sys) throw MixedUnresolvable("top rule without a system");

    std::string inst = "s" + std::to_string(next_instance++);
    served.insert(g);

    auto bottom = std::make_unique<DNode>();
    bottom->id = next_id++;
    bottom->rule = sys->bottom_name;
    bottom->concl = Hypersequent::single(end);
    Substitution bsub;
    bsub.bind_multiset("Gamma", end.ante);
    bsub.bind_succedent("Pi", end.succ);
    bottom->subst = std::move(bsub);
    SysTag tag{inst, SysRole::Bottom, {}};

    for (auto& [idx, top] : tops_by_index) {
      std::unique_ptr<DNode> branch;
      auto ait = anchors.find(idx);
      if (ait != anchors.end()) {
        branch = std::move(ait->second);
      } else {
        branch = restrict_to(fullJ, top);
      }
      // Tag this group's index-idx tops inside the branch.
      int tagged = 0;
      std::function<void(DNode&)> assign = [&](DNode& n) {
        if (n.sys && n.sys->instance == placeholder(g, idx)) {
          n.sys = SysTag{inst, SysRole::Top, {}};
          tagged++;
        } else if (n.sys && n.sys->role == SysRole::Top &&
                   n.sys->instance.rfind("@" + std::to_string(g) + ":", 0) == 0) {
          throw MixedUnresolvable(
              "top of group " + std::to_string(g) +
              " with the wrong index survives above premiss " +
              std::to_string(idx));
        }
        for (auto& p : n.premisses) assign(*p);
      };
      assign(*branch);
      if (tagged == 0)
        throw MixedUnresolvable("restricted branch lost its anchor top");

      bottom->premisses.push_back(expand(std::move(branch), fullJ, served));
      tag.premiss_tops.push_back(idx);
    }
    if (static_cast<int>(tag.premiss_tops.size()) == sys->arity())
      tag.premiss_tops.clear();  // identity map
    bottom->sys = std::move(tag);
    return bottom;
  }

  // Serves the remaining groups of a branch by stacking further bottoms.
  std::unique_ptr<DNode> expand(std::unique_ptr<DNode> branch, const DNode* fullJ,
                                const std::set<int>& served) {
    auto groups = groups_in(branch.get());
    int g = -1;
    for (const auto& [gid, tops] : groups)
      if (!served.count(gid)) { g = gid; break; }
    if (g < 0) return branch;
    // The branch anchors the index of g present in it.
    std::vector<GroupTop> mine = groups.at(g);
    std::set<int> idxs;
    for (const auto& t : mine) idxs.insert(t.index);
    if (idxs.size() != 1)
      throw MixedUnresolvable("branch holds two indices of group " +
                              std::to_string(g));
    std::map<int, std::unique_ptr<DNode>> anchors;
    anchors[*idxs.begin()] = std::move(branch);
    return build_bottom(g, std::move(anchors), fullJ, served);
  }
};

}  // namespace

Derivation attach_and_split(Partials partials, const Calculus& c) {
  Calculus sys_calc = sys_counterpart(c);
  Splitter sp{sys_calc, partials.end, 1, 1};

  // Tag partial tops with group placeholders.
  for (auto& part : partials.parts) {
    part.for_each([&](DNode& n) {
      auto it = partials.provenance.find(n.id);
      if (it != partials.provenance.end())
        n.sys = SysTag{placeholder(it->second.first, it->second.second),
                       SysRole::Top, {}};
    });
  }

  // Incidence components over partials sharing groups.
  const std::size_t m = partials.parts.size();
  std::vector<int> comp(m, -1);
  std::map<int, std::set<std::size_t>> group_parts;
  for (std::size_t i = 0; i < m; i++) {
    partials.parts[i].for_each([&](const DNode& n) {
      if (n.sys && n.sys->instance.rfind('@', 0) == 0) {
        auto colon = n.sys->instance.find(':');
        group_parts[std::stoi(n.sys->instance.substr(1, colon - 1))].insert(i);
      }
    });
  }
  std::function<void(std::size_t, int)> mark_comp = [&](std::size_t i, int cid) {
    if (comp[i] != -1) return;
    comp[i] = cid;
    for (const auto& [g, parts] : group_parts)
      if (parts.count(i))
        for (std::size_t j : parts) mark_comp(j, cid);
  };
  int ncomp = 0;
  for (std::size_t i = 0; i < m; i++)
    if (comp[i] == -1) mark_comp(i, ncomp++);

  // Keep the first component that carries groups; a groupless derivation
  // keeps its first partial.
  int chosen = comp.empty() ? -1 : comp[0];
  for (std::size_t i = 0; i < m; i++) {
    bool has_group = false;
    partials.parts[i].for_each([&](const DNode& n) {
      if (n.sys && n.sys->instance.rfind('@', 0) == 0) has_group = true;
    });
    if (has_group) {
      chosen = comp[i];
      break;
    }
  }

  std::vector<std::unique_ptr<DNode>> material;
  for (std::size_t i = 0; i < m; i++)
    if (comp[i] == chosen) material.push_back(partials.parts[i].take_root());
  if (material.empty()) throw InvalidInput("attach_and_split: no partials");

  std::unique_ptr<DNode> joined;
  if (material.size() == 1) {
    joined = std::move(material[0]);
  } else {
    joined = std::make_unique<DNode>();
    joined->id = 0;
    joined->rule = rules::dummy;
    joined->concl = Hypersequent::single(partials.end);
    for (auto& p : material) joined->premisses.push_back(std::move(p));
  }
  {
    int mid = 0;
    std::function<void(const DNode&)> mx = [&](const DNode& n) {
      mid = std::max(mid, n.id);
      for (const auto& p : n.premisses) mx(*p);
    };
    mx(*joined);
    sp.next_id = mid + 1;
  }

  auto groups = sp.groups_in(joined.get());
  std::unique_ptr<DNode> result;
  if (groups.empty()) {
    result = sp.strip_dummies(joined.get());
  } else {
    int g = groups.begin()->first;
    result = sp.build_bottom(g, {}, joined.get(), {});
  }

  // Nothing unassigned or dummy may remain.
  Derivation out(std::move(result));
  out.for_each([&](const DNode& n) {
    if (n.rule == rules::dummy)
      throw MixedUnresolvable("dummy bottom survived splitting");
    if (n.sys && n.sys->instance.rfind('@', 0) == 0)
      throw MixedUnresolvable("top application left unassigned");
  });
  out.renumber();

  CheckReport rep = check_sys(out, sys_calc);
  if (!rep.ok())
    throw MixedUnresolvable("attach_and_split output fails check_sys: " +
                            rep.summary());
  return out;
}

Derivation translate_h2s(const Derivation& d, const Calculus& c) {
  {
    CheckReport rep = check_hyp(d, c);
    if (!rep.ok())
      throw InvalidInput("translate_h2s: input fails check_hyp: " + rep.summary());
  }
  if (d.root()->concl.size() != 1)
    throw InvalidInput("translate_h2s: end conclusion must be a sequent");
  Sequent end = d.root()->concl.at(0);

  Derivation staged = reduce_ec(d.copy(), c);
  staged = structure_ew(std::move(staged), c);
  Partials parts = partial_derivations(staged, c);
  Derivation out = attach_and_split(std::move(parts), c);

  if (cmp(end_sequent(out), end) != 0)
    throw MixedUnresolvable("translate_h2s: end-sequent not preserved");
  return out;
}

}  // namespace hsr
