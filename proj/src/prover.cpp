#include "hsr/prover.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace hsr {

namespace {

Substitution sub_of(std::initializer_list<std::pair<const char*, FormulaPtr>> fs,
                    std::initializer_list<std::pair<const char*, FormulaMultiset>> ms,
                    std::initializer_list<std::pair<const char*, std::optional<FormulaPtr>>> ss) {
  Substitution s;
  for (const auto& [n, f] : fs) s.bind_formula(n, f);
  for (const auto& [n, m] : ms) s.bind_multiset(n, m);
  for (const auto& [n, v] : ss) s.bind_succedent(n, v);
  return s;
}

// Replaces component `at` of h with the given sequents (possibly several).
Hypersequent replace_comp(const Hypersequent& h, std::size_t at,
                          const std::vector<Sequent>& with) {
  Hypersequent out;
  for (std::size_t i = 0; i < h.size(); i++) {
    if (i == at) {
      for (const auto& s : with) out.add(s);
    } else {
      out.add(h.at(i));
    }
  }
  return out;
}

struct Searcher {
  const Calculus& calc;
  const SearchConfig& cfg;
  bool depth_exceeded = false;
  std::size_t visited = 0;
  int next_id = 1;

  std::vector<std::string> rule_order() const {
    if (!cfg.rule_order.empty()) return cfg.rule_order;
    std::vector<std::string> out;
    for (const auto& [n, _] : calc.hyp_rules) out.push_back(n);
    return out;
  }

  // Axiom closure: a component of shape phi => phi or bot, ... => Pi with
  // antecedent exactly {bot}; the remaining components are weakened in.
  std::unique_ptr<DNode> try_axiom(const Hypersequent& goal) {
    for (std::size_t i = 0; i < goal.size(); i++) {
      const Sequent& s = goal.at(i);
      std::unique_ptr<DNode> leaf;
      if (s.succ && s.ante.size() == 1 && formula_eq(s.ante.items()[0], *s.succ)) {
        leaf = make_node(next_id++, Hypersequent::single(s), rules::ax,
                         sub_of({{"phi", *s.succ}}, {}, {}));
      } else if (s.ante.size() == 1 && s.ante.items()[0]->kind == Conn::Bot) {
        leaf = make_node(next_id++, Hypersequent::single(s), rules::bot_ax,
                         sub_of({}, {}, {{"Pi", s.succ}}));
      } else {
        continue;
      }
      for (std::size_t j = 0; j < goal.size(); j++) {
        if (j == i) continue;
        Hypersequent concl = leaf->concl;
        concl.add(goal.at(j));
        auto n = make_node(next_id++, std::move(concl), rules::ew,
                           sub_of({}, {{"Gamma", goal.at(j).ante}},
                                  {{"Pi", goal.at(j).succ}}));
        n->premisses.push_back(std::move(leaf));
        leaf = std::move(n);
      }
      return leaf;
    }
    return nullptr;
  }

  struct Move {
    std::string rule;
    Substitution subst;
    std::vector<Hypersequent> premisses;
  };

  std::vector<Move> moves(const Hypersequent& goal) {
    std::vector<Move> out;
    for (std::size_t i = 0; i < goal.size(); i++) {
      const Sequent& s = goal.at(i);
      FormulaMultiset gamma = s.ante;

      if (s.succ) {
        const FormulaPtr f = *s.succ;
        if (f->kind == Conn::Imp) {
          Sequent p;
          p.ante = gamma;
          p.ante.add(f->lhs);
          p.succ = f->rhs;
          out.push_back({rules::imp_r,
                         sub_of({{"phi", f->lhs}, {"psi", f->rhs}},
                                {{"Gamma", gamma}}, {}),
                         {replace_comp(goal, i, {p})}});
        }
        if (f->kind == Conn::And) {
          Sequent p1{gamma, f->lhs}, p2{gamma, f->rhs};
          out.push_back({rules::and_r,
                         sub_of({{"phi", f->lhs}, {"psi", f->rhs}},
                                {{"Gamma", gamma}}, {}),
                         {replace_comp(goal, i, {p1}), replace_comp(goal, i, {p2})}});
        }
        if (f->kind == Conn::Or) {
          Sequent p1{gamma, f->lhs}, p2{gamma, f->rhs};
          Substitution su = sub_of({{"phi1", f->lhs}, {"phi2", f->rhs}},
                                   {{"Gamma", gamma}}, {});
          out.push_back({rules::or_r, su, {replace_comp(goal, i, {p1})}});
          out.push_back({rules::or_r, su, {replace_comp(goal, i, {p2})}});
        }
      }
      // Left rules: one move per distinct principal formula occurrence.
      std::vector<FormulaPtr> seen;
      for (const auto& f : s.ante.items()) {
        bool dup = false;
        for (const auto& g : seen)
          if (formula_eq(f, g)) dup = true;
        if (dup) continue;
        seen.push_back(f);
        FormulaMultiset rest = s.ante;
        rest.remove_one(f);
        if (f->kind == Conn::And) {
          Sequent p;
          p.ante = rest;
          p.ante.add(f->lhs);
          p.ante.add(f->rhs);
          p.succ = s.succ;
          out.push_back({rules::and_l,
                         sub_of({{"phi", f->lhs}, {"psi", f->rhs}},
                                {{"Gamma", rest}}, {{"Pi", s.succ}}),
                         {replace_comp(goal, i, {p})}});
        }
        if (f->kind == Conn::Or) {
          Sequent p1, p2;
          p1.ante = rest;
          p1.ante.add(f->lhs);
          p1.succ = s.succ;
          p2.ante = rest;
          p2.ante.add(f->rhs);
          p2.succ = s.succ;
          out.push_back({rules::or_l,
                         sub_of({{"phi", f->lhs}, {"psi", f->rhs}},
                                {{"Gamma", rest}}, {{"Pi", s.succ}}),
                         {replace_comp(goal, i, {p1}), replace_comp(goal, i, {p2})}});
        }
        if (f->kind == Conn::Imp) {
          Sequent p1{rest, f->lhs};
          Sequent p2;
          p2.ante = rest;
          p2.ante.add(f->rhs);
          p2.succ = s.succ;
          out.push_back({rules::imp_l,
                         sub_of({{"phi", f->lhs}, {"psi", f->rhs}},
                                {{"Gamma", rest}}, {{"Pi", s.succ}}),
                         {replace_comp(goal, i, {p1}), replace_comp(goal, i, {p2})}});
        }
      }
    }
    // Hypersequent rules.
    for (const auto& name : rule_order()) {
      const HypRuleSchema& schema = calc.hyp_rules.at(name);
      for (const auto& m : match_active(schema, goal)) {
        InstantiatedRule inst = instantiate(schema, m.subst);
        // Context: goal minus the selected components.
        std::vector<Sequent> ctx;
        std::set<std::size_t> sel(m.selection.begin(), m.selection.end());
        for (std::size_t i = 0; i < goal.size(); i++)
          if (!sel.count(i)) ctx.push_back(goal.at(i));
        Move mv;
        mv.rule = name;
        mv.subst = m.subst;
        for (const auto& pa : inst.premisses) {
          Hypersequent prem;
          for (const auto& g : ctx) prem.add(g);
          prem.add(pa);
          mv.premisses.push_back(std::move(prem));
        }
        out.push_back(std::move(mv));
      }
    }
    // (EC) backwards: duplicate a component.
    if (static_cast<int>(goal.size()) < cfg.max_components) {
      std::vector<Sequent> dup_seen;
      for (std::size_t i = 0; i < goal.size(); i++) {
        bool dup = false;
        for (const auto& q : dup_seen)
          if (cmp(q, goal.at(i)) == 0) dup = true;
        if (dup) continue;
        dup_seen.push_back(goal.at(i));
        Hypersequent prem = goal;
        prem.add(goal.at(i));
        out.push_back({rules::ec,
                       sub_of({}, {{"Gamma", goal.at(i).ante}},
                              {{"Pi", goal.at(i).succ}}),
                       {std::move(prem)}});
      }
    }
    return out;
  }

  std::unique_ptr<DNode> search(const Hypersequent& goal, int depth,
                                std::vector<Hypersequent>& trail) {
    visited++;
    for (const auto& h : trail)
      if (hyp_equal(h, goal)) return nullptr;
    if (auto ax = try_axiom(goal)) return ax;
    if (depth <= 0) {
      depth_exceeded = true;
      return nullptr;
    }
    trail.push_back(goal);
    for (const auto& mv : moves(goal)) {
      std::vector<std::unique_ptr<DNode>> subs;
      bool ok = true;
      for (const auto& p : mv.premisses) {
        auto sub = search(p, depth - 1, trail);
        if (!sub) {
          ok = false;
          break;
        }
        subs.push_back(std::move(sub));
      }
      if (!ok) continue;
      auto node = make_node(next_id++, goal, mv.rule, mv.subst);
      for (auto& s : subs) node->premisses.push_back(std::move(s));
      trail.pop_back();
      return node;
    }
    trail.pop_back();
    return nullptr;
  }
};

}  // namespace

ProveResult prove(const Hypersequent& goal, const Calculus& c,
                  const SearchConfig& cfg) {
  Searcher s{c, cfg};
  ProveResult out;
  std::vector<Hypersequent> trail;
  auto root = s.search(goal, cfg.max_depth, trail);
  out.depth_exceeded = s.depth_exceeded;
  out.visited = s.visited;
  if (root) {
    Derivation d(std::move(root));
    d.renumber();
    out.derivation = std::move(d);
  }
  return out;
}

// --- random derivations ------------------------------------------------------------

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
  bool chance(int percent) { return below(100) < percent; }
};

FormulaPtr random_atom(Rng& rng) {
  static const char* names[] = {"p", "q", "r", "s"};
  return Formula::atom(names[rng.below(4)]);
}

FormulaPtr random_small_formula(Rng& rng, int depth = 2) {
  if (depth <= 0 || rng.chance(50)) {
    if (rng.chance(10)) return Formula::bot();
    return random_atom(rng);
  }
  switch (rng.below(3)) {
    case 0:
      return Formula::conj(random_small_formula(rng, depth - 1),
                           random_small_formula(rng, depth - 1));
    case 1:
      return Formula::disj(random_small_formula(rng, depth - 1),
                           random_small_formula(rng, depth - 1));
    default:
      return Formula::imp(random_small_formula(rng, depth - 1),
                          random_small_formula(rng, depth - 1));
  }
}

struct Builder {
  int next_id = 1;

  std::unique_ptr<DNode> axiom(const FormulaPtr& f) {
    Sequent s;
    s.ante.add(f);
    s.succ = f;
    return make_node(next_id++, Hypersequent::single(s), rules::ax,
                     sub_of_one_formula(f));
  }

  static Substitution sub_of_one_formula(const FormulaPtr& f) {
    Substitution s;
    s.bind_formula("phi", f);
    return s;
  }

  // Sequent-mode (single component) internal weakening.
  std::unique_ptr<DNode> iw(std::unique_ptr<DNode> d, const FormulaPtr& f) {
    Sequent s = d->concl.at(0);
    Substitution sub;
    sub.bind_formula("phi", f);
    sub.bind_multiset("Gamma", s.ante);
    sub.bind_succedent("Pi", s.succ);
    Sequent c = s;
    c.ante.add(f);
    auto n = make_node(next_id++, Hypersequent::single(c), rules::iw, sub);
    n->premisses.push_back(std::move(d));
    return n;
  }

  // Derives `target` from an axiom by internal weakening; requires the
  // succedent (or bot) to occur in the antecedent.
  std::unique_ptr<DNode> leaf_chain(const Sequent& target) {
    FormulaPtr pivot;
    if (target.succ && target.ante.contains(*target.succ)) pivot = *target.succ;
    FormulaPtr bot = Formula::bot();
    std::unique_ptr<DNode> d;
    if (pivot) {
      d = axiom(pivot);
    } else if (target.ante.contains(bot)) {
      Sequent s;
      s.ante.add(bot);
      s.succ = target.succ;
      Substitution sub;
      sub.bind_succedent("Pi", target.succ);
      d = make_node(next_id++, Hypersequent::single(s), rules::bot_ax, sub);
      pivot = bot;
    } else {
      throw std::logic_error("leaf_chain: target is not axiom-reachable");
    }
    FormulaMultiset rest = target.ante;
    rest.remove_one(pivot);
    for (const auto& f : rest.items()) d = iw(std::move(d), f);
    return d;
  }
};

// --- LJ + systems generator --------------------------------------------------------

struct SysGen {
  const Calculus& calc;
  Rng rng;
  Builder b;
  int next_instance = 1;

  // Derivation of `target` from an axiom chain, with a top application of
  // rule index `idx` of `sys` (instance `inst`) inserted on the path.
  std::unique_ptr<DNode> branch_with_top(const TwoSystem& sys,
                                         const Substitution& shared,
                                         int idx, const std::string& inst,
                                         const Sequent& target) {
    const TopRule& top = sys.tops[static_cast<std::size_t>(idx)];
    // Instantiate the top: shared metavariables fixed, the rest pinned to
    // the target's succedent so every premiss closes by axiom.
    Substitution s = shared;
    std::set<std::string> vars = pattern_mvars(top.concl);
    for (const auto& p : top.premisses)
      for (const auto& v : pattern_mvars(p)) vars.insert(v);
    FormulaPtr pivot = target.succ ? *target.succ : Formula::bot();
    for (const auto& v : vars) {
      if (s.has(v)) continue;
      switch (sys.mvars.at(v)) {
        case MetavarKind::Formula:
          s.bind_formula(v, pivot);
          break;
        case MetavarKind::Multiset: {
          FormulaMultiset m;
          m.add(pivot);
          s.bind_multiset(v, m);
          break;
        }
        case MetavarKind::Succedent:
          s.bind_succedent(v, target.succ);
          break;
      }
    }
    InstantiatedRule inst_rule = instantiate_top(top, s);
    auto node = make_node(b.next_id++, Hypersequent::single(inst_rule.conclusion[0]),
                          top.name, s);
    node->sys = SysTag{inst, SysRole::Top, {}};
    for (const auto& p : inst_rule.premisses)
      node->premisses.push_back(b.leaf_chain(p));

    // Weaken down to the target.
    Sequent have = inst_rule.conclusion[0];
    auto diff = target.ante.minus(have.ante);
    if (!diff)
      throw std::logic_error("branch_with_top: top conclusion exceeds target");
    std::unique_ptr<DNode> d = std::move(node);
    for (const auto& f : diff->items()) d = b.iw(std::move(d), f);
    return d;
  }

  std::unique_ptr<DNode> instance_complex(const TwoSystem& sys, Sequent target,
                                          int budget) {
    std::string inst = "g" + std::to_string(next_instance++);
    Substitution shared;
    for (const auto& v : sys.shared) {
      switch (sys.mvars.at(v)) {
        case MetavarKind::Formula:
          shared.bind_formula(v, random_atom(rng));
          break;
        case MetavarKind::Multiset: {
          FormulaMultiset m;
          m.add(random_atom(rng));
          shared.bind_multiset(v, m);
          break;
        }
        case MetavarKind::Succedent:
          shared.bind_succedent(v, random_atom(rng));
          break;
      }
    }
    // The target must absorb every top conclusion: collect the sigma parts
    // by instantiating each top against the target succedent.
    FormulaPtr pivot = target.succ ? *target.succ : Formula::bot();
    target.ante.add(pivot);  // keep axiom reachability
    for (int i = 0; i < sys.arity(); i++) {
      Substitution probe = shared;
      const TopRule& top = sys.tops[static_cast<std::size_t>(i)];
      std::set<std::string> vars = pattern_mvars(top.concl);
      for (const auto& p : top.premisses)
        for (const auto& v : pattern_mvars(p)) vars.insert(v);
      for (const auto& v : vars) {
        if (probe.has(v)) continue;
        switch (sys.mvars.at(v)) {
          case MetavarKind::Formula:
            probe.bind_formula(v, pivot);
            break;
          case MetavarKind::Multiset: {
            FormulaMultiset m;
            m.add(pivot);
            probe.bind_multiset(v, m);
            break;
          }
          case MetavarKind::Succedent:
            probe.bind_succedent(v, target.succ);
            break;
        }
      }
      Sequent concl = instantiate_top(top, probe).conclusion[0];
      FormulaMultiset missing = concl.ante;
      for (const auto& f : target.ante.items()) missing.remove_one(f);
      target.ante.add_all(missing);
    }

    auto bottom = make_node(b.next_id++, Hypersequent::single(target),
                            sys.bottom_name, [&] {
                              Substitution s;
                              s.bind_multiset("Gamma", target.ante);
                              s.bind_succedent("Pi", target.succ);
                              return s;
                            }());
    bottom->sys = SysTag{inst, SysRole::Bottom, {}};
    for (int i = 0; i < sys.arity(); i++) {
      auto branch = branch_with_top(sys, shared, i, inst, target);
      // Extra applications of the same top rule joined by (or-l).
      if (budget > 0 && rng.chance(40)) {
        auto second = branch_with_top(sys, shared, i, inst, target);
        FormulaPtr fx = random_atom(rng);
        FormulaPtr gx = random_atom(rng);
        // branch: target; second: target. Join as or-l over fx v gx.
        auto left = b.iw(std::move(branch), fx);
        auto right = b.iw(std::move(second), gx);
        Sequent concl = target;
        concl.ante.add(Formula::disj(fx, gx));
        Substitution su;
        su.bind_formula("phi", fx);
        su.bind_formula("psi", gx);
        su.bind_multiset("Gamma", target.ante);
        su.bind_succedent("Pi", target.succ);
        auto join = make_node(b.next_id++, Hypersequent::single(concl),
                              rules::or_l, su);
        join->premisses.push_back(std::move(left));
        join->premisses.push_back(std::move(right));
        // Contract the disjunction away? Keep it: weaken the bottom target
        // instead; but the bottom conclusion is fixed, so fold with (ic)
        // after adding the disjunction to the shared target is not possible.
        // Instead weaken every other branch by the same disjunction below.
        branch = std::move(join);
      }
      bottom->premisses.push_back(std::move(branch));
    }
    // Align premisses: all must conclude exactly the bottom's sequent; any
    // extra formulas introduced by joins are folded with (ic) if duplicated
    // or absorbed by extending the bottom target.
    FormulaMultiset widest = target.ante;
    for (const auto& p : bottom->premisses) {
      FormulaMultiset missing = p->concl.at(0).ante;
      for (const auto& f : widest.items()) missing.remove_one(f);
      widest.add_all(missing);
    }
    Sequent wide = target;
    wide.ante = widest;
    for (auto& p : bottom->premisses) {
      auto diff = wide.ante.minus(p->concl.at(0).ante);
      if (!diff) throw std::logic_error("instance_complex: premiss misaligned");
      std::unique_ptr<DNode> q = std::move(p);
      for (const auto& f : diff->items()) q = b.iw(std::move(q), f);
      p = std::move(q);
    }
    bottom->concl = Hypersequent::single(wide);
    Substitution bs;
    bs.bind_multiset("Gamma", wide.ante);
    bs.bind_succedent("Pi", wide.succ);
    bottom->subst = bs;
    return bottom;
  }
};

}  // namespace

Derivation random_derivation(const Calculus& c, const SearchConfig& cfg,
                             std::uint64_t seed) {
  Rng rng(seed);
  Builder b;

  if (c.base == BaseCalculus::LJ && !c.systems.empty()) {
    SysGen gen{c, Rng(seed), b, 1};
    // Random simple end target.
    Sequent target;
    target.succ = random_atom(gen.rng);
    int extra = gen.rng.below(2);
    for (int i = 0; i < extra; i++) target.ante.add(random_atom(gen.rng));
    // Pick a system.
    std::vector<const TwoSystem*> sys;
    for (const auto& [_, s] : c.systems) sys.push_back(&s);
    const TwoSystem* s = sys[static_cast<std::size_t>(gen.rng.below(
        static_cast<int>(sys.size())))];
    auto root = gen.instance_complex(*s, target, cfg.max_depth);

    // A few unary moves below the bottom.
    std::unique_ptr<DNode> cur = std::move(root);
    int steps = gen.rng.below(3);
    for (int i = 0; i < steps; i++)
      cur = gen.b.iw(std::move(cur), random_small_formula(gen.rng, 1));
    Derivation d(std::move(cur));
    d.renumber();
    return d;
  }

  // Hypersequent mode: grow a derivation from an axiom with random forward
  // moves; two-premiss rules construct their second premiss from axioms.
  FormulaPtr a0 = random_atom(rng);
  std::unique_ptr<DNode> cur = b.axiom(a0);

  int steps = 2 + rng.below(std::max(2, cfg.max_depth));
  for (int i = 0; i < steps; i++) {
    const Hypersequent& h = cur->concl;
    int ci = rng.below(static_cast<int>(h.size()));
    Sequent s = h.at(static_cast<std::size_t>(ci));
    int move = rng.below(8);
    if (move == 0) {
      // iw on component ci
      FormulaPtr f = random_small_formula(rng, 1);
      Sequent ns = s;
      ns.ante.add(f);
      Substitution su;
      su.bind_formula("phi", f);
      su.bind_multiset("Gamma", s.ante);
      su.bind_succedent("Pi", s.succ);
      auto n = make_node(b.next_id++,
                         replace_comp(h, static_cast<std::size_t>(ci), {ns}),
                         rules::iw, su);
      n->premisses.push_back(std::move(cur));
      cur = std::move(n);
    } else if (move == 1 && s.succ) {
      // or-r
      FormulaPtr g = random_small_formula(rng, 1);
      bool left = rng.chance(50);
      FormulaPtr d = left ? Formula::disj(*s.succ, g) : Formula::disj(g, *s.succ);
      Sequent ns = s;
      ns.succ = d;
      Substitution su;
      su.bind_formula("phi1", d->lhs);
      su.bind_formula("phi2", d->rhs);
      su.bind_multiset("Gamma", s.ante);
      auto n = make_node(b.next_id++,
                         replace_comp(h, static_cast<std::size_t>(ci), {ns}),
                         rules::or_r, su);
      n->premisses.push_back(std::move(cur));
      cur = std::move(n);
    } else if (move == 2 && s.succ && !s.ante.empty()) {
      // imp-r moving a random antecedent formula to the right
      FormulaPtr f = s.ante.items()[static_cast<std::size_t>(
          rng.below(static_cast<int>(s.ante.size())))];
      Sequent ns;
      ns.ante = s.ante;
      ns.ante.remove_one(f);
      ns.succ = Formula::imp(f, *s.succ);
      Substitution su;
      su.bind_formula("phi", f);
      su.bind_formula("psi", *s.succ);
      su.bind_multiset("Gamma", ns.ante);
      auto n = make_node(b.next_id++,
                         replace_comp(h, static_cast<std::size_t>(ci), {ns}),
                         rules::imp_r, su);
      n->premisses.push_back(std::move(cur));
      cur = std::move(n);
    } else if (move == 3 && s.ante.size() >= 2) {
      // and-l combining two antecedent formulas
      FormulaPtr f = s.ante.items()[0];
      FormulaMultiset rest = s.ante;
      rest.remove_one(f);
      FormulaPtr g = rest.items()[static_cast<std::size_t>(
          rng.below(static_cast<int>(rest.size())))];
      rest.remove_one(g);
      Sequent ns;
      ns.ante = rest;
      ns.ante.add(Formula::conj(f, g));
      ns.succ = s.succ;
      Substitution su;
      su.bind_formula("phi", f);
      su.bind_formula("psi", g);
      su.bind_multiset("Gamma", rest);
      su.bind_succedent("Pi", s.succ);
      auto n = make_node(b.next_id++,
                         replace_comp(h, static_cast<std::size_t>(ci), {ns}),
                         rules::and_l, su);
      n->premisses.push_back(std::move(cur));
      cur = std::move(n);
    } else if (move == 4 && s.succ &&
               static_cast<int>(h.size()) < cfg.max_components) {
      // ew adding a fresh component
      Sequent nc;
      nc.ante.add(random_atom(rng));
      if (rng.chance(60)) nc.succ = random_small_formula(rng, 1);
      Hypersequent nh = h;
      nh.add(nc);
      Substitution su;
      su.bind_multiset("Gamma", nc.ante);
      su.bind_succedent("Pi", nc.succ);
      auto n = make_node(b.next_id++, std::move(nh), rules::ew, su);
      n->premisses.push_back(std::move(cur));
      cur = std::move(n);
    } else if (move == 5 && s.succ) {
      // and-r against a constructed premiss
      FormulaPtr other;
      if (!s.ante.empty() && rng.chance(70)) {
        other = s.ante.items()[static_cast<std::size_t>(
            rng.below(static_cast<int>(s.ante.size())))];
      } else if (s.ante.contains(Formula::bot())) {
        other = random_atom(rng);
      }
      if (other) {
        Sequent p2;
        p2.ante = s.ante;
        p2.succ = other;
        // second premiss: same context components
        Hypersequent ph = replace_comp(h, static_cast<std::size_t>(ci), {p2});
        Builder pb;
        pb.next_id = b.next_id;
        std::unique_ptr<DNode> second = pb.leaf_chain(p2);
        for (std::size_t j = 0; j < h.size(); j++) {
          if (j == static_cast<std::size_t>(ci)) continue;
          Hypersequent grown = second->concl;
          grown.add(h.at(j));
          Substitution su;
          su.bind_multiset("Gamma", h.at(j).ante);
          su.bind_succedent("Pi", h.at(j).succ);
          auto n2 = make_node(pb.next_id++, std::move(grown), rules::ew, su);
          n2->premisses.push_back(std::move(second));
          second = std::move(n2);
        }
        b.next_id = pb.next_id;
        Sequent ns;
        ns.ante = s.ante;
        ns.succ = Formula::conj(*s.succ, other);
        Substitution su;
        su.bind_formula("phi", *s.succ);
        su.bind_formula("psi", other);
        su.bind_multiset("Gamma", s.ante);
        auto n = make_node(b.next_id++,
                           replace_comp(h, static_cast<std::size_t>(ci), {ns}),
                           rules::and_r, su);
        n->premisses.push_back(std::move(cur));
        n->premisses.push_back(std::move(second));
        cur = std::move(n);
      }
    } else if (move == 6 && !c.hyp_rules.empty()) {
      // A hypersequent rule forward: match one premiss pattern against the
      // chosen component, close the others from axioms.
      std::vector<const HypRuleSchema*> rs;
      for (const auto& [_, r] : c.hyp_rules) rs.push_back(&r);
      const HypRuleSchema* schema =
          rs[static_cast<std::size_t>(rng.below(static_cast<int>(rs.size())))];
      if (!schema->premisses.empty() &&
          static_cast<int>(h.size() + schema->concl_active.size()) - 1 <=
              cfg.max_components) {
        auto subs = match_pattern(schema->premisses[0], s, Substitution{});
        if (!subs.empty()) {
          Substitution su = subs[static_cast<std::size_t>(
              rng.below(static_cast<int>(subs.size())))];
          // Bind remaining metavariables so other premisses close by axiom.
          for (const auto& [v, kind] : schema->mvars) {
            if (su.has(v)) continue;
            switch (kind) {
              case MetavarKind::Formula:
                su.bind_formula(v, random_atom(rng));
                break;
              case MetavarKind::Multiset: {
                FormulaMultiset mset;
                mset.add(Formula::bot());
                su.bind_multiset(v, mset);
                break;
              }
              case MetavarKind::Succedent:
                su.bind_succedent(v, random_atom(rng));
                break;
            }
          }
          InstantiatedRule inst = instantiate(*schema, su);
          bool closable = true;
          for (std::size_t p = 1; p < inst.premisses.size(); p++) {
            const Sequent& q = inst.premisses[p];
            bool ax = (q.succ && q.ante.contains(*q.succ)) ||
                      q.ante.contains(Formula::bot());
            if (!ax) closable = false;
          }
          if (closable) {
            std::vector<Sequent> ctx;
            for (std::size_t j = 0; j < h.size(); j++)
              if (j != static_cast<std::size_t>(ci)) ctx.push_back(h.at(j));
            Hypersequent concl;
            for (const auto& g : ctx) concl.add(g);
            for (const auto& a : inst.conclusion) concl.add(a);
            auto n = make_node(b.next_id++, std::move(concl), schema->name, su);
            n->premisses.push_back(std::move(cur));
            for (std::size_t p = 1; p < inst.premisses.size(); p++) {
              std::unique_ptr<DNode> prem = b.leaf_chain(inst.premisses[p]);
              for (const auto& g : ctx) {
                Hypersequent grown = prem->concl;
                grown.add(g);
                Substitution su2;
                su2.bind_multiset("Gamma", g.ante);
                su2.bind_succedent("Pi", g.succ);
                auto n2 = make_node(b.next_id++, std::move(grown), rules::ew, su2);
                n2->premisses.push_back(std::move(prem));
                prem = std::move(n2);
              }
              n->premisses.push_back(std::move(prem));
            }
            cur = std::move(n);
          }
        }
      }
    } else if (move == 7 && h.size() >= 2) {
      // ec when two components coincide
      int dup = -1, dup2 = -1;
      for (std::size_t x = 0; x < h.size() && dup < 0; x++)
        for (std::size_t y = x + 1; y < h.size() && dup < 0; y++)
          if (cmp(h.at(x), h.at(y)) == 0) {
            dup = static_cast<int>(x);
            dup2 = static_cast<int>(y);
          }
      if (dup >= 0) {
        Hypersequent nh;
        for (std::size_t j = 0; j < h.size(); j++)
          if (static_cast<int>(j) != dup2) nh.add(h.at(j));
        Substitution su;
        su.bind_multiset("Gamma", h.at(static_cast<std::size_t>(dup)).ante);
        su.bind_succedent("Pi", h.at(static_cast<std::size_t>(dup)).succ);
        auto n = make_node(b.next_id++, std::move(nh), rules::ec, su);
        n->premisses.push_back(std::move(cur));
        cur = std::move(n);
      }
    }
  }
  Derivation d(std::move(cur));
  d.renumber();
  return d;
}

}  // namespace hsr
