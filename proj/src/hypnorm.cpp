#include "hsr/hypnorm.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>

#include "hsr/sysnorm.hpp"  // PreconditionViolated

namespace hsr {

namespace {

std::map<const DNode*, DNode*> parent_map(Derivation& d) {
  std::map<const DNode*, DNode*> out;
  d.for_each([&](DNode& n) {
    for (auto& p : n.premisses) out[p.get()] = &n;
  });
  return out;
}

Sequent ec_component(const DNode& ec) {
  Sequent s;
  s.ante = ec.subst.multiset("Gamma");
  s.succ = ec.subst.succedent("Pi");
  return s;
}

Sequent ew_component(const DNode& ew) {
  Sequent s;
  s.ante = ew.subst.multiset("Gamma");
  s.succ = ew.subst.succedent("Pi");
  return s;
}

std::unique_ptr<DNode> ec_node(std::unique_ptr<DNode> premiss, const Sequent& comp,
                               int& next_id) {
  Hypersequent concl;
  bool dropped = false;
  for (const auto& c : premiss->concl.components()) {
    if (!dropped && cmp(c.seq, comp) == 0) {
      dropped = true;
      continue;
    }
    concl.add(c.seq);
  }
  if (!dropped) throw std::logic_error("ec_node: component not present");
  Substitution sub;
  sub.bind_multiset("Gamma", comp.ante);
  sub.bind_succedent("Pi", comp.succ);
  auto n = make_node(next_id++, std::move(concl), rules::ec, std::move(sub));
  n->premisses.push_back(std::move(premiss));
  return n;
}

std::unique_ptr<DNode> ew_node(std::unique_ptr<DNode> premiss, const Sequent& comp,
                               int& next_id) {
  Hypersequent concl = premiss->concl;
  concl.add(comp);
  Substitution sub;
  sub.bind_multiset("Gamma", comp.ante);
  sub.bind_succedent("Pi", comp.succ);
  auto n = make_node(next_id++, std::move(concl), rules::ew, std::move(sub));
  n->premisses.push_back(std::move(premiss));
  return n;
}

int max_node_id(const Derivation& d) {
  int m = 0;
  d.for_each([&](const DNode& n) { m = std::max(m, n.id); });
  return m;
}

// Multiset of component sequents.
std::vector<Sequent> comp_multiset(const Hypersequent& h) {
  std::vector<Sequent> out;
  for (const auto& c : h.components()) out.push_back(c.seq);
  std::sort(out.begin(), out.end(),
            [](const Sequent& a, const Sequent& b) { return cmp(a, b) < 0; });
  return out;
}

// a - b as multisets; nullopt if b is not included in a.
std::optional<std::vector<Sequent>> comp_minus(const std::vector<Sequent>& a,
                                               const std::vector<Sequent>& b) {
  std::vector<Sequent> out = a;
  for (const auto& s : b) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Sequent& t) { return cmp(t, s) == 0; });
    if (it == out.end()) return std::nullopt;
    out.erase(it);
  }
  return out;
}

}  // namespace

int ec_rank(const Derivation& d, int node_id) {
  const DNode* target = d.find(node_id);
  if (!target || target->rule != rules::ec) throw NotAnEC(node_id);
  int rank = 0;
  bool found = false;
  std::function<bool(const DNode*, int)> walk = [&](const DNode* n, int below) {
    if (n->id == node_id) {
      rank = below;
      found = true;
      return true;
    }
    int next = below + (n->rule == rules::ec ? 0 : 1);
    for (const auto& p : n->premisses)
      if (walk(p.get(), next)) return true;
    return false;
  };
  walk(d.root(), 0);
  assert(found);
  return rank;
}

// --- derive_Ld -----------------------------------------------------------------

namespace {

Hypersequent ld_member(const LdIndex& idx, int eprime, const std::vector<int>& x) {
  Hypersequent h;
  for (const auto& g : idx.base_context) h.add(g);
  for (int k = 0; k < idx.c + eprime; k++)
    for (const auto& hc : idx.concl_active) h.add(hc);
  for (std::size_t i = 0; i < x.size(); i++)
    for (int k = 0; k < x[i]; k++) h.add(idx.prem_active[i]);
  return h;
}

std::unique_ptr<DNode> ld_build(const LdIndex& idx, int eprime,
                                const std::vector<int>& x, int& next_id) {
  if (eprime == 0)
    return make_node(next_id++, ld_member(idx, 0, x), open_rule);
  auto n = make_node(next_id++, ld_member(idx, eprime, x), idx.rule, idx.subst);
  for (std::size_t i = 0; i < idx.prem_active.size(); i++) {
    std::vector<int> y = x;
    y[i]++;
    n->premisses.push_back(ld_build(idx, eprime - 1, y, next_id));
  }
  return n;
}

}  // namespace

std::vector<Derivation> derive_Ld(const LdIndex& idx,
                                  const std::vector<std::vector<int>>& targets) {
  if (idx.e < 0 || idx.e > idx.d)
    throw IndexOutOfRange("derive_Ld requires 0 <= e <= d");
  std::vector<Derivation> out;
  for (const auto& x : targets) {
    if (x.size() != idx.prem_active.size())
      throw IndexOutOfRange("target arity mismatch");
    int sum = 0;
    for (int v : x) {
      if (v < 0) throw IndexOutOfRange("negative copy count");
      sum += v;
    }
    if (sum != idx.d - idx.e)
      throw IndexOutOfRange("target counts must sum to d - e");
    int next_id = 1;
    out.emplace_back(ld_build(idx, idx.e, x, next_id));
  }
  return out;
}

// --- reduce_ec -----------------------------------------------------------------

namespace {

struct EcQueue {
  std::vector<DNode*> ecs;  // bottom (at the premiss) to top
  DNode* source = nullptr;  // first non-EC node above the queue
};

EcQueue queue_above(DNode* premiss) {
  EcQueue q;
  DNode* cur = premiss;
  while (cur->rule == rules::ec) {
    q.ecs.push_back(cur);
    cur = cur->premisses[0].get();
  }
  q.source = cur;
  return q;
}

struct Rewriter {
  const Calculus& calc;
  std::size_t max_nodes;
  int next_id;
  std::size_t created = 0;

  std::unique_ptr<DNode> fresh_clone(const DNode& n) {
    auto c = n.clone();
    std::function<void(DNode&)> renum = [&](DNode& m) {
      m.id = next_id++;
      for (auto& p : m.premisses) renum(*p);
    };
    renum(*c);
    return c;
  }

  void bump(std::size_t n) {
    created += n;
    if (created > max_nodes)
      throw std::runtime_error(
          "reduce_ec: node ceiling exceeded while expanding the L_d set");
  }

  // Rewrites the subtree rooted at the non-EC, non-EW node r whose premiss
  // queues carry the maximal-rank (EC)s. Returns the replacement subtree.
  std::unique_ptr<DNode> rewrite_multi(DNode* r) {
    CheckReport tmp;
    NodeShape shape;
    if (!check_node(*r, calc, KernelMode::Hyp, tmp, &shape))
      throw std::runtime_error("reduce_ec: invalid node in input: " +
                               tmp.summary());
    const std::size_t n = r->premisses.size();

    std::vector<EcQueue> queues;
    std::vector<Sequent> actives;         // C_i
    std::vector<int> m;                   // m_i
    std::vector<std::vector<Sequent>> gprime;  // G'_i
    for (std::size_t i = 0; i < n; i++) {
      queues.push_back(queue_above(r->premisses[i].get()));
      if (shape.premisses[i].active.size() != 1)
        throw PreconditionViolated(
            "reduce_ec requires one active component per premiss");
      actives.push_back(r->premisses[i]->concl.at(
          static_cast<std::size_t>(shape.premisses[i].active[0])));
    }
    // Context components of the conclusion.
    std::vector<Sequent> gctx;
    {
      std::vector<bool> is_active(r->concl.size(), false);
      for (int a : shape.active_concl) is_active[static_cast<std::size_t>(a)] = true;
      for (std::size_t j = 0; j < r->concl.size(); j++)
        if (!is_active[j]) gctx.push_back(r->concl.at(j));
    }
    std::vector<Sequent> h_comps;
    for (int a : shape.active_concl)
      h_comps.push_back(r->concl.at(static_cast<std::size_t>(a)));

    for (std::size_t i = 0; i < n; i++) {
      auto qtop = comp_multiset(queues[i].source->concl);
      auto pbot = comp_multiset(r->premisses[i]->concl);
      auto extra = comp_minus(qtop, pbot);
      if (!extra)
        throw std::runtime_error("reduce_ec: EC queue premiss mismatch");
      int mi = 1;
      std::vector<Sequent> gp;
      for (const auto& s : *extra) {
        if (cmp(s, actives[i]) == 0) mi++;
        else gp.push_back(s);
      }
      m.push_back(mi);
      gprime.push_back(std::move(gp));
    }

    int dsum = 1;
    for (int mi : m) dsum += mi - 1;

    std::vector<Sequent> gplus = gctx;
    std::vector<Sequent> gsecond;
    for (const auto& gp : gprime)
      for (const auto& s : gp) {
        gplus.push_back(s);
        gsecond.push_back(s);
      }

    LdIndex idx;
    idx.rule = r->rule;
    idx.subst = r->subst;
    idx.concl_active = h_comps;
    idx.prem_active = actives;
    idx.base_context = gplus;
    idx.c = 0;
    idx.d = dsum;
    idx.e = dsum;

    // Recursive build with sources plugged in at e' = 0.
    std::function<std::unique_ptr<DNode>(int, std::vector<int>&)> build =
        [&](int eprime, std::vector<int>& x) -> std::unique_ptr<DNode> {
      bump(1);
      if (eprime == 0) {
        // Source: smallest i with x_i >= m_i, weakened up to the member.
        std::size_t pick = n;
        for (std::size_t i = 0; i < n && pick == n; i++)
          if (x[i] >= m[i]) pick = i;
        if (pick == n)
          throw std::logic_error("reduce_ec: no source premiss for L_d member");
        std::unique_ptr<DNode> base = fresh_clone(*queues[pick].source);
        bump(0);
        Hypersequent target = ld_member(idx, 0, x);
        auto need = comp_minus(comp_multiset(target), comp_multiset(base->concl));
        if (!need)
          throw std::logic_error("reduce_ec: source not included in member");
        for (const auto& s : *need) {
          base = ew_node(std::move(base), s, next_id);
          bump(1);
        }
        return base;
      }
      auto node = make_node(next_id++, ld_member(idx, eprime, x), idx.rule, idx.subst);
      node->sys = r->sys;
      for (std::size_t i = 0; i < n; i++) {
        x[i]++;
        node->premisses.push_back(build(eprime - 1, x));
        x[i]--;
      }
      return node;
    };

    std::vector<int> zeros(n, 0);
    auto cur = build(dsum, zeros);

    // Close with (EC): contract the d copies of H, then G'' into G.
    for (const auto& hc : h_comps)
      for (int k = 0; k < dsum - 1; k++) cur = ec_node(std::move(cur), hc, next_id);
    for (const auto& s : gsecond) cur = ec_node(std::move(cur), s, next_id);

    if (!hyp_equal(cur->concl, r->concl))
      throw std::logic_error("reduce_ec: rewrite changed the conclusion");
    return cur;
  }

  // r is an (EW) directly below a maximal-rank queue: swap them.
  std::unique_ptr<DNode> rewrite_ew(DNode* r) {
    EcQueue q = queue_above(r->premisses[0].get());
    if (q.ecs.empty()) throw std::logic_error("rewrite_ew: no queue");
    Sequent w = ew_component(*r);

    std::unique_ptr<DNode> cur = fresh_clone(*q.source);
    cur = ew_node(std::move(cur), w, next_id);
    // Reapply the contractions, top to bottom, with w riding along.
    for (auto it = q.ecs.rbegin(); it != q.ecs.rend(); ++it)
      cur = ec_node(std::move(cur), ec_component(**it), next_id);
    if (!hyp_equal(cur->concl, r->concl))
      throw std::logic_error("rewrite_ew: rewrite changed the conclusion");
    return cur;
  }
};

// (mu, nu): maximal ec-rank and the number of (EC)s at that rank.
std::pair<int, int> ec_measure(const Derivation& d) {
  int mu = 0, nu = 0;
  std::function<void(const DNode*, int)> walk = [&](const DNode* n, int below) {
    if (n->rule == rules::ec) {
      if (below > mu) {
        mu = below;
        nu = 1;
      } else if (below == mu && mu > 0) {
        nu++;
      }
    }
    int next = below + (n->rule == rules::ec ? 0 : 1);
    for (const auto& p : n->premisses) walk(p.get(), next);
  };
  if (d.root()) walk(d.root(), 0);
  return {mu, nu};
}

}  // namespace

Derivation reduce_ec(Derivation d, const Calculus& calc, std::size_t max_nodes) {
  Rewriter rw{calc, max_nodes, max_node_id(d) + 1, 0};
  int guard = 0;
  while (true) {
    auto [mu, nu] = ec_measure(d);
    if (mu == 0) break;
    if (++guard > 100000)
      throw std::runtime_error("reduce_ec: step limit exceeded");

    // The rewrite site: first node (preorder) whose premiss queue holds a
    // maximal-rank (EC).
    DNode* site = nullptr;
    std::function<void(DNode*, int)> find = [&](DNode* n, int below) {
      int next = below + (n->rule == rules::ec ? 0 : 1);
      if (!site && n->rule != rules::ec) {
        for (auto& p : n->premisses) {
          if (p->rule == rules::ec && next == mu) {
            site = n;
            break;
          }
        }
      }
      for (auto& p : n->premisses)
        if (!site) find(p.get(), next);
    };
    find(d.root(), 0);
    if (!site)
      throw std::logic_error("reduce_ec: no rewrite site despite mu > 0");

    std::unique_ptr<DNode> replacement = site->rule == rules::ew
                                             ? rw.rewrite_ew(site)
                                             : rw.rewrite_multi(site);
    *site = std::move(*replacement);

    auto [mu2, nu2] = ec_measure(d);
    if (std::make_pair(mu2, nu2) >= std::make_pair(mu, nu))
      throw std::runtime_error("reduce_ec: (mu, nu) failed to decrease");
  }
  d.renumber();
  return d;
}

// --- structured form -----------------------------------------------------------

namespace {

// Consecutive (EW)s directly above a premiss: bottom-to-top plus the node
// above them.
struct EwQueue {
  std::vector<DNode*> ews;
  DNode* source = nullptr;
};

EwQueue ew_queue_above(DNode* premiss) {
  EwQueue q;
  DNode* cur = premiss;
  while (cur->rule == rules::ew) {
    q.ews.push_back(cur);
    cur = cur->premisses[0].get();
  }
  q.source = cur;
  return q;
}

}  // namespace

StructuredForm is_structured_form(const Derivation& d, const Calculus& calc) {
  StructuredForm out;
  if (!d.root()) {
    out.reason = "empty derivation";
    return out;
  }
  // Root queue of (EC)s.
  const DNode* cur = d.root();
  std::set<const DNode*> chain;
  while (cur->rule == rules::ec) {
    chain.insert(cur);
    cur = cur->premisses[0].get();
  }
  out.hat = cur->concl;

  bool ok = true;
  std::string reason;
  std::function<void(const DNode&)> walk = [&](const DNode& n) {
    if (n.rule == rules::ec && !chain.count(&n)) {
      ok = false;
      if (reason.empty())
        reason = "(EC) at node " + std::to_string(n.id) + " is not in the root queue";
    }
    for (const auto& p : n.premisses) walk(*p);
  };
  walk(*d.root());

  // Every (EW) must sit in a queue over a premiss of a rule with more than
  // one premiss, and the block must cover the context.
  auto& dm = const_cast<Derivation&>(d);
  auto parents = parent_map(dm);
  dm.for_each([&](DNode& n) {
    if (!ok || n.rule != rules::ew) return;
    // Descend through the (EW) chain below n to the first non-EW node.
    DNode* below = &n;
    while (true) {
      auto it = parents.find(below);
      if (it == parents.end()) {
        ok = false;
        reason = "(EW) at the root";
        return;
      }
      below = it->second;
      if (below->rule != rules::ew) break;
    }
    if (below->premisses.size() < 2) {
      ok = false;
      reason = "(EW) at node " + std::to_string(n.id) +
               " does not feed a rule with more than one premiss";
    }
  });

  if (ok) {
    // Coverage: for every multi-premiss rule with (EW) queues, each context
    // component occurrence must survive to the top of at least one queue.
    dm.for_each([&](DNode& r) {
      if (!ok || r.premisses.size() < 2 || r.rule == rules::dummy) return;
      bool has_ew = false;
      for (auto& p : r.premisses)
        if (p->rule == rules::ew) has_ew = true;
      if (!has_ew) return;

      CheckReport tmp;
      NodeShape shape;
      if (!check_node(r, calc, KernelMode::Hyp, tmp, &shape)) return;
      for (std::size_t j = 0; j < r.concl.size(); j++) {
        bool active = false;
        for (int a : shape.active_concl)
          if (a == static_cast<int>(j)) active = true;
        if (active) continue;
        bool covered = false;
        for (std::size_t i = 0; i < r.premisses.size() && !covered; i++) {
          // Trace component j up through premiss i's (EW) queue.
          int comp = -1;
          for (std::size_t k = 0; k < shape.premisses[i].ctx_to_concl.size(); k++)
            if (shape.premisses[i].ctx_to_concl[k] == static_cast<int>(j))
              comp = static_cast<int>(k);
          if (comp < 0) continue;
          DNode* node = r.premisses[i].get();
          bool alive = true;
          while (alive && node->rule == rules::ew) {
            CheckReport t2;
            NodeShape s2;
            if (!check_node(*node, calc, KernelMode::Hyp, t2, &s2)) break;
            if (s2.active_concl[0] == comp) {
              alive = false;  // introduced by this (EW)
              break;
            }
            // Position in the premiss (one component fewer).
            int up = -1;
            for (std::size_t k = 0; k < s2.premisses[0].ctx_to_concl.size(); k++)
              if (s2.premisses[0].ctx_to_concl[k] == comp) up = static_cast<int>(k);
            if (up < 0) {
              alive = false;
              break;
            }
            comp = up;
            node = node->premisses[0].get();
          }
          if (alive) covered = true;
        }
        if (!covered) {
          ok = false;
          reason = "context component of node " + std::to_string(r.id) +
                   " is introduced by (EW) in every premiss queue";
        }
      }
    });
  }

  out.structured = ok;
  out.reason = reason;
  return out;
}

Derivation structure_ew(Derivation d, const Calculus& calc) {
  if (!d.root() || d.root()->concl.size() != 1)
    throw PreconditionViolated("structure_ew: end conclusion must be a sequent");
  {
    auto [mu, nu] = ec_measure(d);
    if (mu != 0)
      throw PreconditionViolated("structure_ew: run reduce_ec first");
  }
  int next_id = max_node_id(d) + 1;
  int guard = 0;
  while (true) {
    if (++guard > 100000)
      throw std::runtime_error("structure_ew: step limit exceeded");
    auto parents = parent_map(d);

    DNode* e = nullptr;   // violating (EW)
    DNode* r = nullptr;   // its non-EW parent
    int ecase = 0;
    std::size_t prem_index = 0;

    std::function<void(DNode&)> scan = [&](DNode& n) {
      if (e) return;
      for (std::size_t i = 0; i < n.premisses.size() && !e; i++) {
        DNode* p = n.premisses[i].get();
        if (p->rule != rules::ew || n.rule == rules::ew) continue;
        // p is the bottom of an (EW) queue feeding n at premiss i.
        Sequent w = ew_component(*p);
        CheckReport tmp;
        NodeShape shape;
        if (!check_node(n, calc, KernelMode::Hyp, tmp, &shape)) continue;
        CheckReport t2;
        NodeShape se;
        if (!check_node(*p, calc, KernelMode::Hyp, t2, &se)) continue;
        int widx = se.active_concl[0];
        bool active_in_r = false;
        for (int a : shape.premisses[i].active)
          if (a == widx) active_in_r = true;
        if (active_in_r) {
          e = p; r = &n; ecase = 1; prem_index = i;
          break;
        }
        if (n.premisses.size() == 1) {
          e = p; r = &n; ecase = 2; prem_index = i;
          break;
        }
        // Multi-premiss: case 3 when w is queue-introduced in every premiss.
        bool all_queued = true;
        for (auto& q : n.premisses) {
          bool found = false;
          for (DNode* qe : ew_queue_above(q.get()).ews)
            if (cmp(ew_component(*qe), w) == 0) found = true;
          if (!found) all_queued = false;
        }
        if (all_queued) {
          e = p; r = &n; ecase = 3; prem_index = i;
          break;
        }
      }
      for (auto& p : n.premisses) scan(*p);
    };
    scan(*d.root());
    if (!e) break;

    if (ecase == 1) {
      // Drop the (EW) and the rule; re-weaken the rule's conclusion.
      std::unique_ptr<DNode> base = e->premisses[0]->clone();
      auto need = comp_minus(comp_multiset(r->concl), comp_multiset(base->concl));
      if (!need)
        throw std::logic_error("structure_ew: case 1 conclusion mismatch");
      for (const auto& s : *need) base = ew_node(std::move(base), s, next_id);
      *r = std::move(*base);
    } else if (ecase == 2) {
      Sequent w = ew_component(*e);
      CheckReport tmp;
      NodeShape shape;
      check_node(*r, calc, KernelMode::Hyp, tmp, &shape);
      CheckReport t2;
      NodeShape se;
      check_node(*e, calc, KernelMode::Hyp, t2, &se);
      int widx = se.active_concl[0];
      int cidx = shape.premisses[0].ctx_to_concl[static_cast<std::size_t>(widx)];
      if (cidx < 0) throw std::logic_error("structure_ew: case 2 lost component");
      auto shifted = std::make_unique<DNode>();
      shifted->id = next_id++;
      shifted->rule = r->rule;
      shifted->subst = r->subst;
      shifted->sys = r->sys;
      Hypersequent concl;
      for (std::size_t j = 0; j < r->concl.size(); j++)
        if (static_cast<int>(j) != cidx) concl.add(r->concl.at(j));
      shifted->concl = std::move(concl);
      shifted->premisses.push_back(e->premisses[0]->clone());
      auto weakened = ew_node(std::move(shifted), w, next_id);
      if (!hyp_equal(weakened->concl, r->concl))
        throw std::logic_error("structure_ew: case 2 changed the conclusion");
      *r = std::move(*weakened);
    } else {
      // Case 3: remove one (EW) of w from every premiss queue, apply the
      // rule with one context component fewer, weaken below.
      Sequent w = ew_component(*e);
      auto rebuilt = std::make_unique<DNode>();
      rebuilt->id = next_id++;
      rebuilt->rule = r->rule;
      rebuilt->subst = r->subst;
      rebuilt->sys = r->sys;
      for (auto& q : r->premisses) {
        EwQueue queue = ew_queue_above(q.get());
        // Additions in application order (top of the queue first).
        std::vector<Sequent> adds;
        for (auto it = queue.ews.rbegin(); it != queue.ews.rend(); ++it)
          adds.push_back(ew_component(**it));
        bool removed = false;
        std::unique_ptr<DNode> cur = queue.source->clone();
        for (const auto& s : adds) {
          if (!removed && cmp(s, w) == 0) {
            removed = true;
            continue;
          }
          cur = ew_node(std::move(cur), s, next_id);
        }
        if (!removed) throw std::logic_error("structure_ew: case 3 missing w");
        rebuilt->premisses.push_back(std::move(cur));
      }
      Hypersequent concl;
      bool dropped = false;
      for (const auto& c : r->concl.components()) {
        if (!dropped && cmp(c.seq, w) == 0) {
          dropped = true;
          continue;
        }
        concl.add(c.seq);
      }
      if (!dropped) throw std::logic_error("structure_ew: case 3 w not in conclusion");
      rebuilt->concl = std::move(concl);
      auto weakened = ew_node(std::move(rebuilt), w, next_id);
      if (!hyp_equal(weakened->concl, r->concl))
        throw std::logic_error("structure_ew: case 3 changed the conclusion");
      *r = std::move(*weakened);
    }
  }
  d.renumber();
  return d;
}

}  // namespace hsr
