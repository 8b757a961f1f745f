#include "hsr/sysnorm.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace hsr {

std::string InstanceClasses::find(const std::string& id) const {
  auto it = parent_.find(id);
  if (it == parent_.end() || it->second == id) return id;
  std::string root = find(it->second);
  parent_[id] = root;
  return root;
}

void InstanceClasses::unite(const std::string& a, const std::string& b) {
  std::string ra = find(a), rb = find(b);
  if (ra != rb) parent_[ra] = rb;
}

namespace {

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

bool strictly_above(const DNode* upper, const DNode* lower) {
  if (upper == lower) return false;
  for (const auto& p : lower->premisses)
    if (p.get() == upper || strictly_above(upper, p.get())) return true;
  return false;
}

bool contains(const DNode* root, const DNode* n) {
  return root == n || strictly_above(n, root);
}

// Path of premiss indices from the root to `n`.
std::vector<int> path_to(const DNode* root, const DNode* n) {
  std::vector<int> path;
  std::function<bool(const DNode*)> walk = [&](const DNode* cur) -> bool {
    if (cur == n) return true;
    for (std::size_t i = 0; i < cur->premisses.size(); i++) {
      path.push_back(static_cast<int>(i));
      if (walk(cur->premisses[i].get())) return true;
      path.pop_back();
    }
    return false;
  };
  walk(root);
  return path;
}

int max_node_id(const Derivation& d) {
  int m = 0;
  d.for_each([&](const DNode& n) { m = std::max(m, n.id); });
  return m;
}

}  // namespace

std::vector<std::tuple<std::string, int, int>> same_path_violations(
    const Derivation& d) {
  std::vector<std::tuple<std::string, int, int>> out;
  auto& dm = const_cast<Derivation&>(d);
  auto instances = collect_instances(dm);
  for (const auto& [inst, info] : instances) {
    for (const DNode* lower : info.tops)
      for (const DNode* upper : info.tops)
        if (lower != upper && strictly_above(upper, lower))
          out.emplace_back(inst, lower->id, upper->id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- antecedent padding -------------------------------------------------------

namespace {

Sequent padded(const Sequent& s, const FormulaMultiset& sigma) {
  Sequent out = s;
  out.ante.add_all(sigma);
  return out;
}

// The non-context part of a top-rule pattern: instantiated formula patterns
// plus instantiated shared multiset variables.
FormulaMultiset sigma_part(const SequentPattern& pat, const TwoSystem& sys,
                           const Substitution& subst) {
  FormulaMultiset out;
  for (const auto& item : pat.ante) {
    if (const auto* fp = std::get_if<FPatPtr>(&item)) {
      SequentPattern tmp;
      tmp.ante.push_back(*fp);
      Sequent one = instantiate_pattern(tmp, subst);
      out.add_all(one.ante);
    } else {
      const auto& mv = std::get<MsetVar>(item);
      if (sys.shared.count(mv.name)) out.add_all(subst.multiset(mv.name));
    }
  }
  return out;
}

// The context multiset variable of a top rule premiss/conclusion: the
// (unique) non-shared multiset variable, when present.
const std::string* context_mset(const SequentPattern& pat, const TwoSystem& sys) {
  const std::string* found = nullptr;
  for (const auto& item : pat.ante) {
    if (const auto* mv = std::get_if<MsetVar>(&item)) {
      if (!sys.shared.count(mv->name)) {
        if (found) return nullptr;  // ambiguous
        found = &mv->name;
      }
    }
  }
  return found;
}

struct Padder {
  const Calculus& calc;
  int& next_id;

  std::unique_ptr<DNode> iw_chain(std::unique_ptr<DNode> base,
                                  const FormulaMultiset& add) {
    for (const auto& f : add.items()) {
      Sequent s = base->concl.at(0);
      Substitution sub;
      sub.bind_formula("phi", f);
      sub.bind_multiset("Gamma", s.ante);
      sub.bind_succedent("Pi", s.succ);
      Sequent c = s;
      c.ante.add(f);
      auto n = make_node(next_id++, Hypersequent::single(c), rules::iw, sub);
      n->premisses.push_back(std::move(base));
      base = std::move(n);
    }
    return base;
  }

  std::unique_ptr<DNode> ic_chain(std::unique_ptr<DNode> base,
                                  const FormulaMultiset& dup) {
    for (const auto& f : dup.items()) {
      Sequent s = base->concl.at(0);
      Sequent c = s;
      if (!c.ante.remove_one(f))
        throw std::logic_error("ic_chain: formula not present");
      FormulaMultiset gamma = c.ante;
      gamma.remove_one(f);
      Substitution sub;
      sub.bind_formula("phi", f);
      sub.bind_multiset("Gamma", gamma);
      sub.bind_succedent("Pi", s.succ);
      auto n = make_node(next_id++, Hypersequent::single(c), rules::ic, sub);
      n->premisses.push_back(std::move(base));
      base = std::move(n);
    }
    return base;
  }

  // Adds sigma to the antecedent of every sequent in the subtree.
  std::unique_ptr<DNode> pad(const DNode& n, const FormulaMultiset& sigma) {
    const std::string& r = n.rule;
    if (r == rules::ax || r == rules::bot_ax) {
      return iw_chain(n.clone(), sigma);
    }
    auto out = std::make_unique<DNode>();
    out->id = next_id++;
    out->rule = r;
    out->subst = n.subst;
    out->sys = n.sys;
    out->concl = Hypersequent::single(padded(n.concl.at(0), sigma));
    for (const auto& p : n.premisses) out->premisses.push_back(pad(*p, sigma));

    if (r == rules::cut) {
      // Both premisses were padded; contract the duplicate after the cut.
      out->subst.bind_multiset("Gamma", padded(Sequent{n.subst.multiset("Gamma"), {}}, sigma).ante);
      out->subst.bind_multiset("Gamma2", padded(Sequent{n.subst.multiset("Gamma2"), {}}, sigma).ante);
      Sequent doubled = n.concl.at(0);
      doubled.ante.add_all(sigma);
      doubled.ante.add_all(sigma);
      out->concl = Hypersequent::single(doubled);
      return ic_chain(std::move(out), sigma);
    }
    if (rules::is_builtin(r)) {
      if (r == rules::dummy) return out;
      // Every remaining sequent builtin carries a Gamma context variable.
      FormulaMultiset g = n.subst.multiset("Gamma");
      g.add_all(sigma);
      out->subst.bind_multiset("Gamma", g);
      return out;
    }
    // Top or bottom of a 2-system: absorb into the context variable.
    const TwoSystem* sys = calc.system_of_rule(r);
    if (!sys) throw std::logic_error("pad: unknown rule " + r);
    if (r == sys->bottom_name) {
      FormulaMultiset g = n.subst.multiset("Gamma");
      g.add_all(sigma);
      out->subst.bind_multiset("Gamma", g);
      return out;
    }
    const TopRule* top = sys->top_by_name(r);
    const std::string* ctx = context_mset(top->concl, *sys);
    if (!ctx)
      throw PreconditionViolated(
          "top rule " + r + " has no context variable to absorb padding");
    FormulaMultiset g = n.subst.multiset(*ctx);
    g.add_all(sigma);
    out->subst.bind_multiset(*ctx, g);
    return out;
  }

  // Pads the segment from `n` down to the nested top `y` (exclusive of the
  // subtree kept above y) and replaces y by its keep-th premiss plus (IW).
  std::unique_ptr<DNode> pad_until(const DNode& n, const DNode* y,
                                   std::size_t keep,
                                   const FormulaMultiset& sigma,
                                   const FormulaMultiset& delta) {
    if (&n == y) {
      std::unique_ptr<DNode> kept = n.premisses[keep]->clone();
      return iw_chain(std::move(kept), delta);
    }
    if (!contains(&n, y)) return pad(n, sigma);
    auto out = std::make_unique<DNode>();
    out->id = next_id++;
    out->rule = n.rule;
    out->subst = n.subst;
    out->sys = n.sys;
    out->concl = Hypersequent::single(padded(n.concl.at(0), sigma));
    if (n.rule == rules::ax || n.rule == rules::bot_ax)
      throw std::logic_error("pad_until: axiom cannot contain the nested top");
    if (n.rule == rules::cut) {
      for (const auto& p : n.premisses)
        out->premisses.push_back(pad_until(*p, y, keep, sigma, delta));
      out->subst.bind_multiset("Gamma", padded(Sequent{n.subst.multiset("Gamma"), {}}, sigma).ante);
      out->subst.bind_multiset("Gamma2", padded(Sequent{n.subst.multiset("Gamma2"), {}}, sigma).ante);
      Sequent doubled = n.concl.at(0);
      doubled.ante.add_all(sigma);
      doubled.ante.add_all(sigma);
      out->concl = Hypersequent::single(doubled);
      return ic_chain(std::move(out), sigma);
    }
    for (const auto& p : n.premisses)
      out->premisses.push_back(pad_until(*p, y, keep, sigma, delta));
    if (rules::is_builtin(n.rule)) {
      if (n.rule != rules::dummy) {
        FormulaMultiset g = n.subst.multiset("Gamma");
        g.add_all(sigma);
        out->subst.bind_multiset("Gamma", g);
      }
      return out;
    }
    const TwoSystem* sys = calc.system_of_rule(n.rule);
    if (!sys) throw std::logic_error("pad_until: unknown rule " + n.rule);
    if (n.rule == sys->bottom_name) {
      FormulaMultiset g = n.subst.multiset("Gamma");
      g.add_all(sigma);
      out->subst.bind_multiset("Gamma", g);
      return out;
    }
    const TopRule* top = sys->top_by_name(n.rule);
    const std::string* ctx = context_mset(top->concl, *sys);
    if (!ctx)
      throw PreconditionViolated(
          "top rule " + n.rule + " has no context variable to absorb padding");
    FormulaMultiset g = n.subst.multiset(*ctx);
    g.add_all(sigma);
    out->subst.bind_multiset(*ctx, g);
    return out;
  }
};

}  // namespace

Derivation eliminate_same_path(Derivation d, const Calculus& c) {
  int next_id = max_node_id(d) + 1;
  while (true) {
    auto violations = same_path_violations(d);
    if (violations.empty()) break;

    auto instances = collect_instances(d);
    // Lowest X with a same-instance top above it, then a minimal nested Y
    // (no third application strictly between them).
    DNode* x = nullptr;
    DNode* y = nullptr;
    std::string inst;
    for (auto& [iname, info] : instances) {
      for (DNode* lower : info.tops) {
        for (DNode* upper : info.tops) {
          if (lower == upper || !strictly_above(upper, lower)) continue;
          bool minimal = true;
          for (DNode* mid : info.tops)
            if (mid != lower && mid != upper && strictly_above(mid, lower) &&
                strictly_above(upper, mid))
              minimal = false;
          if (!minimal) continue;
          bool lower_is_lowest = true;
          for (DNode* other : info.tops)
            if (other != lower && strictly_above(lower, other))
              lower_is_lowest = false;
          if (!lower_is_lowest) continue;
          if (!x || lower->id < x->id || (lower == x && upper->id < y->id)) {
            x = lower;
            y = upper;
            inst = iname;
          }
        }
      }
    }
    if (!x) break;  // defensive; violations nonempty implies a pair exists

    const TwoSystem* sys = c.system_of_rule(x->rule);
    const TopRule* top = sys->top_by_name(x->rule);
    // Premiss index of x whose subtree holds y.
    std::size_t pi = 0;
    for (std::size_t i = 0; i < x->premisses.size(); i++)
      if (contains(x->premisses[i].get(), y)) pi = i;

    FormulaMultiset sigma = sigma_part(top->premisses[pi], *sys, x->subst);
    FormulaMultiset delta = sigma_part(top->concl, *sys, y->subst);
    FormulaMultiset sigma_y = sigma_part(top->premisses[pi], *sys, y->subst);
    if (!(sigma == sigma_y))
      throw PreconditionViolated(
          "nested top applications disagree on the acted multiset");

    Padder padder{c, next_id};
    auto rebuilt = padder.pad_until(*x->premisses[pi], y, pi, sigma, delta);
    rebuilt = padder.ic_chain(std::move(rebuilt), sigma);
    x->premisses[pi] = std::move(rebuilt);
  }
  d.renumber();
  return d;
}

// --- entanglement --------------------------------------------------------------

namespace {

struct Vertical {
  bool above = false;  // some top of a above some top of b
};

std::map<std::pair<std::string, std::string>, Vertical> vertical_relations(
    Derivation& d) {
  auto instances = collect_instances(d);
  std::map<std::pair<std::string, std::string>, Vertical> rel;
  for (auto& [ia, a] : instances)
    for (auto& [ib, b] : instances) {
      if (ia == ib) continue;
      Vertical v;
      for (const DNode* ta : a.tops) {
        for (const DNode* tb : b.tops)
          if (strictly_above(ta, tb)) v.above = true;
      }
      rel[{ia, ib}] = v;
    }
  return rel;
}

}  // namespace

std::set<std::pair<std::string, std::string>> entangled_pairs(const Derivation& d) {
  auto& dm = const_cast<Derivation&>(d);
  auto rel = vertical_relations(dm);
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [key, v] : rel) {
    auto mirror = rel.find({key.second, key.first});
    if (v.above && mirror != rel.end() && mirror->second.above) {
      auto p = key.first < key.second ? key : std::make_pair(key.second, key.first);
      out.insert(p);
    }
  }
  return out;
}

long e_number(const Derivation& d, const std::string& instance,
              const InstanceClasses& uf) {
  auto& dm = const_cast<Derivation&>(d);
  auto instances = collect_instances(dm);
  auto it = instances.find(instance);
  if (it == instances.end() || !it->second.bottom) throw UnknownInstance(instance);
  auto entangled = entangled_pairs(d);
  auto is_entangled_with = [&](const std::string& other) {
    auto p = instance < other ? std::make_pair(instance, other)
                              : std::make_pair(other, instance);
    return entangled.count(p) != 0;
  };
  long total = 0;
  for (const auto& prem : it->second.bottom->premisses) {
    std::set<std::string> classes;
    for (const auto& [other, info] : instances) {
      if (other == instance || !is_entangled_with(other)) continue;
      for (const DNode* t : info.tops)
        if (contains(prem.get(), t)) {
          classes.insert(uf.find(other));
          break;
        }
    }
    total += static_cast<long>(classes.size());
  }
  return total;
}

long e_number(const Derivation& d, const std::string& instance) {
  InstanceClasses uf;
  return e_number(d, instance, uf);
}

namespace {

// Lowest (closest to root) then leftmost (lexicographically smallest premiss
// path) entangled instance.
std::string lowest_leftmost(Derivation& d, const std::set<std::string>& entangled) {
  auto instances = collect_instances(d);
  std::string best;
  std::vector<int> best_path;
  for (const auto& inst : entangled) {
    auto it = instances.find(inst);
    if (it == instances.end() || !it->second.bottom) continue;
    std::vector<int> path = path_to(d.root(), it->second.bottom);
    bool better = best.empty();
    if (!better) {
      if (path.size() != best_path.size())
        better = path.size() < best_path.size();
      else
        better = path < best_path;
    }
    if (better) {
      best = inst;
      best_path = path;
    }
  }
  return best;
}

std::set<std::string> entangled_instances(const Derivation& d) {
  std::set<std::string> out;
  for (const auto& [a, b] : entangled_pairs(d)) {
    out.insert(a);
    out.insert(b);
  }
  return out;
}

}  // namespace

EntanglementMeasure entanglement_measure(const Derivation& d,
                                         const InstanceClasses& uf) {
  EntanglementMeasure m;
  auto ent = entangled_instances(d);
  std::set<std::string> classes;
  for (const auto& i : ent) classes.insert(uf.find(i));
  m.kappa = static_cast<long>(classes.size());
  if (m.kappa == 0) return m;
  auto& dm = const_cast<Derivation&>(d);
  std::string low = lowest_leftmost(dm, ent);
  std::string low_class = uf.find(low);
  for (const auto& i : ent) {
    if (uf.find(i) != low_class) continue;
    long e = e_number(d, i, uf);
    if (e > m.mu) {
      m.mu = e;
      m.nu = 1;
    } else if (e == m.mu) {
      m.nu++;
    }
  }
  return m;
}

namespace {

// Renames instances wholly contained in the copy and tags `instance` tops
// with the given replacement id.
void retag_copy(DNode& n, const std::string& instance,
                const std::string& replacement,
                const std::map<std::string, std::string>& renames) {
  if (n.sys) {
    if (n.sys->instance == instance && n.sys->role == SysRole::Top) {
      n.sys->instance = replacement;
    } else {
      auto it = renames.find(n.sys->instance);
      if (it != renames.end()) n.sys->instance = it->second;
    }
  }
  for (auto& p : n.premisses) retag_copy(*p, instance, replacement, renames);
}

std::set<std::string> instances_fully_inside(const DNode* root,
                                             Derivation& whole) {
  std::set<std::string> inside, outside;
  whole.for_each([&](DNode& n) {
    if (!n.sys) return;
    if (contains(root, &n))
      inside.insert(n.sys->instance);
    else
      outside.insert(n.sys->instance);
  });
  std::set<std::string> out;
  for (const auto& i : inside)
    if (!outside.count(i)) out.insert(i);
  return out;
}

int unique_suffix = 0;

}  // namespace

Derivation e_reduce(Derivation d, const std::string& instance, InstanceClasses& uf) {
  auto instances = collect_instances(d);
  auto it = instances.find(instance);
  if (it == instances.end() || !it->second.bottom) throw UnknownInstance(instance);
  auto entangled = entangled_pairs(d);
  std::set<std::string> partners;
  for (const auto& [a, b] : entangled) {
    if (a == instance) partners.insert(b);
    if (b == instance) partners.insert(a);
  }
  if (partners.empty())
    throw PreconditionViolated("instance " + instance + " is not entangled");

  DNode* bottom = it->second.bottom;
  std::vector<DNode*> partner_tops;
  for (const auto& p : partners)
    for (DNode* t : instances[p].tops) partner_tops.push_back(t);

  // The premiss whose copy splits: smallest index with an interleaved pair.
  std::size_t split = bottom->premisses.size();
  for (std::size_t i = 0; i < bottom->premisses.size() && split == bottom->premisses.size(); i++) {
    const DNode* prem = bottom->premisses[i].get();
    for (DNode* t : it->second.tops) {
      if (!contains(prem, t)) continue;
      for (DNode* w : partner_tops)
        if (contains(prem, w) &&
            (strictly_above(t, w) || strictly_above(w, t))) {
          split = i;
          break;
        }
      if (split < bottom->premisses.size()) break;
    }
  }
  if (split == bottom->premisses.size())
    throw PreconditionViolated("instance " + instance +
                               " has no premiss with interleaved tops");

  std::string prime = instance + "'" + std::to_string(++unique_suffix);
  std::string dprime = instance + "''" + std::to_string(unique_suffix);
  uf.unite(instance, prime);
  uf.unite(instance, dprime);

  // Reassign this premiss's own tops: above a partner top -> S', below -> S'',
  // neither -> S'.
  DNode* split_prem = bottom->premisses[split].get();
  std::function<void(DNode&)> reassign = [&](DNode& n) {
    if (n.sys && n.sys->role == SysRole::Top && n.sys->instance == instance) {
      bool above = false, below = false;
      for (DNode* w : partner_tops) {
        if (strictly_above(&n, w)) above = true;
        if (strictly_above(w, &n)) below = true;
      }
      n.sys->instance = above ? prime : (below ? dprime : prime);
    }
    for (auto& p : n.premisses) reassign(*p);
  };
  reassign(*split_prem);

  // Copies of the other premisses; instances wholly inside are renamed per
  // copy and recorded as ~-related copies.
  int next_id = max_node_id(d) + 1;
  auto make_copy = [&](const DNode& src, const std::string& owner) {
    auto cp = src.clone();
    std::map<std::string, std::string> renames;
    std::set<std::string> inner = instances_fully_inside(&src, d);
    inner.erase(instance);
    for (const auto& i : inner) {
      std::string fresh = i + "~" + std::to_string(++unique_suffix);
      renames[i] = fresh;
      uf.unite(i, fresh);
    }
    retag_copy(*cp, instance, owner, renames);
    std::function<void(DNode&)> renum = [&](DNode& n) {
      n.id = next_id++;
      for (auto& p : n.premisses) renum(*p);
    };
    renum(*cp);
    return cp;
  };

  auto inner_bottom = std::make_unique<DNode>();
  inner_bottom->id = next_id++;
  inner_bottom->concl = bottom->concl;
  inner_bottom->rule = bottom->rule;
  inner_bottom->subst = bottom->subst;
  inner_bottom->sys = SysTag{prime, SysRole::Bottom, {}};

  auto outer_bottom = std::make_unique<DNode>();
  outer_bottom->id = bottom->id;
  outer_bottom->concl = bottom->concl;
  outer_bottom->rule = bottom->rule;
  outer_bottom->subst = bottom->subst;
  outer_bottom->sys = SysTag{dprime, SysRole::Bottom, {}};

  std::vector<std::unique_ptr<DNode>> original_premisses;
  for (auto& p : bottom->premisses) original_premisses.push_back(std::move(p));
  bottom->premisses.clear();

  for (std::size_t i = 0; i < original_premisses.size(); i++) {
    if (i == split) {
      // The split premiss keeps its (reassigned) original; S' owns it.
      inner_bottom->premisses.push_back(std::move(original_premisses[i]));
    } else {
      inner_bottom->premisses.push_back(make_copy(*original_premisses[i], prime));
    }
  }
  for (std::size_t i = 0; i < original_premisses.size(); i++) {
    if (i == split) {
      outer_bottom->premisses.push_back(std::move(inner_bottom));
    } else {
      outer_bottom->premisses.push_back(make_copy(*original_premisses[i], dprime));
    }
  }

  // Splice the new complex into the old bottom's position.
  *bottom = std::move(*outer_bottom);
  d.renumber();
  return d;
}

Derivation disentangle(Derivation d, const Calculus& c) {
  (void)c;
  InstanceClasses uf;
  int guard = 0;
  while (true) {
    auto ent = entangled_instances(d);
    if (ent.empty()) break;
    if (++guard > 10000)
      throw std::runtime_error("disentangle: step limit exceeded");

    EntanglementMeasure before = entanglement_measure(d, uf);
    std::string low = lowest_leftmost(d, ent);
    std::string low_class = uf.find(low);

    // Topmost element of the class with maximal e-number.
    std::string pick;
    long best_e = -1;
    std::vector<int> pick_path;
    auto instances = collect_instances(d);
    for (const auto& i : ent) {
      if (uf.find(i) != low_class) continue;
      long e = e_number(d, i, uf);
      std::vector<int> path = path_to(d.root(), instances[i].bottom);
      bool better = false;
      if (e > best_e) better = true;
      else if (e == best_e) {
        // topmost: deeper bottom; tie: lexicographically greater path
        if (path.size() != pick_path.size()) better = path.size() > pick_path.size();
        else better = path > pick_path;
      }
      if (better) {
        pick = i;
        best_e = e;
        pick_path = path;
      }
    }

    d = e_reduce(std::move(d), pick, uf);
    EntanglementMeasure after = entanglement_measure(d, uf);
    if (!(after < before))
      throw std::runtime_error(
          "disentangle: entanglement measure failed to decrease");
  }
  return d;
}

}  // namespace hsr
