#include "hsr/natded.hpp"

#include <functional>
#include <map>
#include <set>

namespace hsr {

// --- polarity ----------------------------------------------------------------

bool in_p(const FormulaPtr& f, int n) {
  if (n < 0) return false;
  if (n == 0) return f->kind == Conn::Atom;
  switch (f->kind) {
    case Conn::Bot:
    case Conn::Top:
      return true;
    case Conn::Atom:
      return true;  // atoms are in N_{n-1} for every n-1 >= 0
    case Conn::And:
    case Conn::Or:
      return (in_p(f->lhs, n) && in_p(f->rhs, n)) || in_n(f, n - 1);
    case Conn::Imp:
      return in_n(f, n - 1);
  }
  return false;
}

bool in_n(const FormulaPtr& f, int n) {
  if (n < 0) return false;
  if (n == 0) return f->kind == Conn::Atom;
  switch (f->kind) {
    case Conn::Bot:
    case Conn::Top:
      return true;
    case Conn::Atom:
      return true;
    case Conn::And:
      return (in_n(f->lhs, n) && in_n(f->rhs, n)) || in_p(f, n - 1);
    case Conn::Imp:
      return (in_p(f->lhs, n) && in_n(f->rhs, n)) || in_p(f, n - 1);
    case Conn::Or:
      return in_p(f, n - 1);
  }
  return false;
}

namespace {
std::size_t formula_size(const FormulaPtr& f) {
  std::size_t n = 1;
  if (f->lhs) n += formula_size(f->lhs);
  if (f->rhs) n += formula_size(f->rhs);
  return n;
}
}  // namespace

PolarityClass classify(const FormulaPtr& f) {
  int bound = static_cast<int>(formula_size(f)) + 2;
  PolarityClass out{-1, -1};
  for (int n = 0; n <= bound; n++) {
    if (out.p_level < 0 && in_p(f, n)) out.p_level = n;
    if (out.n_level < 0 && in_n(f, n)) out.n_level = n;
    if (out.p_level >= 0 && out.n_level >= 0) break;
  }
  return out;
}

// --- hr_to_nd and the associated axiom ----------------------------------------

namespace {

struct ComponentShape {
  std::vector<FPatPtr> sigmas;
  std::string gamma;  // multiset metavar
  std::string pi;     // succedent metavar
};

ComponentShape read_component(const HypRuleSchema& h, const SequentPattern& pat) {
  ComponentShape out;
  int msets = 0;
  for (const auto& item : pat.ante) {
    if (const auto* fp = std::get_if<FPatPtr>(&item)) {
      out.sigmas.push_back(*fp);
    } else {
      msets++;
      out.gamma = std::get<MsetVar>(item).name;
    }
  }
  if (msets != 1)
    throw UnsupportedShape("component of " + h.name +
                           " must carry exactly one multiset variable");
  if (const auto* sv = std::get_if<SuccVar>(&pat.succ))
    out.pi = sv->name;
  else
    throw UnsupportedShape("component of " + h.name +
                           " must have a succedent variable");
  return out;
}

FormulaPtr fpat_to_formula(const FPatPtr& p) {
  switch (p->kind) {
    case FPat::Kind::Atom:
    case FPat::Kind::MVar:
      return Formula::atom(p->name);
    case FPat::Kind::Bot:
      return Formula::bot();
    case FPat::Kind::Top:
      return Formula::top();
    case FPat::Kind::And:
      return Formula::conj(fpat_to_formula(p->lhs), fpat_to_formula(p->rhs));
    case FPat::Kind::Or:
      return Formula::disj(fpat_to_formula(p->lhs), fpat_to_formula(p->rhs));
    case FPat::Kind::Imp:
      return Formula::imp(fpat_to_formula(p->lhs), fpat_to_formula(p->rhs));
  }
  throw std::logic_error("bad pattern");
}

FormulaPtr nest_disj(const std::vector<FormulaPtr>& fs, std::size_t from = 0) {
  if (fs.size() - from == 1) return fs[from];
  return Formula::disj(fs[from], nest_disj(fs, from + 1));
}

FormulaPtr nest_conj(const std::vector<FormulaPtr>& fs, std::size_t from = 0) {
  if (fs.size() - from == 1) return fs[from];
  return Formula::conj(fs[from], nest_conj(fs, from + 1));
}

FormulaPtr block_formula(const NDBlock& b) {
  std::vector<FormulaPtr> deltas;
  for (const auto& d : b.deltas) deltas.push_back(fpat_to_formula(d));
  FormulaPtr rhs = deltas.empty() ? Formula::bot() : nest_disj(deltas);
  if (b.sigmas.empty()) return rhs;  // empty conjunction: implication dropped
  std::vector<FormulaPtr> sigmas;
  for (const auto& s : b.sigmas) sigmas.push_back(fpat_to_formula(s));
  return Formula::imp(nest_conj(sigmas), rhs);
}

}  // namespace

NDRule hr_to_nd(const HypRuleSchema& h) {
  NDRule out;
  out.name = h.name;
  std::vector<ComponentShape> comps;
  for (const auto& c : h.concl_active) comps.push_back(read_component(h, c));

  for (std::size_t i = 0; i < comps.size(); i++) {
    NDBlock block;
    block.sigmas = comps[i].sigmas;
    for (int p : h.group(static_cast<int>(i))) {
      const SequentPattern& prem = h.premisses[static_cast<std::size_t>(p)];
      std::vector<FPatPtr> fpats;
      bool gamma_ok = false, pi_ok = false;
      for (const auto& item : prem.ante) {
        if (const auto* fp = std::get_if<FPatPtr>(&item))
          fpats.push_back(*fp);
        else if (std::get<MsetVar>(item).name == comps[i].gamma)
          gamma_ok = true;
      }
      if (const auto* sv = std::get_if<SuccVar>(&prem.succ))
        pi_ok = sv->name == comps[i].pi;
      if (fpats.size() != 1)
        throw UnsupportedShape("premiss of " + h.name +
                               " must carry a single delta formula");
      if (!gamma_ok || !pi_ok)
        throw UnsupportedShape("premiss of " + h.name +
                               " must repeat its component's context variables");
      block.deltas.push_back(fpats[0]);
    }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

FormulaPtr associated_axiom(const NDRule& r) {
  std::vector<FormulaPtr> parts;
  for (const auto& b : r.blocks) parts.push_back(block_formula(b));
  return nest_disj(parts);
}

FormulaPtr associated_axiom(const HypRuleSchema& h) {
  return associated_axiom(hr_to_nd(h));
}

// --- ND derivations -----------------------------------------------------------

std::unique_ptr<NDNode> NDNode::clone() const {
  auto out = std::make_unique<NDNode>();
  out->id = id;
  out->concl = concl;
  out->rule = rule;
  out->label = label;
  out->discharges = discharges;
  out->uppers = uppers;
  out->block = block;
  for (const auto& p : premisses) out->premisses.push_back(p->clone());
  return out;
}

int NDDerivation::renumber() {
  int next = 1;
  std::function<void(NDNode&)> walk = [&](NDNode& n) {
    n.id = next++;
    for (auto& p : n.premisses) walk(*p);
  };
  if (root_) walk(*root_);
  return next - 1;
}

void NDDerivation::for_each(const std::function<void(const NDNode&)>& fn) const {
  std::function<void(const NDNode&)> walk = [&](const NDNode& n) {
    fn(n);
    for (const auto& p : n.premisses) walk(*p);
  };
  if (root_) walk(*root_);
}

namespace {

struct NdIndex {
  std::map<int, const NDNode*> by_id;
  std::map<std::string, std::vector<const NDNode*>> dischargers;  // label -> nodes
  std::map<std::string, std::vector<const NDNode*>> assumes;      // label -> leaves
  std::vector<const NDNode*> uppers, bottoms;
};

void index_tree(const NDNode& n, NdIndex& ix, CheckReport& rep) {
  if (!ix.by_id.emplace(n.id, &n).second)
    rep.add(n.id, "node-id", "duplicate node id");
  if (n.rule == nd::assume && !n.label.empty())
    ix.assumes[n.label].push_back(&n);
  for (const auto& l : n.discharges) ix.dischargers[l].push_back(&n);
  if (n.rule.size() > 6 && n.rule.substr(n.rule.size() - 6) == ".upper")
    ix.uppers.push_back(&n);
  if (n.rule.size() > 7 && n.rule.substr(n.rule.size() - 7) == ".bottom")
    ix.bottoms.push_back(&n);
  for (const auto& p : n.premisses) index_tree(*p, ix, rep);
}

bool in_subtree(const NDNode* root, const NDNode* n) {
  if (root == n) return true;
  for (const auto& p : root->premisses)
    if (in_subtree(p.get(), n)) return true;
  return false;
}

// All assume leaves with the given label inside `root`.
void collect_labeled(const NDNode* root, const std::string& label,
                     std::vector<const NDNode*>& out) {
  if (root->rule == nd::assume && root->label == label) out.push_back(root);
  for (const auto& p : root->premisses)
    collect_labeled(p.get(), label, out);
}

const NDRule* find_nd_rule(const Calculus& c, const std::string& base) {
  auto it = c.nd_rules.find(base);
  return it == c.nd_rules.end() ? nullptr : it->second.get();
}

// Checks that every leaf labeled `label` anywhere in the derivation lies in
// `scope` and carries formula `f`.
void check_discharge(const NDNode& discharger, const std::string& label,
                     const NDNode* scope, const FormulaPtr& f, const NdIndex& ix,
                     CheckReport& rep) {
  auto it = ix.assumes.find(label);
  if (it == ix.assumes.end()) return;  // vacuous discharge
  for (const NDNode* a : it->second) {
    if (!in_subtree(scope, a)) {
      rep.add(discharger.id, "discharge-scope",
              "assumption [" + to_text(a->concl) + "]^" + label +
                  " lies outside the discharging premiss");
      continue;
    }
    if (!formula_eq(a->concl, f))
      rep.add(discharger.id, "discharge-formula",
              "label " + label + " discharges " + to_text(f) + " but binds " +
                  to_text(a->concl));
  }
}

void check_nd_node(const NDNode& n, const Calculus& c, const NdIndex& ix,
                   CheckReport& rep) {
  const auto& r = n.rule;
  auto need = [&](std::size_t k) {
    if (n.premisses.size() != k) {
      rep.add(n.id, "arity",
              r + " expects " + std::to_string(k) + " premisses");
      return false;
    }
    return true;
  };
  auto prem = [&](std::size_t i) -> const FormulaPtr& {
    return n.premisses[i]->concl;
  };

  if (r == nd::assume) {
    if (!n.premisses.empty()) rep.add(n.id, "arity", "assumptions are leaves");
    return;
  }
  if (r == nd::and_i) {
    if (!need(2)) return;
    if (n.concl->kind != Conn::And || !formula_eq(n.concl->lhs, prem(0)) ||
        !formula_eq(n.concl->rhs, prem(1)))
      rep.add(n.id, "shape", "conclusion is not the conjunction of the premisses");
    return;
  }
  if (r == nd::and_e1 || r == nd::and_e2) {
    if (!need(1)) return;
    if (prem(0)->kind != Conn::And ||
        !formula_eq(r == nd::and_e1 ? prem(0)->lhs : prem(0)->rhs, n.concl))
      rep.add(n.id, "shape", "premiss is not a conjunction with this conjunct");
    return;
  }
  if (r == nd::or_i1 || r == nd::or_i2) {
    if (!need(1)) return;
    if (n.concl->kind != Conn::Or ||
        !formula_eq(r == nd::or_i1 ? n.concl->lhs : n.concl->rhs, prem(0)))
      rep.add(n.id, "shape", "conclusion is not a disjunction of the premiss");
    return;
  }
  if (r == nd::or_e) {
    if (!need(3)) return;
    if (prem(0)->kind != Conn::Or) {
      rep.add(n.id, "shape", "major premiss is not a disjunction");
      return;
    }
    if (!formula_eq(prem(1), n.concl) || !formula_eq(prem(2), n.concl))
      rep.add(n.id, "shape", "minor premisses must conclude the conclusion");
    if (n.discharges.size() != 2) {
      rep.add(n.id, "discharge", "or-e discharges two labels");
      return;
    }
    check_discharge(n, n.discharges[0], n.premisses[1].get(), prem(0)->lhs, ix, rep);
    check_discharge(n, n.discharges[1], n.premisses[2].get(), prem(0)->rhs, ix, rep);
    return;
  }
  if (r == nd::imp_i) {
    if (!need(1)) return;
    if (n.concl->kind != Conn::Imp || !formula_eq(n.concl->rhs, prem(0))) {
      rep.add(n.id, "shape", "conclusion is not an implication of the premiss");
      return;
    }
    if (n.discharges.size() != 1) {
      rep.add(n.id, "discharge", "imp-i discharges one label");
      return;
    }
    check_discharge(n, n.discharges[0], n.premisses[0].get(), n.concl->lhs, ix, rep);
    return;
  }
  if (r == nd::imp_e) {
    if (!need(2)) return;
    if (prem(0)->kind != Conn::Imp || !formula_eq(prem(0)->lhs, prem(1)) ||
        !formula_eq(prem(0)->rhs, n.concl))
      rep.add(n.id, "shape", "modus ponens shape violated");
    return;
  }
  if (r == nd::bot_e) {
    if (!need(1)) return;
    if (prem(0)->kind != Conn::Bot)
      rep.add(n.id, "shape", "premiss of bot-e must be bot");
    return;
  }
  if (r == nd::top_i) {
    if (!n.premisses.empty()) rep.add(n.id, "arity", "top-i is a leaf");
    if (n.concl->kind != Conn::Top) rep.add(n.id, "shape", "conclusion must be top");
    return;
  }

  // Higher-level rule applications.
  auto dot = r.rfind('.');
  if (dot == std::string::npos) {
    rep.add(n.id, "rule", "unknown natural deduction rule " + r);
    return;
  }
  std::string base = r.substr(0, dot), part = r.substr(dot + 1);
  const NDRule* rule = find_nd_rule(c, base);
  if (!rule) {
    rep.add(n.id, "rule", "unknown higher-level rule " + base);
    return;
  }

  if (part == "bottom") {
    const std::size_t k = static_cast<std::size_t>(rule->arity());
    if (!need(k)) return;
    for (std::size_t i = 0; i < k; i++)
      if (!formula_eq(prem(i), n.concl))
        rep.add(n.id, "shape", "bottom premisses must conclude the conclusion");
    if (n.uppers.size() != k) {
      rep.add(n.id, "star-links", "bottom must discharge one upper per block");
      return;
    }
    // Per-instance substitution over the sigma/delta metavariables,
    // accumulated across the discharged uppers.
    Substitution inst;
    for (std::size_t i = 0; i < k; i++) {
      auto it = ix.by_id.find(n.uppers[i]);
      if (it == ix.by_id.end()) {
        rep.add(n.id, "star-links", "dangling upper reference");
        continue;
      }
      const NDNode* up = it->second;
      if (up->rule != base + ".upper" ||
          up->block != static_cast<int>(i) + 1) {
        rep.add(n.id, "star-links",
                "upper reference " + std::to_string(n.uppers[i]) +
                    " is not an application of block " + std::to_string(i + 1));
        continue;
      }
      if (!in_subtree(n.premisses[i].get(), up))
        rep.add(n.id, "star-scope",
                "discharged upper inference of block " + std::to_string(i + 1) +
                    " does not lie above premiss " + std::to_string(i + 1));
      // Consistency of sigma/delta instances across blocks.
      const NDBlock& blk = rule->blocks[i];
      const std::size_t ni = blk.sigmas.size();
      for (std::size_t j = 0; j < ni && j < up->premisses.size(); j++) {
        Substitution tmp = inst;
        if (!match_fpat(blk.sigmas[j], up->premisses[j]->concl, tmp)) {
          rep.add(up->id, "instance",
                  "hypothesis " + std::to_string(j + 1) + " of block " +
                      std::to_string(i + 1) + " does not instantiate its pattern");
        } else {
          inst = std::move(tmp);
        }
      }
      for (std::size_t j = 0; j < blk.deltas.size(); j++) {
        // Delta formulas bind through the discharged assumptions below.
        if (j < up->discharges.size()) {
          auto as = ix.assumes.find(up->discharges[j]);
          if (as != ix.assumes.end() && !as->second.empty()) {
            Substitution tmp = inst;
            if (match_fpat(blk.deltas[j], as->second[0]->concl, tmp))
              inst = std::move(tmp);
          }
        }
      }
    }
    return;
  }

  if (part == "upper") {
    int b = n.block;
    if (b < 1 || b > rule->arity()) {
      rep.add(n.id, "block", "upper application has no such block");
      return;
    }
    const NDBlock& blk = rule->blocks[static_cast<std::size_t>(b - 1)];
    const std::size_t ni = blk.sigmas.size(), mi = blk.deltas.size();
    if (!need(ni + mi)) return;
    if (mi == 0 && n.concl->kind != Conn::Bot) {
      rep.add(n.id, "shape",
              "block " + std::to_string(b) + " has no dischargeable assumptions; "
              "its conclusion must be bot");
      return;
    }
    // Sigma premisses instantiate the block's hypothesis patterns coherently.
    Substitution inst;
    for (std::size_t j = 0; j < ni; j++) {
      if (!match_fpat(blk.sigmas[j], prem(j), inst))
        rep.add(n.id, "shape",
                "hypothesis premiss " + std::to_string(j + 1) +
                    " does not instantiate its sigma pattern");
    }
    if (n.discharges.size() != mi) {
      rep.add(n.id, "discharge",
              "upper application must discharge " + std::to_string(mi) + " labels");
      return;
    }
    for (std::size_t j = 0; j < mi; j++) {
      const NDNode* scope = n.premisses[ni + j].get();
      if (!formula_eq(scope->concl, n.concl))
        rep.add(n.id, "shape",
                "dischargeable premiss " + std::to_string(j + 1) +
                    " must conclude the intermediate conclusion");
      FormulaPtr delta;
      {
        Substitution tmp = inst;
        auto as = ix.assumes.find(n.discharges[j]);
        if (as != ix.assumes.end() && !as->second.empty())
          delta = as->second[0]->concl;
        if (delta && match_fpat(blk.deltas[j], delta, tmp)) inst = std::move(tmp);
      }
      if (delta) check_discharge(n, n.discharges[j], scope, delta, ix, rep);
    }
    return;
  }
  rep.add(n.id, "rule", "unknown rule part " + part);
}

}  // namespace


CheckReport check_nd(const NDDerivation& d, const Calculus& c) {
  CheckReport rep;
  if (!d.root()) {
    rep.add(-1, "empty", "empty derivation");
    return rep;
  }
  NdIndex ix;
  index_tree(*d.root(), ix, rep);

  for (const auto& [label, nodes] : ix.dischargers)
    if (nodes.size() > 1)
      rep.add(nodes[1]->id, "discharge-label",
              "label " + label + " is bound by more than one application");

  // Every upper must be discharged by exactly one bottom.
  std::map<const NDNode*, int> upper_refs;
  for (const NDNode* b : ix.bottoms)
    for (int uid : b->uppers) {
      auto it = ix.by_id.find(uid);
      if (it != ix.by_id.end()) upper_refs[it->second]++;
    }
  for (const NDNode* u : ix.uppers) {
    int refs = upper_refs.count(u) ? upper_refs[u] : 0;
    if (refs != 1)
      rep.add(u->id, "undischarged-upper",
              "higher-level inference discharged " + std::to_string(refs) +
                  " times (needs exactly 1)");
  }

  std::function<void(const NDNode&)> walk = [&](const NDNode& n) {
    check_nd_node(n, c, ix, rep);
    for (const auto& p : n.premisses) walk(*p);
  };
  walk(*d.root());
  return rep;
}

std::vector<FormulaPtr> open_assumptions(const NDDerivation& d) {
  std::set<std::string> bound;
  d.for_each([&](const NDNode& n) {
    for (const auto& l : n.discharges) bound.insert(l);
  });
  std::vector<FormulaPtr> out;
  d.for_each([&](const NDNode& n) {
    if (n.rule == nd::assume && (n.label.empty() || !bound.count(n.label)))
      out.push_back(n.concl);
  });
  return out;
}

// --- derive_axiom --------------------------------------------------------------

namespace {

std::unique_ptr<NDNode> leaf_assume(FormulaPtr f, std::string label) {
  auto n = std::make_unique<NDNode>();
  n->concl = std::move(f);
  n->rule = nd::assume;
  n->label = std::move(label);
  return n;
}

std::unique_ptr<NDNode> apply1(std::string rule, FormulaPtr concl,
                               std::unique_ptr<NDNode> p) {
  auto n = std::make_unique<NDNode>();
  n->rule = std::move(rule);
  n->concl = std::move(concl);
  n->premisses.push_back(std::move(p));
  return n;
}

// Derivation of nest_disj(parts) from a derivation of parts[i].
std::unique_ptr<NDNode> disj_intro(const std::vector<FormulaPtr>& parts,
                                   std::size_t from, std::size_t i,
                                   std::unique_ptr<NDNode> d) {
  FormulaPtr whole = nest_disj(parts, from);
  if (from + 1 == parts.size()) return d;  // single disjunct
  if (i == from) return apply1(nd::or_i1, whole, std::move(d));
  return apply1(nd::or_i2, whole, disj_intro(parts, from + 1, i, std::move(d)));
}

// Projects sigma_j out of the assumed right-nested conjunction.
std::unique_ptr<NDNode> conj_project(const std::vector<FormulaPtr>& sigmas,
                                     std::size_t j, const std::string& label) {
  FormulaPtr conj = nest_conj(sigmas);
  std::unique_ptr<NDNode> cur = leaf_assume(conj, label);
  std::size_t i = 0;
  while (sigmas.size() - i > 1) {
    FormulaPtr rest = nest_conj(sigmas, i + 1);
    if (j == i) return apply1(nd::and_e1, sigmas[i], std::move(cur));
    cur = apply1(nd::and_e2, rest, std::move(cur));
    i++;
  }
  return cur;  // j is the last sigma; cur already concludes it
}

}  // namespace

NDDerivation derive_axiom(const NDRule& r) {
  std::vector<FormulaPtr> parts;
  for (const auto& b : r.blocks) parts.push_back(block_formula(b));
  FormulaPtr axiom = nest_disj(parts);

  auto bottom = std::make_unique<NDNode>();
  bottom->rule = r.name + ".bottom";
  bottom->concl = axiom;

  std::vector<NDNode*> upper_ptrs;
  int label_seq = 0;
  for (std::size_t i = 0; i < r.blocks.size(); i++) {
    const NDBlock& b = r.blocks[i];
    std::vector<FormulaPtr> sigmas, deltas;
    for (const auto& s : b.sigmas) sigmas.push_back(fpat_to_formula(s));
    for (const auto& d : b.deltas) deltas.push_back(fpat_to_formula(d));
    FormulaPtr ddisj = deltas.empty() ? Formula::bot() : nest_disj(deltas);

    auto upper = std::make_unique<NDNode>();
    upper->rule = r.name + ".upper";
    upper->block = static_cast<int>(i) + 1;
    upper->concl = ddisj;

    std::string conj_label = "h" + std::to_string(++label_seq);
    for (std::size_t j = 0; j < sigmas.size(); j++)
      upper->premisses.push_back(conj_project(sigmas, j, conj_label));
    for (std::size_t j = 0; j < deltas.size(); j++) {
      std::string dl = "d" + std::to_string(++label_seq);
      upper->discharges.push_back(dl);
      upper->premisses.push_back(
          disj_intro(deltas, 0, j, leaf_assume(deltas[j], dl)));
    }
    NDNode* upper_raw = upper.get();
    upper_ptrs.push_back(upper_raw);

    std::unique_ptr<NDNode> branch = std::move(upper);
    if (!sigmas.empty()) {
      auto impl = apply1(nd::imp_i, parts[i], std::move(branch));
      impl->discharges.push_back(conj_label);
      branch = std::move(impl);
    }
    bottom->premisses.push_back(disj_intro(parts, 0, i, std::move(branch)));
  }

  NDDerivation d(std::move(bottom));
  d.renumber();
  for (NDNode* u : upper_ptrs) d.root()->uppers.push_back(u->id);
  return d;
}

namespace {
void nd_text(const NDNode& n, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += to_text(n.concl) + " ; rule=" + n.rule;
  out += " ; id=n" + std::to_string(n.id);
  if (!n.label.empty()) out += " ; label=" + n.label;
  if (!n.discharges.empty()) {
    out += " ; discharges=";
    for (std::size_t i = 0; i < n.discharges.size(); i++) {
      if (i) out += ",";
      out += n.discharges[i];
    }
  }
  if (!n.uppers.empty()) {
    out += " ; uppers=";
    for (std::size_t i = 0; i < n.uppers.size(); i++) {
      if (i) out += ",";
      out += "n" + std::to_string(n.uppers[i]);
    }
  }
  if (n.block > 0) out += " ; block=" + std::to_string(n.block);
  out += "\n";
  for (const auto& p : n.premisses) nd_text(*p, depth + 1, out);
}
}  // namespace

std::string to_text(const NDDerivation& d) {
  std::string out;
  if (d.root()) nd_text(*d.root(), 0, out);
  return out;
}

}  // namespace hsr
