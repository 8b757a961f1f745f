#include "hsr/translate_rules.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace hsr {

HypRuleSchema sys_to_hyp(const TwoSystem& s) {
  auto rep = validate_system(s);
  if (!rep.ok()) throw InvalidSystem("invalid 2-system " + s.name + ": " + rep.summary());
  HypRuleSchema h;
  h.name = s.name.rfind("Sys_", 0) == 0 ? s.name.substr(4) : s.name + "_hr";
  h.mvars = s.mvars;
  for (std::size_t i = 0; i < s.tops.size(); i++) {
    h.concl_active.push_back(s.tops[i].concl);
    for (const auto& p : s.tops[i].premisses) {
      h.premisses.push_back(p);
      h.linkage.push_back(static_cast<int>(i));
    }
  }
  return h;
}

TwoSystem hyp_to_sys(const HypRuleSchema& h) {
  auto rep = validate_schema(h);
  if (!rep.ok()) throw InvalidSchema("invalid schema " + h.name + ": " + rep.summary());
  TwoSystem s;
  s.name = "Sys_" + h.name;
  s.bottom_name = h.name + "_B";
  s.mvars = h.mvars;
  for (std::size_t i = 0; i < h.concl_active.size(); i++) {
    TopRule t;
    t.name = h.name + std::to_string(i + 1);
    t.concl = h.concl_active[i];
    for (int p : h.group(static_cast<int>(i)))
      t.premisses.push_back(h.premisses[static_cast<std::size_t>(p)]);
    s.tops.push_back(std::move(t));
  }
  // Shared metavariables: everything a top acts on, i.e. its metavariables
  // except the per-application context pair Gamma_i => Pi_i. The context
  // pair exists when the conclusion's succedent is a variable; its multiset
  // component is the unique multiset variable occurring in the conclusion
  // and in every premiss of the top.
  for (const auto& t : s.tops) {
    std::set<std::string> ctx;
    if (const auto* sv = std::get_if<SuccVar>(&t.concl.succ)) {
      bool succ_everywhere = true;
      for (const auto& p : t.premisses) {
        const auto* pv = std::get_if<SuccVar>(&p.succ);
        if (!pv || pv->name != sv->name) succ_everywhere = false;
      }
      if (succ_everywhere) {
        std::set<std::string> candidates;
        for (const auto& item : t.concl.ante)
          if (const auto* mv = std::get_if<MsetVar>(&item))
            candidates.insert(mv->name);
        for (const auto& p : t.premisses) {
          std::set<std::string> here;
          for (const auto& item : p.ante)
            if (const auto* mv = std::get_if<MsetVar>(&item)) here.insert(mv->name);
          std::set<std::string> inter;
          for (const auto& n : candidates)
            if (here.count(n)) inter.insert(n);
          candidates = std::move(inter);
        }
        if (candidates.size() == 1) {
          ctx.insert(*candidates.begin());
          ctx.insert(sv->name);
        }
      }
    }
    std::set<std::string> here = pattern_mvars(t.concl);
    for (const auto& p : t.premisses)
      for (const auto& n : pattern_mvars(p)) here.insert(n);
    for (const auto& n : here)
      if (!ctx.count(n)) s.shared.insert(n);
  }
  return s;
}

// --- equality up to renaming and component reordering --------------------------

namespace {

struct Bijection {
  std::map<std::string, std::string> fwd, bwd;
  bool bind(const std::string& a, const std::string& b) {
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f == fwd.end() && g == bwd.end()) {
      fwd[a] = b;
      bwd[b] = a;
      return true;
    }
    return f != fwd.end() && f->second == b && g != bwd.end() && g->second == a;
  }
};

bool fpat_equal(const FPatPtr& a, const FPatPtr& b, Bijection& bij) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FPat::Kind::Atom:
      return a->name == b->name;
    case FPat::Kind::MVar:
      return bij.bind(a->name, b->name);
    case FPat::Kind::Bot:
    case FPat::Kind::Top:
      return true;
    default:
      return fpat_equal(a->lhs, b->lhs, bij) && fpat_equal(a->rhs, b->rhs, bij);
  }
}

bool pattern_equal(const SequentPattern& a, const SequentPattern& b, Bijection& bij) {
  // Antecedent: formula patterns matched in order of appearance, multiset
  // variables likewise; both lists must correspond.
  std::vector<FPatPtr> fa, fb;
  std::vector<std::string> ma, mb;
  for (const auto& i : a.ante) {
    if (const auto* f = std::get_if<FPatPtr>(&i)) fa.push_back(*f);
    else ma.push_back(std::get<MsetVar>(i).name);
  }
  for (const auto& i : b.ante) {
    if (const auto* f = std::get_if<FPatPtr>(&i)) fb.push_back(*f);
    else mb.push_back(std::get<MsetVar>(i).name);
  }
  if (fa.size() != fb.size() || ma.size() != mb.size()) return false;
  for (std::size_t i = 0; i < fa.size(); i++)
    if (!fpat_equal(fa[i], fb[i], bij)) return false;
  for (std::size_t i = 0; i < ma.size(); i++)
    if (!bij.bind(ma[i], mb[i])) return false;
  if (a.succ.index() != b.succ.index()) return false;
  if (const auto* f = std::get_if<FPatPtr>(&a.succ))
    return fpat_equal(*f, std::get<FPatPtr>(b.succ), bij);
  if (const auto* v = std::get_if<SuccVar>(&a.succ))
    return bij.bind(v->name, std::get<SuccVar>(b.succ).name);
  return true;
}

template <typename TryPerm>
bool for_some_permutation(std::size_t k, TryPerm&& attempt) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (attempt(perm)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace

bool schema_equal_upto(const HypRuleSchema& a, const HypRuleSchema& b) {
  if (a.concl_active.size() != b.concl_active.size()) return false;
  if (a.premisses.size() != b.premisses.size()) return false;
  return for_some_permutation(a.concl_active.size(), [&](const std::vector<std::size_t>& perm) {
    Bijection bij;
    for (std::size_t i = 0; i < a.concl_active.size(); i++)
      if (!pattern_equal(a.concl_active[i], b.concl_active[perm[i]], bij))
        return false;
    for (std::size_t i = 0; i < a.concl_active.size(); i++) {
      auto ga = a.group(static_cast<int>(i));
      auto gb = b.group(static_cast<int>(perm[i]));
      if (ga.size() != gb.size()) return false;
      for (std::size_t j = 0; j < ga.size(); j++)
        if (!pattern_equal(a.premisses[static_cast<std::size_t>(ga[j])],
                           b.premisses[static_cast<std::size_t>(gb[j])], bij))
          return false;
    }
    return true;
  });
}

bool system_equal_upto(const TwoSystem& a, const TwoSystem& b) {
  if (a.tops.size() != b.tops.size()) return false;
  return for_some_permutation(a.tops.size(), [&](const std::vector<std::size_t>& perm) {
    Bijection bij;
    for (std::size_t i = 0; i < a.tops.size(); i++) {
      const TopRule& ta = a.tops[i];
      const TopRule& tb = b.tops[perm[i]];
      if (ta.premisses.size() != tb.premisses.size()) return false;
      if (!pattern_equal(ta.concl, tb.concl, bij)) return false;
      for (std::size_t j = 0; j < ta.premisses.size(); j++)
        if (!pattern_equal(ta.premisses[j], tb.premisses[j], bij)) return false;
    }
    // Shared sets must correspond under the bijection.
    if (a.shared.size() != b.shared.size()) return false;
    for (const auto& n : a.shared) {
      auto it = bij.fwd.find(n);
      if (it == bij.fwd.end() || !b.shared.count(it->second)) return false;
    }
    return true;
  });
}

bool roundtrip_check(const TwoSystem& s) {
  return system_equal_upto(s, hyp_to_sys(sys_to_hyp(s)));
}

bool roundtrip_check(const HypRuleSchema& h) {
  return schema_equal_upto(h, sys_to_hyp(hyp_to_sys(h)));
}

}  // namespace hsr
