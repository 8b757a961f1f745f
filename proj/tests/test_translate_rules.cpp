#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hsr/io.hpp"
#include "hsr/translate_rules.hpp"

using namespace hsr;

namespace {
Calculus load(const char* name) {
  return load_calculus(std::string(FIXTURES) + "/" + name);
}
}  // namespace

TEST_CASE("Sys(com*) translates to the (com*) rule of Example 3.1") {
  Calculus c = load("comstar_sys.cal");
  HypRuleSchema h = sys_to_hyp(c.systems.at("Sys_comstar"));
  REQUIRE(h.concl_active.size() == 2);
  REQUIRE(h.premisses.size() == 2);
  CHECK(h.linkage == std::vector<int>{0, 1});
  CHECK(to_text(h.concl_active[0]) == "psi, G1 => P1");
  CHECK(to_text(h.concl_active[1]) == "phi, G2 => P2");
  CHECK(to_text(h.premisses[0]) == "phi, psi, G1 => P1");
  CHECK(to_text(h.premisses[1]) == "phi, psi, G2 => P2");
}

TEST_CASE("the LEM 2-system translates to Example 5.1's rule") {
  Calculus c = load("lem_sys.cal");
  HypRuleSchema h = sys_to_hyp(c.systems.at("Sys_lem"));
  REQUIRE(h.concl_active.size() == 2);
  CHECK(to_text(h.concl_active[0]) == "G1 => P1");
  CHECK(to_text(h.concl_active[1]) == "sig, G2 => P2");
  REQUIRE(h.premisses.size() == 1);
  CHECK(to_text(h.premisses[0]) == "sig, G1 => P1");
  CHECK(h.linkage == std::vector<int>{0});
}

TEST_CASE("a 1-top system with a premiss-free top gives a 0-premiss rule") {
  TwoSystem s;
  s.name = "Sys_once";
  s.bottom_name = "once_B";
  s.mvars = {{"Sig", MetavarKind::Multiset}};
  TopRule t;
  t.name = "once1";
  t.concl.ante.push_back(MsetVar{"Sig"});
  s.tops.push_back(t);
  HypRuleSchema h = sys_to_hyp(s);
  CHECK(h.premisses.empty());
  REQUIRE(h.concl_active.size() == 1);
  CHECK(to_text(h.concl_active[0]) == "Sig =>");
}

TEST_CASE("(com) translates to Sys(com) of Example 3.2") {
  Calculus c = load("godel.cal");
  TwoSystem s = hyp_to_sys(c.hyp_rules.at("com"));
  REQUIRE(s.tops.size() == 2);
  CHECK(to_text(s.tops[0].premisses[0]) == "Phi, G1 => P1");
  CHECK(to_text(s.tops[0].concl) == "Psi, G1 => P1");
  CHECK(to_text(s.tops[1].premisses[0]) == "Psi, G2 => P2");
  CHECK(to_text(s.tops[1].concl) == "Phi, G2 => P2");
  CHECK(s.shared == std::set<std::string>{"Phi", "Psi"});
}

TEST_CASE("(lq) translates per the 5.1 display: one premiss-free top") {
  Calculus c = load("lq.cal");
  TwoSystem s = hyp_to_sys(c.hyp_rules.at("lq"));
  REQUIRE(s.tops.size() == 2);
  CHECK(s.tops[0].premisses.empty());
  CHECK(to_text(s.tops[0].concl) == "Sig =>");
  REQUIRE(s.tops[1].premisses.size() == 1);
  CHECK(to_text(s.tops[1].premisses[0]) == "Sig, Sig2 =>");
  CHECK(to_text(s.tops[1].concl) == "Sig2 =>");
  CHECK(s.shared == std::set<std::string>{"Sig", "Sig2"});
}

TEST_CASE("a one-component one-premiss rule gives a 1-top system") {
  HypRuleSchema h;
  h.name = "iwlike";
  h.mvars = {{"ph", MetavarKind::Formula},
             {"G", MetavarKind::Multiset},
             {"P", MetavarKind::Succedent}};
  SequentPattern prem, concl;
  prem.ante.push_back(MsetVar{"G"});
  prem.succ = SuccVar{"P"};
  concl.ante.push_back(FPat::mvar("ph"));
  concl.ante.push_back(MsetVar{"G"});
  concl.succ = SuccVar{"P"};
  h.premisses = {prem};
  h.concl_active = {concl};
  h.linkage = {0};
  TwoSystem s = hyp_to_sys(h);
  CHECK(s.tops.size() == 1);
  CHECK(s.tops[0].premisses.size() == 1);
  CHECK(s.shared == std::set<std::string>{"ph"});
}

TEST_CASE("round trips on the paper's rules and systems") {
  CHECK(roundtrip_check(load("comstar_sys.cal").systems.at("Sys_comstar")));
  CHECK(roundtrip_check(load("godel.cal").hyp_rules.at("com")));
  CHECK(roundtrip_check(load("godel.cal").hyp_rules.at("lin")));
  CHECK(roundtrip_check(load("lem.cal").hyp_rules.at("lem")));
  CHECK(roundtrip_check(load("lq.cal").hyp_rules.at("lq")));
  CHECK(roundtrip_check(load("bc.cal").hyp_rules.at("bc1")));
  CHECK(roundtrip_check(load("bc.cal").hyp_rules.at("bc2")));
  CHECK(roundtrip_check(load("godel_sys.cal").systems.at("Sys_com")));
  CHECK(roundtrip_check(load("lem_sys.cal").systems.at("Sys_lem")));
  CHECK(roundtrip_check(load("lq_sys.cal").systems.at("Sys_lq")));
}

namespace {

// Random valid schema generator: <= 3 components, <= 2 premisses per group.
HypRuleSchema random_schema(std::mt19937_64& rng) {
  HypRuleSchema h;
  h.name = "rnd";
  int k = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < k; i++) {
    std::string gi = "G" + std::to_string(i + 1);
    std::string pi = "P" + std::to_string(i + 1);
    h.mvars[gi] = MetavarKind::Multiset;
    h.mvars[pi] = MetavarKind::Succedent;
    SequentPattern concl;
    int nsig = static_cast<int>(rng() % 3);
    for (int j = 0; j < nsig; j++) {
      std::string sv = "s" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      h.mvars[sv] = MetavarKind::Formula;
      concl.ante.push_back(FPat::mvar(sv));
    }
    concl.ante.push_back(MsetVar{gi});
    concl.succ = SuccVar{pi};
    h.concl_active.push_back(concl);
  }
  // Premisses: each linked to a component, mentioning that component's
  // context and one formula variable (shared across groups when possible).
  std::vector<std::string> fvars;
  for (const auto& [n, kind] : h.mvars)
    if (kind == MetavarKind::Formula) fvars.push_back(n);
  for (int i = 0; i < k; i++) {
    int m = static_cast<int>(rng() % 3);
    for (int j = 0; j < m; j++) {
      SequentPattern prem;
      if (!fvars.empty() && rng() % 2 == 0)
        prem.ante.push_back(FPat::mvar(fvars[rng() % fvars.size()]));
      prem.ante.push_back(MsetVar{"G" + std::to_string(i + 1)});
      prem.succ = SuccVar{"P" + std::to_string(i + 1)};
      h.premisses.push_back(prem);
      h.linkage.push_back(i);
    }
  }
  return h;
}

}  // namespace

TEST_CASE("round trip holds on random schemas (property)") {
  std::mt19937_64 rng(2024);
  int done = 0;
  for (int i = 0; i < 200 && done < 100; i++) {
    HypRuleSchema h = random_schema(rng);
    if (!validate_schema(h).ok()) continue;
    done++;
    CAPTURE(i);
    CHECK(roundtrip_check(h));
    // Arity and metavariable preservation.
    TwoSystem s = hyp_to_sys(h);
    CHECK(s.tops.size() == h.concl_active.size());
    std::size_t total = 0;
    for (std::size_t t = 0; t < s.tops.size(); t++) {
      CHECK(s.tops[t].premisses.size() ==
            h.group(static_cast<int>(t)).size());
      total += s.tops[t].premisses.size();
    }
    CHECK(total == h.premisses.size());
    HypRuleSchema back = sys_to_hyp(s);
    CHECK(schema_mvars_used(back) == schema_mvars_used(h));
  }
  CHECK(done == 100);
}
