#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hsr/formula.hpp"
#include "hsr/sequent.hpp"

using namespace hsr;

TEST_CASE("parse_formula basic shapes") {
  FormulaPtr f = parse_formula("(a -> b)");
  CHECK(f->kind == Conn::Imp);
  CHECK(f->lhs->kind == Conn::Atom);
  CHECK(f->lhs->name == "a");
  CHECK(f->rhs->name == "b");

  FormulaPtr n = parse_formula("~p");
  CHECK(n->kind == Conn::Imp);
  CHECK(n->lhs->name == "p");
  CHECK(n->rhs->kind == Conn::Bot);

  FormulaPtr g = parse_formula("((a v b) & bot)");
  CHECK(g->kind == Conn::And);
  CHECK(g->lhs->kind == Conn::Or);
  CHECK(g->rhs->kind == Conn::Bot);
}

TEST_CASE("parse_formula rejects malformed input with offsets") {
  CHECK_THROWS_AS(parse_formula("(a -> "), ParseError);
  CHECK_THROWS_AS(parse_formula("(a b)"), ParseError);
  CHECK_THROWS_AS(parse_formula("a)"), ParseError);
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("v"), ParseError);
  try {
    parse_formula("(a & ");
  } catch (const ParseError& e) {
    CHECK(e.offset >= 5);
  }
}

TEST_CASE("negation sugar is preferred when printing") {
  CHECK(to_text(parse_formula("~a")) == "~a");
  CHECK(to_text(Formula::imp(Formula::atom("a"), Formula::bot())) == "~a");
  CHECK(to_text(parse_formula("(a -> bot)")) == "~a");
  CHECK(to_text(parse_formula("~(a & b)")) == "~(a & b)");
}

TEST_CASE("parse_hypersequent shapes and ids") {
  Hypersequent h1 = parse_hypersequent("a => a");
  CHECK(h1.size() == 1);
  CHECK(h1.at(0).ante.size() == 1);
  REQUIRE(h1.at(0).succ.has_value());
  CHECK(to_text(*h1.at(0).succ) == "a");

  Hypersequent h2 = parse_hypersequent("=> p | p =>");
  CHECK(h2.size() == 2);
  CHECK(h2.at(0).ante.empty());
  CHECK(h2.at(0).succ.has_value());
  CHECK(!h2.at(1).succ.has_value());
  CHECK(h2.id_at(0) != h2.id_at(1));

  Hypersequent h3 = parse_hypersequent("bot => ");
  CHECK(h3.at(0).ante.contains(Formula::bot()));
  CHECK(!h3.at(0).succ.has_value());
}

TEST_CASE("hyp_equal is multiset equality over components") {
  CHECK(hyp_equal(parse_hypersequent("a=>b | c=>"), parse_hypersequent("c=> | a=>b")));
  CHECK(!hyp_equal(parse_hypersequent("a,a=>b"), parse_hypersequent("a=>b")));
  // (EC) is a real rule: duplicate components matter.
  CHECK(!hyp_equal(parse_hypersequent("=>p | =>p"), parse_hypersequent("=>p")));
}

namespace {

FormulaPtr random_formula(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 5);
  switch (pick(rng)) {
    case 0: {
      std::uniform_int_distribution<int> a(0, 3);
      const char* names[] = {"p", "q", "r", "s_1"};
      return Formula::atom(names[a(rng)]);
    }
    case 1: return Formula::bot();
    case 2: return Formula::top();
    case 3: return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return Formula::imp(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parse after render is the identity (property)") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; i++) {
    FormulaPtr f = random_formula(rng, 4);
    CHECK(formula_eq(parse_formula(to_text(f)), f));
  }
  for (int i = 0; i < 200; i++) {
    Sequent s;
    int n = static_cast<int>(rng() % 4);
    for (int j = 0; j < n; j++) s.ante.add(random_formula(rng, 3));
    if (rng() % 2) s.succ = random_formula(rng, 3);
    Sequent back = parse_sequent(to_text(s));
    CHECK(cmp(back, s) == 0);

    std::vector<Sequent> comps;
    int m = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < m; j++) {
      Sequent q;
      if (rng() % 2) q.ante.add(random_formula(rng, 2));
      if (rng() % 2) q.succ = random_formula(rng, 2);
      comps.push_back(q);
    }
    Hypersequent h(comps);
    CHECK(hyp_equal(parse_hypersequent(to_text(h)), h));
  }
}

TEST_CASE("hyp_equal invariant under component permutation (property)") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; i++) {
    int m = 1 + static_cast<int>(rng() % 4);
    std::vector<Sequent> comps;
    for (int j = 0; j < m; j++) {
      Sequent q;
      if (rng() % 2) q.ante.add(random_formula(rng, 2));
      if (rng() % 2) q.succ = random_formula(rng, 2);
      comps.push_back(q);
    }
    Hypersequent h(comps);
    std::shuffle(comps.begin(), comps.end(), rng);
    Hypersequent g(comps);
    CHECK(hyp_equal(h, g));
    CHECK(hyp_equal(g, h));
    CHECK(hyp_equal(h, h));
  }
}

TEST_CASE("latex rendering uses Rightarrow and mid") {
  Hypersequent h = parse_hypersequent("a => a | => ~b");
  std::string tex = to_latex(h);
  CHECK(tex.find("\\Rightarrow") != std::string::npos);
  CHECK(tex.find("\\mid") != std::string::npos);
  CHECK(tex.find("\\neg") != std::string::npos);
}
