#ifndef HSR_FORMULA_HPP
#define HSR_FORMULA_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hsr {

// Propositional intuitionistic formulas. Negation is not a constructor:
// ~f is stored as (f -> bot) and printed back with the ~ sugar.
enum class Conn { Atom, Bot, Top, And, Or, Imp };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
  Conn kind;
  std::string name;     // Atom only
  FormulaPtr lhs, rhs;  // And/Or/Imp only

  static FormulaPtr atom(std::string n);
  static FormulaPtr bot();
  static FormulaPtr top();
  static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr imp(FormulaPtr l, FormulaPtr r);
  static FormulaPtr neg(FormulaPtr f) { return imp(std::move(f), bot()); }

private:
  Formula(Conn k, std::string n, FormulaPtr l, FormulaPtr r)
      : kind(k), name(std::move(n)), lhs(std::move(l)), rhs(std::move(r)) {}
};

// Total structural order; used for canonical multiset storage.
int formula_cmp(const Formula& a, const Formula& b);
inline int formula_cmp(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return 0;
  return formula_cmp(*a, *b);
}
inline bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
  return formula_cmp(a, b) == 0;
}

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(std::string msg, std::size_t off)
      : std::runtime_error(std::move(msg)), offset(off) {}
};

FormulaPtr parse_formula(std::string_view text);

std::string to_text(const FormulaPtr& f);
std::string to_latex(const FormulaPtr& f);

}  // namespace hsr

#endif
