#include "hsr/formula.hpp"

#include <cctype>

namespace hsr {

FormulaPtr Formula::atom(std::string n) {
  if (n.empty()) throw std::invalid_argument("empty atom name");
  return FormulaPtr(new Formula(Conn::Atom, std::move(n), nullptr, nullptr));
}
FormulaPtr Formula::bot() {
  static FormulaPtr b(new Formula(Conn::Bot, "", nullptr, nullptr));
  return b;
}
FormulaPtr Formula::top() {
  static FormulaPtr t(new Formula(Conn::Top, "", nullptr, nullptr));
  return t;
}
FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(Conn::And, "", std::move(l), std::move(r)));
}
FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(Conn::Or, "", std::move(l), std::move(r)));
}
FormulaPtr Formula::imp(FormulaPtr l, FormulaPtr r) {
  return FormulaPtr(new Formula(Conn::Imp, "", std::move(l), std::move(r)));
}

int formula_cmp(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Conn::Atom:
      return a.name.compare(b.name) < 0 ? -1 : (a.name == b.name ? 0 : 1);
    case Conn::Bot:
    case Conn::Top:
      return 0;
    default: {
      int c = formula_cmp(a.lhs, b.lhs);
      if (c != 0) return c;
      return formula_cmp(a.rhs, b.rhs);
    }
  }
}

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

  bool ident_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= s.size() ||
        !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      fail("expected identifier");
    while (pos < s.size() && ident_char(s[pos])) pos++;
    return std::string(s.substr(start, pos - start));
  }

  // f := ident | "bot" | "top" | "~" f | "(" f op f ")"  with op in {&, v, ->}
  FormulaPtr formula() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '~') {
      pos++;
      return Formula::neg(formula());
    }
    if (c == '(') {
      pos++;
      FormulaPtr l = formula();
      skip_ws();
      FormulaPtr out;
      if (pos < s.size() && s[pos] == '&') {
        pos++;
        out = Formula::conj(l, formula());
      } else if (pos < s.size() && s[pos] == 'v' &&
                 (pos + 1 >= s.size() || !ident_char(s[pos + 1]))) {
        pos++;
        out = Formula::disj(l, formula());
      } else if (pos + 1 < s.size() && s[pos] == '-' && s[pos + 1] == '>') {
        pos += 2;
        out = Formula::imp(l, formula());
      } else {
        fail("expected connective '&', 'v' or '->'");
      }
      skip_ws();
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      pos++;
      return out;
    }
    std::string n = ident();
    if (n == "bot") return Formula::bot();
    if (n == "top") return Formula::top();
    if (n == "v") fail("'v' is reserved for disjunction");
    return Formula::atom(std::move(n));
  }
};

bool is_neg(const Formula& f) {
  return f.kind == Conn::Imp && f.rhs->kind == Conn::Bot;
}

void render(const FormulaPtr& f, std::string& out, bool latex) {
  switch (f->kind) {
    case Conn::Atom:
      out += latex ? ("\\mathit{" + f->name + "}") : f->name;
      return;
    case Conn::Bot:
      out += latex ? "\\bot" : "bot";
      return;
    case Conn::Top:
      out += latex ? "\\top" : "top";
      return;
    case Conn::Imp:
      if (is_neg(*f)) {
        out += latex ? "\\neg " : "~";
        render(f->lhs, out, latex);
        return;
      }
      [[fallthrough]];
    default: {
      const char* op = f->kind == Conn::And ? (latex ? " \\wedge " : " & ")
                       : f->kind == Conn::Or ? (latex ? " \\vee " : " v ")
                                             : (latex ? " \\rightarrow " : " -> ");
      out += '(';
      render(f->lhs, out, latex);
      out += op;
      render(f->rhs, out, latex);
      out += ')';
    }
  }
}

}  // namespace

FormulaPtr parse_formula(std::string_view text) {
  Parser p{text};
  FormulaPtr f = p.formula();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after formula");
  return f;
}

std::string to_text(const FormulaPtr& f) {
  std::string out;
  render(f, out, false);
  return out;
}

std::string to_latex(const FormulaPtr& f) {
  std::string out;
  render(f, out, true);
  return out;
}

}  // namespace hsr
