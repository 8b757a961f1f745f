#include "hsr/sequent.hpp"

#include <algorithm>

namespace hsr {

namespace {
bool less_ptr(const FormulaPtr& a, const FormulaPtr& b) {
  return formula_cmp(a, b) < 0;
}
}  // namespace

FormulaMultiset::FormulaMultiset(std::vector<FormulaPtr> items)
    : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end(), less_ptr);
}

void FormulaMultiset::add(FormulaPtr f) {
  auto it = std::lower_bound(items_.begin(), items_.end(), f, less_ptr);
  items_.insert(it, std::move(f));
}

void FormulaMultiset::add_all(const FormulaMultiset& other) {
  for (const auto& f : other.items_) add(f);
}

bool FormulaMultiset::remove_one(const FormulaPtr& f) {
  auto it = std::lower_bound(items_.begin(), items_.end(), f, less_ptr);
  if (it == items_.end() || formula_cmp(*it, f) != 0) return false;
  items_.erase(it);
  return true;
}

bool FormulaMultiset::contains(const FormulaPtr& f) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), f, less_ptr);
  return it != items_.end() && formula_cmp(*it, f) == 0;
}

std::optional<FormulaMultiset> FormulaMultiset::minus(
    const FormulaMultiset& other) const {
  FormulaMultiset out = *this;
  for (const auto& f : other.items_)
    if (!out.remove_one(f)) return std::nullopt;
  return out;
}

int cmp(const FormulaMultiset& a, const FormulaMultiset& b) {
  if (a.items_.size() != b.items_.size())
    return a.items_.size() < b.items_.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.items_.size(); i++) {
    int c = formula_cmp(a.items_[i], b.items_[i]);
    if (c != 0) return c;
  }
  return 0;
}

int cmp(const Sequent& a, const Sequent& b) {
  int c = cmp(a.ante, b.ante);
  if (c != 0) return c;
  if (a.succ.has_value() != b.succ.has_value()) return a.succ.has_value() ? 1 : -1;
  if (!a.succ) return 0;
  return formula_cmp(*a.succ, *b.succ);
}

Hypersequent::Hypersequent(std::vector<Sequent> seqs) {
  for (auto& s : seqs) add(std::move(s));
}

Hypersequent Hypersequent::single(Sequent s) {
  Hypersequent h;
  h.add(std::move(s));
  return h;
}

int Hypersequent::index_of_id(int cid) const {
  for (std::size_t i = 0; i < comps_.size(); i++)
    if (comps_[i].id == cid) return static_cast<int>(i);
  return -1;
}

int Hypersequent::add(Sequent s) {
  int id = next_id_++;
  comps_.push_back(Component{id, std::move(s)});
  return id;
}

void Hypersequent::remove_index(std::size_t i) {
  comps_.erase(comps_.begin() + static_cast<std::ptrdiff_t>(i));
}

bool hyp_equal(const Hypersequent& a, const Hypersequent& b) {
  if (a.size() != b.size()) return false;
  std::vector<const Sequent*> xs, ys;
  for (const auto& c : a.components()) xs.push_back(&c.seq);
  for (const auto& c : b.components()) ys.push_back(&c.seq);
  auto less = [](const Sequent* l, const Sequent* r) { return cmp(*l, *r) < 0; };
  std::sort(xs.begin(), xs.end(), less);
  std::sort(ys.begin(), ys.end(), less);
  for (std::size_t i = 0; i < xs.size(); i++)
    if (cmp(*xs[i], *ys[i]) != 0) return false;
  return true;
}

namespace {

std::vector<std::string_view> split_top(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); i++) {
    char c = text[i];
    if (c == '(') depth++;
    if (c == ')') depth--;
    if (c == sep && depth == 0) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(text.substr(start));
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

}  // namespace

Sequent parse_sequent(std::string_view text) {
  std::size_t arrow = std::string_view::npos;
  int depth = 0;
  for (std::size_t i = 0; i + 1 < text.size(); i++) {
    if (text[i] == '(') depth++;
    if (text[i] == ')') depth--;
    if (depth == 0 && text[i] == '=' && text[i + 1] == '>') {
      arrow = i;
      break;
    }
  }
  if (arrow == std::string_view::npos) throw ParseError("missing '=>'", 0);
  Sequent s;
  std::string_view lhs = trim(text.substr(0, arrow));
  if (!lhs.empty())
    for (auto part : split_top(lhs, ','))
      s.ante.add(parse_formula(trim(part)));
  std::string_view rhs = trim(text.substr(arrow + 2));
  if (!rhs.empty()) s.succ = parse_formula(rhs);
  return s;
}

Hypersequent parse_hypersequent(std::string_view text) {
  Hypersequent h;
  for (auto part : split_top(text, '|')) h.add(parse_sequent(part));
  return h;
}

std::string to_text(const Sequent& s) {
  std::string out;
  bool first = true;
  for (const auto& f : s.ante.items()) {
    if (!first) out += ", ";
    first = false;
    out += to_text(f);
  }
  out += out.empty() ? "=>" : " =>";
  if (s.succ) {
    out += ' ';
    out += to_text(*s.succ);
  }
  return out;
}

std::string to_text(const Hypersequent& h) {
  std::string out;
  bool first = true;
  for (const auto& c : h.components()) {
    if (!first) out += " | ";
    first = false;
    out += to_text(c.seq);
  }
  return out;
}

std::string to_latex(const Sequent& s) {
  std::string out;
  bool first = true;
  for (const auto& f : s.ante.items()) {
    if (!first) out += ", ";
    first = false;
    out += to_latex(f);
  }
  if (!out.empty()) out += ' ';
  out += "\\Rightarrow";
  if (s.succ) {
    out += ' ';
    out += to_latex(*s.succ);
  }
  return out;
}

std::string to_latex(const Hypersequent& h) {
  std::string out;
  bool first = true;
  for (const auto& c : h.components()) {
    if (!first) out += " \\mid ";
    first = false;
    out += to_latex(c.seq);
  }
  return out;
}

}  // namespace hsr
