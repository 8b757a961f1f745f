#include "hsr/io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

namespace hsr {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_depth_aware(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); i++) {
    char c = text[i];
    if (c == '(' || c == '[' || c == '{') depth++;
    if (c == ')' || c == ']' || c == '}') depth--;
    if (c == sep && depth == 0) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(text.substr(start));
  return parts;
}

struct LineReader {
  std::vector<std::string> lines;
  std::size_t next = 0;

  explicit LineReader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  bool done() const { return next >= lines.size(); }
  // Returns the next meaningful line (skips blanks and comments).
  std::optional<std::string_view> peek() {
    for (std::size_t i = next; i < lines.size(); i++) {
      std::string_view t = trim(lines[i]);
      if (t.empty() || t.front() == '#') continue;
      next = i;
      return t;
    }
    next = lines.size();
    return std::nullopt;
  }
  std::string_view pop() {
    auto p = peek();
    if (!p) throw std::runtime_error("unexpected end of file");
    next++;
    return *p;
  }
};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// --- patterns -------------------------------------------------------------------

FPatPtr formula_to_fpat(const FormulaPtr& f,
                        const std::map<std::string, MetavarKind>& kinds) {
  switch (f->kind) {
    case Conn::Atom: {
      auto it = kinds.find(f->name);
      if (it != kinds.end()) {
        if (it->second != MetavarKind::Formula)
          throw std::runtime_error("metavariable " + f->name +
                                   " is not formula-kind inside a formula");
        return FPat::mvar(f->name);
      }
      return FPat::atom(f->name);
    }
    case Conn::Bot: return FPat::bot();
    case Conn::Top: return FPat::top();
    case Conn::And: return FPat::conj(formula_to_fpat(f->lhs, kinds), formula_to_fpat(f->rhs, kinds));
    case Conn::Or: return FPat::disj(formula_to_fpat(f->lhs, kinds), formula_to_fpat(f->rhs, kinds));
    case Conn::Imp: return FPat::imp(formula_to_fpat(f->lhs, kinds), formula_to_fpat(f->rhs, kinds));
  }
  throw std::logic_error("bad formula");
}

SequentPattern parse_pattern(std::string_view text,
                             const std::map<std::string, MetavarKind>& kinds) {
  std::size_t arrow = text.find("=>");
  if (arrow == std::string_view::npos)
    throw std::runtime_error("pattern is missing '=>': " + std::string(text));
  SequentPattern out;
  std::string_view lhs = trim(text.substr(0, arrow));
  if (!lhs.empty()) {
    for (auto part : split_depth_aware(lhs, ',')) {
      std::string item(trim(part));
      auto it = kinds.find(item);
      if (it != kinds.end() && it->second == MetavarKind::Multiset) {
        out.ante.push_back(MsetVar{item});
      } else {
        out.ante.push_back(formula_to_fpat(parse_formula(item), kinds));
      }
    }
  }
  std::string_view rhs = trim(text.substr(arrow + 2));
  if (rhs.empty()) {
    out.succ = SuccEmpty{};
  } else {
    std::string item(rhs);
    auto it = kinds.find(item);
    if (it != kinds.end() && it->second == MetavarKind::Succedent)
      out.succ = SuccVar{item};
    else
      out.succ = formula_to_fpat(parse_formula(item), kinds);
  }
  return out;
}

MetavarKind parse_kind(std::string_view k) {
  if (k == "formula") return MetavarKind::Formula;
  if (k == "multiset") return MetavarKind::Multiset;
  if (k == "succedent") return MetavarKind::Succedent;
  throw std::runtime_error("unknown metavariable kind: " + std::string(k));
}

void parse_mvar_line(std::string_view line, std::map<std::string, MetavarKind>& mvars) {
  // mvar <name>: <kind>
  auto rest = trim(line.substr(4));
  auto colon = rest.find(':');
  if (colon == std::string_view::npos) throw std::runtime_error("mvar line needs ':'");
  std::string name(trim(rest.substr(0, colon)));
  mvars[name] = parse_kind(trim(rest.substr(colon + 1)));
}

HypRuleSchema parse_rule_block(LineReader& in) {
  auto header = in.pop();  // rule <name>
  HypRuleSchema h;
  h.name = std::string(trim(header.substr(4)));
  while (true) {
    auto line = in.pop();
    if (line == "end") break;
    if (starts_with(line, "mvar ")) {
      parse_mvar_line(line, h.mvars);
    } else if (starts_with(line, "premiss ")) {
      h.premisses.push_back(parse_pattern(trim(line.substr(8)), h.mvars));
    } else if (starts_with(line, "conclusion active:")) {
      h.concl_active.push_back(parse_pattern(trim(line.substr(18)), h.mvars));
    } else if (starts_with(line, "link ")) {
      auto rest = trim(line.substr(5));
      auto arrow = rest.find("->");
      if (arrow == std::string_view::npos)
        throw std::runtime_error("link line needs '->'");
      int p = std::stoi(std::string(trim(rest.substr(0, arrow))));
      int c = std::stoi(std::string(trim(rest.substr(arrow + 2))));
      if (static_cast<std::size_t>(p) != h.linkage.size() + 1)
        throw std::runtime_error("link lines must cover premisses 1..n in order");
      h.linkage.push_back(c - 1);
    } else {
      throw std::runtime_error("unexpected line in rule block: " + std::string(line));
    }
  }
  if (h.linkage.empty() && h.premisses.size() == 1 && h.concl_active.size() == 1)
    h.linkage.push_back(0);  // the only possible linkage
  auto rep = validate_schema(h);
  if (!rep.ok())
    throw std::runtime_error("invalid rule " + h.name + ": " + rep.summary());
  return h;
}

TwoSystem parse_system_block(LineReader& in) {
  auto header = in.pop();  // system <name>
  TwoSystem s;
  s.name = std::string(trim(header.substr(7)));
  TopRule* current = nullptr;
  while (true) {
    auto line = in.pop();
    if (line == "end") break;
    if (starts_with(line, "mvar ")) {
      parse_mvar_line(line, s.mvars);
    } else if (starts_with(line, "shared:")) {
      for (auto part : split_depth_aware(trim(line.substr(7)), ','))
        s.shared.insert(std::string(trim(part)));
    } else if (starts_with(line, "bottom:")) {
      s.bottom_name = std::string(trim(line.substr(7)));
    } else if (starts_with(line, "top[")) {
      auto close = line.find("]:");
      if (close == std::string_view::npos)
        throw std::runtime_error("top block header needs 'top[i]: name'");
      TopRule t;
      t.name = std::string(trim(line.substr(close + 2)));
      s.tops.push_back(std::move(t));
      current = &s.tops.back();
    } else if (starts_with(line, "premiss ")) {
      if (!current) throw std::runtime_error("premiss line outside top block");
      current->premisses.push_back(parse_pattern(trim(line.substr(8)), s.mvars));
    } else if (starts_with(line, "conclusion ")) {
      if (!current) throw std::runtime_error("conclusion line outside top block");
      current->concl = parse_pattern(trim(line.substr(11)), s.mvars);
    } else {
      throw std::runtime_error("unexpected line in system block: " + std::string(line));
    }
  }
  if (s.bottom_name.empty()) s.bottom_name = s.name + "_B";
  auto rep = validate_system(s);
  if (!rep.ok())
    throw std::runtime_error("invalid system " + s.name + ": " + rep.summary());
  return s;
}

}  // namespace

Calculus parse_calculus(const std::string& text) {
  LineReader in(text);
  Calculus c;
  std::vector<std::string> nd_requests;
  while (in.peek()) {
    auto line = *in.peek();
    if (starts_with(line, "calculus ")) {
      c.name = std::string(trim(line.substr(9)));
      in.pop();
    } else if (starts_with(line, "base ")) {
      auto b = trim(line.substr(5));
      if (b == "LJ") c.base = BaseCalculus::LJ;
      else if (b == "HLJ") c.base = BaseCalculus::HLJ;
      else if (b == "NJ") c.base = BaseCalculus::NJ;
      else throw std::runtime_error("unknown base calculus " + std::string(b));
      in.pop();
    } else if (starts_with(line, "rule ")) {
      HypRuleSchema h = parse_rule_block(in);
      c.hyp_rules[h.name] = std::move(h);
    } else if (starts_with(line, "system ")) {
      TwoSystem s = parse_system_block(in);
      c.systems[s.name] = std::move(s);
    } else if (starts_with(line, "ndrule ")) {
      nd_requests.push_back(std::string(trim(line.substr(7))));
      in.pop();
    } else {
      throw std::runtime_error("unexpected line: " + std::string(line));
    }
  }
  for (const auto& name : nd_requests) {
    auto it = c.hyp_rules.find(name);
    if (it == c.hyp_rules.end())
      throw std::runtime_error("ndrule refers to unknown rule " + name);
    c.nd_rules[name] = std::make_shared<NDRule>(hr_to_nd(it->second));
  }
  return c;
}

Calculus load_calculus(const std::string& path) {
  return parse_calculus(read_file(path));
}

// --- kind tables -----------------------------------------------------------------

std::map<std::string, MetavarKind> kind_table(const std::string& rule,
                                              const Calculus& c) {
  using MK = MetavarKind;
  std::map<std::string, MK> t;
  auto F = MK::Formula, M = MK::Multiset, S = MK::Succedent;
  if (rule == rules::ax) t = {{"phi", F}};
  else if (rule == rules::bot_ax) t = {{"Pi", S}};
  else if (rule == rules::and_l || rule == rules::or_l || rule == rules::imp_l)
    t = {{"phi", F}, {"psi", F}, {"Gamma", M}, {"Pi", S}};
  else if (rule == rules::and_r || rule == rules::imp_r)
    t = {{"phi", F}, {"psi", F}, {"Gamma", M}};
  else if (rule == rules::or_r)
    t = {{"phi1", F}, {"phi2", F}, {"Gamma", M}};
  else if (rule == rules::iw || rule == rules::ic)
    t = {{"phi", F}, {"Gamma", M}, {"Pi", S}};
  else if (rule == rules::cut)
    t = {{"phi", F}, {"Gamma", M}, {"Gamma2", M}, {"Pi", S}};
  else if (rule == rules::ew || rule == rules::ec)
    t = {{"Gamma", M}, {"Pi", S}};
  else if (rule == rules::dummy)
    t = {};
  else if (c.hyp_rules.count(rule)) {
    t = c.hyp_rules.at(rule).mvars;
  } else if (const TwoSystem* sys = c.system_of_rule(rule)) {
    if (rule == sys->bottom_name)
      t = {{"Gamma", M}, {"Pi", S}};
    else
      t = sys->mvars;
  } else {
    throw std::runtime_error("unknown rule " + rule);
  }
  return t;
}

// --- derivations -----------------------------------------------------------------

namespace {

struct RawLine {
  int indent;
  std::string body;
  std::size_t lineno;
};

std::vector<RawLine> raw_lines(const std::string& text) {
  std::vector<RawLine> out;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    no++;
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    int indent = 0;
    while (indent < static_cast<int>(line.size()) && line[static_cast<std::size_t>(indent)] == ' ')
      indent++;
    out.push_back(RawLine{indent, std::string(t), no});
  }
  return out;
}

struct NodeFields {
  std::string head;
  std::map<std::string, std::string> fields;
};

NodeFields parse_fields(const std::string& body, std::size_t lineno) {
  NodeFields out;
  auto parts = split_depth_aware(body, ';');
  out.head = std::string(trim(parts[0]));
  for (std::size_t i = 1; i < parts.size(); i++) {
    auto kv = trim(parts[i]);
    auto eq = kv.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": field without '=': " + std::string(kv));
    out.fields[std::string(trim(kv.substr(0, eq)))] =
        std::string(trim(kv.substr(eq + 1)));
  }
  return out;
}

Substitution parse_subst(const std::string& text,
                         const std::map<std::string, MetavarKind>& kinds,
                         std::size_t lineno) {
  Substitution s;
  std::string_view body = trim(text);
  if (body.size() < 2 || body.front() != '{' || body.back() != '}')
    throw std::runtime_error("line " + std::to_string(lineno) +
                             ": subst must be {...}");
  body = trim(body.substr(1, body.size() - 2));
  if (body.empty()) return s;
  for (auto part : split_depth_aware(body, ',')) {
    auto kv = trim(part);
    auto eq = kv.find('=');
    if (eq == std::string_view::npos)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": subst binding without '='");
    std::string name(trim(kv.substr(0, eq)));
    std::string_view val = trim(kv.substr(eq + 1));
    auto it = kinds.find(name);
    if (it == kinds.end())
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": unknown metavariable " + name);
    switch (it->second) {
      case MetavarKind::Formula:
        s.bind_formula(name, parse_formula(val));
        break;
      case MetavarKind::Multiset: {
        if (val.size() < 2 || val.front() != '[' || val.back() != ']')
          throw std::runtime_error("line " + std::to_string(lineno) +
                                   ": multiset value must be [...]");
        FormulaMultiset m;
        auto inner = trim(val.substr(1, val.size() - 2));
        if (!inner.empty())
          for (auto f : split_depth_aware(inner, ','))
            m.add(parse_formula(trim(f)));
        s.bind_multiset(name, std::move(m));
        break;
      }
      case MetavarKind::Succedent:
        if (val == "-")
          s.bind_succedent(name, std::nullopt);
        else
          s.bind_succedent(name, parse_formula(val));
        break;
    }
  }
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto part : split_depth_aware(text, ','))
    out.push_back(std::string(trim(part)));
  return out;
}

}  // namespace

Derivation parse_derivation(const std::string& text, const Calculus& c) {
  auto lines = raw_lines(text);
  if (lines.empty()) throw std::runtime_error("empty derivation file");

  int next_id = 1;
  std::function<std::unique_ptr<DNode>(std::size_t&, int)> build =
      [&](std::size_t& i, int indent) -> std::unique_ptr<DNode> {
    const RawLine& ln = lines[i];
    NodeFields nf = parse_fields(ln.body, ln.lineno);
    auto node = std::make_unique<DNode>();
    node->id = next_id++;
    node->concl = parse_hypersequent(nf.head);
    auto rit = nf.fields.find("rule");
    if (rit == nf.fields.end())
      throw std::runtime_error("line " + std::to_string(ln.lineno) +
                               ": missing rule field");
    node->rule = rit->second;
    auto kinds = kind_table(node->rule, c);
    if (auto sit = nf.fields.find("subst"); sit != nf.fields.end())
      node->subst = parse_subst(sit->second, kinds, ln.lineno);
    if (auto yit = nf.fields.find("sys"); yit != nf.fields.end()) {
      auto colon = yit->second.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("line " + std::to_string(ln.lineno) +
                                 ": sys field must be <id>:<role>");
      SysTag tag;
      tag.instance = yit->second.substr(0, colon);
      std::string role = yit->second.substr(colon + 1);
      if (role == "top") tag.role = SysRole::Top;
      else if (role == "bottom") tag.role = SysRole::Bottom;
      else
        throw std::runtime_error("line " + std::to_string(ln.lineno) +
                                 ": sys role must be top or bottom");
      if (auto xit = nf.fields.find("idx"); xit != nf.fields.end())
        for (const auto& v : split_list(xit->second))
          tag.premiss_tops.push_back(std::stoi(v));
      node->sys = std::move(tag);
    }
    i++;
    while (i < lines.size() && lines[i].indent > indent) {
      if (i < lines.size() && lines[i].indent <= indent) break;
      int child_indent = lines[i].indent;
      node->premisses.push_back(build(i, child_indent));
    }
    return node;
  };

  std::size_t i = 0;
  auto root = build(i, lines[0].indent);
  if (i != lines.size())
    throw std::runtime_error("line " + std::to_string(lines[i].lineno) +
                             ": multiple roots in derivation file");
  return Derivation(std::move(root));
}

Derivation load_derivation(const std::string& path, const Calculus& c) {
  return parse_derivation(read_file(path), c);
}

namespace {

std::string subst_to_text(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : s.entries()) {
    if (!first) out += ", ";
    first = false;
    out += name + "=";
    if (const auto* f = std::get_if<FormulaPtr>(&value)) {
      out += to_text(*f);
    } else if (const auto* m = std::get_if<FormulaMultiset>(&value)) {
      out += "[";
      bool f2 = true;
      for (const auto& g : m->items()) {
        if (!f2) out += ", ";
        f2 = false;
        out += to_text(g);
      }
      out += "]";
    } else {
      const auto& succ = std::get<std::optional<FormulaPtr>>(value);
      out += succ ? to_text(*succ) : "-";
    }
  }
  out += "}";
  return out;
}

void node_to_text(const DNode& n, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += to_text(n.concl) + " ; rule=" + n.rule;
  if (!n.subst.entries().empty()) out += " ; subst=" + subst_to_text(n.subst);
  if (n.sys) {
    out += " ; sys=" + n.sys->instance + ":" +
           (n.sys->role == SysRole::Top ? "top" : "bottom");
    if (!n.sys->premiss_tops.empty()) {
      out += " ; idx=";
      for (std::size_t i = 0; i < n.sys->premiss_tops.size(); i++) {
        if (i) out += ",";
        out += std::to_string(n.sys->premiss_tops[i]);
      }
    }
  }
  out += "\n";
  for (const auto& p : n.premisses) node_to_text(*p, depth + 1, out);
}

}  // namespace

std::string to_text(const Derivation& d) {
  std::string out;
  if (d.root()) node_to_text(*d.root(), 0, out);
  return out;
}

// --- nd derivations ---------------------------------------------------------------

NDDerivation parse_nd_derivation(const std::string& text) {
  auto lines = raw_lines(text);
  if (lines.empty()) throw std::runtime_error("empty nd derivation file");

  int next_id = 1;
  std::map<std::string, int> tags;
  std::vector<std::pair<NDNode*, std::vector<std::string>>> pending_uppers;

  std::function<std::unique_ptr<NDNode>(std::size_t&, int)> build =
      [&](std::size_t& i, int indent) -> std::unique_ptr<NDNode> {
    const RawLine& ln = lines[i];
    NodeFields nf = parse_fields(ln.body, ln.lineno);
    auto node = std::make_unique<NDNode>();
    node->id = next_id++;
    node->concl = parse_formula(nf.head);
    auto rit = nf.fields.find("rule");
    if (rit == nf.fields.end())
      throw std::runtime_error("line " + std::to_string(ln.lineno) +
                               ": missing rule field");
    node->rule = rit->second;
    if (auto it = nf.fields.find("id"); it != nf.fields.end())
      tags[it->second] = node->id;
    if (auto it = nf.fields.find("label"); it != nf.fields.end())
      node->label = it->second;
    if (auto it = nf.fields.find("discharges"); it != nf.fields.end())
      node->discharges = split_list(it->second);
    if (auto it = nf.fields.find("block"); it != nf.fields.end())
      node->block = std::stoi(it->second);
    if (auto it = nf.fields.find("uppers"); it != nf.fields.end())
      pending_uppers.emplace_back(node.get(), split_list(it->second));
    i++;
    while (i < lines.size() && lines[i].indent > indent)
      node->premisses.push_back(build(i, lines[i].indent));
    return node;
  };

  std::size_t i = 0;
  auto root = build(i, lines[0].indent);
  if (i != lines.size())
    throw std::runtime_error("line " + std::to_string(lines[i].lineno) +
                             ": multiple roots in nd derivation file");
  for (auto& [node, refs] : pending_uppers) {
    for (const auto& r : refs) {
      auto it = tags.find(r);
      if (it == tags.end())
        throw std::runtime_error("uppers reference unknown id tag " + r);
      node->uppers.push_back(it->second);
    }
  }
  return NDDerivation(std::move(root));
}

NDDerivation load_nd_derivation(const std::string& path) {
  return parse_nd_derivation(read_file(path));
}

// --- calculus rendering -------------------------------------------------------------

namespace {
const char* kind_name(MetavarKind k) {
  switch (k) {
    case MetavarKind::Formula: return "formula";
    case MetavarKind::Multiset: return "multiset";
    case MetavarKind::Succedent: return "succedent";
  }
  return "?";
}
}  // namespace

std::string to_text(const HypRuleSchema& h) {
  std::string out = "rule " + h.name + "\n";
  for (const auto& [n, k] : h.mvars)
    out += "  mvar " + n + ": " + kind_name(k) + "\n";
  for (const auto& p : h.premisses) out += "  premiss " + to_text(p) + "\n";
  for (const auto& c : h.concl_active)
    out += "  conclusion active: " + to_text(c) + "\n";
  for (std::size_t p = 0; p < h.linkage.size(); p++)
    out += "  link " + std::to_string(p + 1) + " -> " +
           std::to_string(h.linkage[p] + 1) + "\n";
  out += "end\n";
  return out;
}

std::string to_text(const TwoSystem& s) {
  std::string out = "system " + s.name + "\n";
  for (const auto& [n, k] : s.mvars)
    out += "  mvar " + n + ": " + kind_name(k) + "\n";
  if (!s.shared.empty()) {
    out += "  shared:";
    bool first = true;
    for (const auto& n : s.shared) {
      out += first ? " " : ", ";
      first = false;
      out += n;
    }
    out += "\n";
  }
  out += "  bottom: " + s.bottom_name + "\n";
  for (std::size_t i = 0; i < s.tops.size(); i++) {
    out += "  top[" + std::to_string(i + 1) + "]: " + s.tops[i].name + "\n";
    for (const auto& p : s.tops[i].premisses)
      out += "    premiss " + to_text(p) + "\n";
    out += "    conclusion " + to_text(s.tops[i].concl) + "\n";
  }
  out += "end\n";
  return out;
}

std::string to_text(const NDRule& r) {
  std::string out = "ndrule " + r.name + " with " +
                    std::to_string(r.blocks.size()) + " blocks\n";
  auto fp = [](const FPatPtr& p) {
    SequentPattern tmp;
    tmp.ante.push_back(p);
    std::string s = to_text(tmp);
    return s.substr(0, s.size() - 3);  // strip " =>"
  };
  for (std::size_t i = 0; i < r.blocks.size(); i++) {
    const auto& b = r.blocks[i];
    out += "  block " + std::to_string(i + 1) + ": hypotheses [";
    for (std::size_t j = 0; j < b.sigmas.size(); j++)
      out += (j ? ", " : "") + fp(b.sigmas[j]);
    out += "] discharges [";
    if (b.deltas.empty()) out += "bot";
    for (std::size_t j = 0; j < b.deltas.size(); j++)
      out += (j ? ", " : "") + fp(b.deltas[j]);
    out += "]\n";
  }
  return out;
}

std::string to_text(const Calculus& c) {
  std::string out = "calculus " + (c.name.empty() ? "unnamed" : c.name) + "\n";
  out += std::string("base ") +
         (c.base == BaseCalculus::LJ ? "LJ"
          : c.base == BaseCalculus::HLJ ? "HLJ" : "NJ") +
         "\n\n";
  for (const auto& [_, h] : c.hyp_rules) out += to_text(h) + "\n";
  for (const auto& [_, s] : c.systems) out += to_text(s) + "\n";
  for (const auto& [n, _] : c.nd_rules) out += "ndrule " + n + "\n";
  return out;
}

}  // namespace hsr
