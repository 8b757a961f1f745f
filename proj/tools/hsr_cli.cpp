// Command line front end: checking, rule and derivation translation,
// normal forms, natural deduction, classification, proof search, rendering.

#include <CLI11.hpp>
#include <iostream>

#include "hsr/embed.hpp"
#include "hsr/hypnorm.hpp"
#include "hsr/io.hpp"
#include "hsr/natded.hpp"
#include "hsr/prover.hpp"
#include "hsr/sysnorm.hpp"
#include "hsr/translate_rules.hpp"

using namespace hsr;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kParseError = 2;
constexpr int kNotProved = 3;
constexpr int kInternal = 4;

int report_outcome(const CheckReport& rep) {
  for (const auto& w : rep.warnings)
    std::cerr << "warning: node " << w.node_id << " [" << w.constraint << "] "
              << w.message << "\n";
  if (rep.ok()) {
    std::cout << "ok\n";
    return kOk;
  }
  std::cerr << rep.summary() << "\n";
  return kCheckFailure;
}

CheckReport check_for_base(const Derivation& d, const Calculus& c) {
  return c.base == BaseCalculus::LJ ? check_sys(d, c) : check_hyp(d, c);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hsr: hypersequent calculi, 2-systems of rules and their embeddings"};
  app.require_subcommand(1);

  std::string calc_path, in_path, out_path, rule_name, to, form, format = "text";
  int depth = 8;
  int max_components = 3;

  auto* check = app.add_subcommand("check", "check a derivation file");
  check->add_option("derivation", in_path)->required();
  check->add_option("--calc", calc_path)->required();

  auto* trule = app.add_subcommand("translate-rule", "translate a rule or 2-system");
  trule->add_option("--to", to)->required()->check(CLI::IsMember({"hyp", "sys"}));
  trule->add_option("--calc", calc_path)->required();
  trule->add_option("--rule", rule_name)->required();
  trule->add_option("-o,--out", out_path);

  auto* tderiv = app.add_subcommand("translate-deriv", "translate a derivation");
  tderiv->add_option("derivation", in_path)->required();
  tderiv->add_option("--to", to)->required()->check(CLI::IsMember({"hyp", "sys"}));
  tderiv->add_option("--calc", calc_path)->required();
  tderiv->add_option("-o,--out", out_path);

  auto* norm = app.add_subcommand("normalize", "normal forms of derivations");
  norm->add_option("derivation", in_path)->required();
  norm->add_option("--form", form)
      ->required()
      ->check(CLI::IsMember({"structured", "disentangled", "no-same-path"}));
  norm->add_option("--calc", calc_path)->required();
  norm->add_option("-o,--out", out_path);

  auto* nd = app.add_subcommand("nd", "natural deduction commands");
  nd->require_subcommand(1);
  auto* ndgen = nd->add_subcommand("gen", "rule, axiom and axiom derivation");
  ndgen->add_option("--calc", calc_path)->required();
  ndgen->add_option("--rule", rule_name)->required();
  ndgen->add_option("-o,--out", out_path);
  auto* ndcheck = nd->add_subcommand("check", "check an nd derivation file");
  ndcheck->add_option("derivation", in_path)->required();
  ndcheck->add_option("--calc", calc_path)->required();

  std::string formula_text;
  auto* cls = app.add_subcommand("classify", "polarity classes of a formula");
  cls->add_option("formula", formula_text)->required();

  std::string goal_text;
  auto* prv = app.add_subcommand("prove", "bounded backward proof search");
  prv->add_option("goal", goal_text)->required();
  prv->add_option("--calc", calc_path)->required();
  prv->add_option("--depth", depth);
  prv->add_option("--max-components", max_components);
  prv->add_option("-o,--out", out_path);

  auto* rnd = app.add_subcommand("render", "render a derivation file");
  rnd->add_option("derivation", in_path)->required();
  rnd->add_option("--calc", calc_path)->required();
  rnd->add_option("--format", format)->check(CLI::IsMember({"text", "latex"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      Calculus c = load_calculus(calc_path);
      Derivation d = load_derivation(in_path, c);
      return report_outcome(check_for_base(d, c));
    }

    if (*trule) {
      Calculus c = load_calculus(calc_path);
      if (to == "hyp") {
        auto it = c.systems.find(rule_name);
        if (it == c.systems.end()) {
          std::cerr << "no 2-system named " << rule_name << "\n";
          return kParseError;
        }
        emit(out_path, to_text(sys_to_hyp(it->second)));
      } else {
        auto it = c.hyp_rules.find(rule_name);
        if (it == c.hyp_rules.end()) {
          std::cerr << "no rule named " << rule_name << "\n";
          return kParseError;
        }
        emit(out_path, to_text(hyp_to_sys(it->second)));
      }
      return kOk;
    }

    if (*tderiv) {
      Calculus c = load_calculus(calc_path);
      Derivation d = load_derivation(in_path, c);
      if (to == "hyp") {
        Derivation out = translate_s2h(d, c);
        Calculus hc = hyp_counterpart(c);
        CheckReport rep = check_hyp(out, hc);
        if (!rep.ok()) {
          std::cerr << "internal: translated derivation fails check_hyp\n"
                    << rep.summary() << "\n";
          return kInternal;
        }
        emit(out_path, to_text(out));
      } else {
        Derivation out = translate_h2s(d, c);
        Calculus sc = sys_counterpart(c);
        CheckReport rep = check_sys(out, sc);
        if (!rep.ok()) {
          std::cerr << "internal: translated derivation fails check_sys\n"
                    << rep.summary() << "\n";
          return kInternal;
        }
        emit(out_path, to_text(out));
      }
      return kOk;
    }

    if (*norm) {
      Calculus c = load_calculus(calc_path);
      Derivation d = load_derivation(in_path, c);
      Derivation out;
      if (form == "no-same-path") {
        out = eliminate_same_path(std::move(d), c);
      } else if (form == "disentangled") {
        out = eliminate_same_path(std::move(d), c);
        out = disentangle(std::move(out), c);
      } else {
        out = reduce_ec(std::move(d), c);
        out = structure_ew(std::move(out), c);
      }
      emit(out_path, to_text(out));
      return kOk;
    }

    if (*ndgen) {
      Calculus c = load_calculus(calc_path);
      auto it = c.hyp_rules.find(rule_name);
      if (it == c.hyp_rules.end()) {
        std::cerr << "no rule named " << rule_name << "\n";
        return kParseError;
      }
      NDRule r = hr_to_nd(it->second);
      NDDerivation ax = derive_axiom(r);
      std::string out = to_text(r);
      out += "axiom: " + to_text(associated_axiom(r)) + "\n";
      out += "# derivation of the associated axiom in NJ + " + r.name + "\n";
      out += to_text(ax);
      emit(out_path, out);
      Calculus nj;
      nj.base = BaseCalculus::NJ;
      nj.nd_rules[r.name] = std::make_shared<NDRule>(r);
      CheckReport rep = check_nd(ax, nj);
      if (!rep.ok()) {
        std::cerr << "internal: generated derivation fails check_nd\n"
                  << rep.summary() << "\n";
        return kInternal;
      }
      return kOk;
    }

    if (*ndcheck) {
      Calculus c = load_calculus(calc_path);
      NDDerivation d = load_nd_derivation(in_path);
      return report_outcome(check_nd(d, c));
    }

    if (*cls) {
      FormulaPtr f = parse_formula(formula_text);
      PolarityClass pc = classify(f);
      std::cout << "formula: " << to_text(f) << "\n";
      std::cout << "minimal P-level: " << pc.p_level << "\n";
      std::cout << "minimal N-level: " << pc.n_level << "\n";
      std::cout << "in P3: " << (in_p(f, 3) ? "yes" : "no") << "\n";
      return kOk;
    }

    if (*prv) {
      Calculus c = load_calculus(calc_path);
      Hypersequent goal = parse_hypersequent(goal_text);
      SearchConfig cfg;
      cfg.max_depth = depth;
      cfg.max_components = max_components;
      ProveResult res = prove(goal, c, cfg);
      if (res.proved()) {
        CheckReport rep = check_hyp(*res.derivation, c);
        if (!rep.ok()) {
          std::cerr << "internal: proof fails check_hyp\n" << rep.summary() << "\n";
          return kInternal;
        }
        std::cout << "proved (" << res.visited << " goals visited)\n";
        if (!out_path.empty()) write_file(out_path, to_text(*res.derivation));
        return kOk;
      }
      std::cout << (res.depth_exceeded ? "not proved at depth "
                                       : "refuted at depth ")
                << depth << " (" << res.visited << " goals visited)\n";
      return kNotProved;
    }

    if (*rnd) {
      Calculus c = load_calculus(calc_path);
      Derivation d = load_derivation(in_path, c);
      emit("", format == "latex" ? to_latex(d) : to_text(d));
      return kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error at offset " << e.offset << ": " << e.what() << "\n";
    return kParseError;
  } catch (const MixedUnresolvable& e) {
    std::cerr << "internal assertion: " << e.what() << "\n";
    return kInternal;
  } catch (const InvalidInput& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return kCheckFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
  return kOk;
}
