#ifndef HSR_NATDED_HPP
#define HSR_NATDED_HPP

#include <memory>
#include <string>
#include <vector>

#include "hsr/derivation.hpp"
#include "hsr/schema.hpp"

namespace hsr {

// --- polarity classes P_n / N_n ---------------------------------------------

struct PolarityClass {
  int p_level;  // minimal n with f in P_n
  int n_level;  // minimal n with f in N_n
};

PolarityClass classify(const FormulaPtr& f);
bool in_p(const FormulaPtr& f, int n);
bool in_n(const FormulaPtr& f, int n);

// --- higher-level natural deduction rules ------------------------------------

// One block of a rule of schema shape: hypotheses sigma^i_1..sigma^i_n,
// dischargeable assumptions delta^i_1..delta^i_m (empty = bottom marker,
// m_i = 0), intermediate conclusion phi_i.
struct NDBlock {
  std::vector<FPatPtr> sigmas;
  std::vector<FPatPtr> deltas;
};

struct NDRule {
  std::string name;
  std::vector<NDBlock> blocks;

  int arity() const { return static_cast<int>(blocks.size()); }
};

struct UnsupportedShape : std::runtime_error {
  explicit UnsupportedShape(const std::string& msg)
      : std::runtime_error("unsupported rule shape: " + msg) {}
};

// Translates a hypersequent rule of the restricted shape (single delta per
// premiss, per-component multiset and succedent variables) into its
// higher-level natural deduction rule.
NDRule hr_to_nd(const HypRuleSchema& h);

// The disjunction-of-implications axiom equivalent to the rule; schematic
// variables become atoms carrying the metavariable names.
FormulaPtr associated_axiom(const HypRuleSchema& h);
FormulaPtr associated_axiom(const NDRule& r);

// --- ND derivations -----------------------------------------------------------

namespace nd {
inline const std::string assume = "assume";
inline const std::string and_i = "and-i";
inline const std::string and_e1 = "and-e1";
inline const std::string and_e2 = "and-e2";
inline const std::string or_i1 = "or-i1";
inline const std::string or_i2 = "or-i2";
inline const std::string or_e = "or-e";
inline const std::string imp_i = "imp-i";
inline const std::string imp_e = "imp-e";
inline const std::string bot_e = "bot-e";
inline const std::string top_i = "top-i";
}  // namespace nd

struct NDNode {
  int id = 0;
  FormulaPtr concl;
  std::string rule;  // nd builtins, "<rule>.upper", "<rule>.bottom"
  std::string label;                    // assume only
  std::vector<std::string> discharges;  // imp-i: 1; or-e: 2; upper: m_i
  std::vector<int> uppers;              // bottom only: upper ids in block order
  int block = 0;                        // upper only, 1-based
  std::vector<std::unique_ptr<NDNode>> premisses;

  std::unique_ptr<NDNode> clone() const;
};

class NDDerivation {
public:
  NDDerivation() = default;
  explicit NDDerivation(std::unique_ptr<NDNode> root) : root_(std::move(root)) {}

  NDNode* root() { return root_.get(); }
  const NDNode* root() const { return root_.get(); }
  int renumber();
  void for_each(const std::function<void(const NDNode&)>& fn) const;

private:
  std::unique_ptr<NDNode> root_;
};

CheckReport check_nd(const NDDerivation& d, const Calculus& c);

// Formulas of assumptions left open (not discharged by any application).
std::vector<FormulaPtr> open_assumptions(const NDDerivation& d);

// The schematic derivation of the associated axiom in NJ + r (theorem's
// first direction); passes check_nd against a calculus containing r.
NDDerivation derive_axiom(const NDRule& r);

std::string to_text(const NDDerivation& d);

}  // namespace hsr

#endif
