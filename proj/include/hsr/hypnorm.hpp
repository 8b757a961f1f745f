#ifndef HSR_HYPNORM_HPP
#define HSR_HYPNORM_HPP

#include "hsr/derivation.hpp"

namespace hsr {

struct NotAnEC : std::runtime_error {
  explicit NotAnEC(int id)
      : std::runtime_error("node " + std::to_string(id) +
                           " is not an (EC) application") {}
};
struct IndexOutOfRange : std::runtime_error {
  explicit IndexOutOfRange(const std::string& m) : std::runtime_error(m) {}
};
struct NotStructured : std::runtime_error {
  explicit NotStructured(const std::string& m) : std::runtime_error(m) {}
};

// Number of non-(EC) rule applications between the given (EC) node and the
// root, root included.
int ec_rank(const Derivation& d, int node_id);

// One rule application (r) reapplied through the L_d sets: base context
// G-plus (the fixed components), the rule's active conclusion components H,
// per-premiss active components C_1..C_n, and the copy counts of Lemma
// "downwards". Fragments use only (r); leaves are open nodes concluding
// members of L_d.
struct LdIndex {
  std::string rule;
  Substitution subst;
  std::vector<Sequent> concl_active;  // H
  std::vector<Sequent> prem_active;   // C_1..C_n, one per premiss
  std::vector<Sequent> base_context;  // G-plus components
  int c = 0;
  int d = 0;
  int e = 0;
};

inline const std::string open_rule = "open";

// One derivation fragment per target (a vector x' with sum = d - e).
std::vector<Derivation> derive_Ld(const LdIndex& idx,
                                  const std::vector<std::vector<int>>& targets);

// Pushes every (EC) into one queue at the root (all ec-ranks 0).
// `max_nodes` bounds the combinatorial growth of the L_d construction.
Derivation reduce_ec(Derivation d, const Calculus& c,
                     std::size_t max_nodes = 500000);

// Restructures (EW) applications into the blocks of the structured form.
// Precondition: all (EC) at the root and the end conclusion is a sequent.
Derivation structure_ew(Derivation d, const Calculus& c);

struct StructuredForm {
  bool structured = false;
  Hypersequent hat;  // premiss of the uppermost (EC); root conclusion if none
  std::string reason;
};

StructuredForm is_structured_form(const Derivation& d, const Calculus& c);

}  // namespace hsr

#endif
