#ifndef HSR_PROVER_HPP
#define HSR_PROVER_HPP

#include <cstdint>
#include <optional>

#include "hsr/derivation.hpp"

namespace hsr {

struct SearchConfig {
  int max_depth = 8;
  int max_components = 3;
  bool allow_cut = false;
  std::vector<std::string> rule_order;  // hypersequent rules; empty = sorted
};

struct ProveResult {
  std::optional<Derivation> derivation;
  bool depth_exceeded = false;  // some branch was cut off at the bound
  std::size_t visited = 0;

  bool proved() const { return derivation.has_value(); }
  // Search space exhausted without a proof (no branch hit the bound).
  bool refuted_at_depth() const { return !proved() && !depth_exceeded; }
};

// Backward proof search with loop checking on repeated goals along a branch.
ProveResult prove(const Hypersequent& goal, const Calculus& c,
                  const SearchConfig& cfg);

// Forward-constructed valid derivation, deterministic per seed. Uses the
// base of the calculus: HLJ produces hypersequent derivations, LJ produces
// sequent derivations exercising the calculus' 2-systems.
Derivation random_derivation(const Calculus& c, const SearchConfig& cfg,
                             std::uint64_t seed);

}  // namespace hsr

#endif
