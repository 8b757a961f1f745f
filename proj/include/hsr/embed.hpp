#ifndef HSR_EMBED_HPP
#define HSR_EMBED_HPP

#include <map>
#include <string>
#include <vector>

#include "hsr/derivation.hpp"
#include "hsr/hypnorm.hpp"

namespace hsr {

struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& m) : std::runtime_error(m) {}
};
struct MixedUnresolvable : std::runtime_error {
  explicit MixedUnresolvable(const std::string& m) : std::runtime_error(m) {}
};
struct UnknownComponent : std::runtime_error {
  explicit UnknownComponent(const std::string& m) : std::runtime_error(m) {}
};

// The hypersequent calculus paired with an LJ+systems calculus: every
// 2-system contributes its translated rule, and vice versa.
Calculus hyp_counterpart(const Calculus& c);
Calculus sys_counterpart(const Calculus& c);

// --- 2-systems to hypersequents (the marking algorithm) ------------------------

// Tuples of top applications, one per top rule, lexicographic by node id.
std::vector<std::vector<int>> combination_plan(const Derivation& d,
                                               const Calculus& c,
                                               const std::string& instance);

Derivation translate_s2h(const Derivation& d, const Calculus& c);

// --- hypersequents to 2-systems -------------------------------------------------

// Ancestor tree of one component of H-hat (Def. "ancestor tree").
struct AncestorNode {
  int node_id;     // derivation node holding the component
  int comp_index;  // component position in that node's conclusion
  std::string via; // "leaf", "active-linked", "active-hlj", "context"
  std::vector<std::unique_ptr<AncestorNode>> parents;
};

struct AncestorTree {
  std::unique_ptr<AncestorNode> root;
  std::size_t size() const;
};

AncestorTree ancestor_tree(const Derivation& d, const Calculus& c, int hat_comp_id);

// Partial derivations: one per component of H-hat, top rules carrying
// provenance placeholders instead of instance ids.
struct Partials {
  Sequent end;
  std::vector<Derivation> parts;            // by H-hat component position
  std::map<int, std::pair<int, int>> provenance;  // top node id -> (hyp app id, index)
};

Partials partial_derivations(const Derivation& d, const Calculus& c);

Derivation attach_and_split(Partials partials, const Calculus& c);

Derivation translate_h2s(const Derivation& d, const Calculus& c);

}  // namespace hsr

#endif
