#ifndef HSR_DERIVATION_HPP
#define HSR_DERIVATION_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hsr/schema.hpp"

namespace hsr {

// Builtin rule names shared by the HLJ and LJ kernels.
namespace rules {
inline const std::string ax = "ax";
inline const std::string bot_ax = "bot-ax";
inline const std::string and_l = "and-l";
inline const std::string and_r = "and-r";
inline const std::string or_l = "or-l";
inline const std::string or_r = "or-r";
inline const std::string imp_l = "imp-l";
inline const std::string imp_r = "imp-r";
inline const std::string iw = "iw";
inline const std::string ic = "ic";
inline const std::string cut = "cut";
inline const std::string ew = "ew";
inline const std::string ec = "ec";
inline const std::string dummy = "dummy-bottom";
bool is_builtin(const std::string& name);
}  // namespace rules

enum class SysRole { Top, Bottom };

struct SysTag {
  std::string instance;
  SysRole role;
  // Bottom nodes only: 1-based top-rule index served by each premiss.
  // Empty means the identity map 1..k (full-arity bottoms).
  std::vector<int> premiss_tops;
};

struct DNode {
  int id = 0;
  Hypersequent concl;
  std::string rule;
  Substitution subst;
  std::vector<std::unique_ptr<DNode>> premisses;
  std::optional<SysTag> sys;

  std::unique_ptr<DNode> clone() const;  // keeps ids
};

class Derivation {
public:
  Derivation() = default;
  explicit Derivation(std::unique_ptr<DNode> root) : root_(std::move(root)) {}
  Derivation(Derivation&&) = default;
  Derivation& operator=(Derivation&&) = default;

  Derivation copy() const;
  DNode* root() { return root_.get(); }
  const DNode* root() const { return root_.get(); }
  std::unique_ptr<DNode> take_root() { return std::move(root_); }

  // Reassigns ids in preorder, 1..n. Returns node count.
  int renumber();
  std::size_t node_count() const;
  void for_each(const std::function<void(const DNode&)>& fn) const;
  void for_each(const std::function<void(DNode&)>& fn);
  const DNode* find(int id) const;

private:
  std::unique_ptr<DNode> root_;
};

struct NotASequent : std::runtime_error {
  NotASequent() : std::runtime_error("root conclusion is not a single sequent") {}
};

Sequent end_sequent(const Derivation& d);

// Component-level reading of one rule application, computed while checking:
// which conclusion components are active and how each premiss's components
// correspond to the conclusion's.
struct PremissShape {
  std::vector<int> active;       // premiss component indices, in schema order
  std::vector<int> ctx_to_concl; // premiss comp index -> concl comp index (-1 for active)
};

struct NodeShape {
  std::vector<int> active_concl;  // concl component indices, in schema order
  std::vector<PremissShape> premisses;
};

// Partial mode checks top rules structurally with their applicability
// conditions suspended (no instance tags required, dummy bottoms allowed).
enum class KernelMode { Hyp, Seq, Partial };

// Verifies a single node against its rule; on success fills `shape`.
// Appends violations to `rep` otherwise.
bool check_node(const DNode& node, const Calculus& calc, KernelMode mode,
                CheckReport& rep, NodeShape* shape);

CheckReport check_hyp(const Derivation& d, const Calculus& c);
CheckReport check_sys(const Derivation& d, const Calculus& c);
CheckReport check_partial(const Derivation& d, const Calculus& c);

std::unique_ptr<DNode> make_node(int id, Hypersequent concl, std::string rule,
                                 Substitution subst = {});

std::string to_latex(const Derivation& d);

}  // namespace hsr

#endif
