#ifndef HSR_SYSNORM_HPP
#define HSR_SYSNORM_HPP

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hsr/derivation.hpp"

namespace hsr {

struct PreconditionViolated : std::runtime_error {
  explicit PreconditionViolated(const std::string& m) : std::runtime_error(m) {}
};
struct UnknownInstance : std::runtime_error {
  explicit UnknownInstance(const std::string& m)
      : std::runtime_error("unknown system instance " + m) {}
};

// Union-find over instance ids; tracks the ~ relation between an instance
// and the copies an e-reduction makes of it.
class InstanceClasses {
public:
  std::string find(const std::string& id) const;
  void unite(const std::string& a, const std::string& b);

private:
  mutable std::map<std::string, std::string> parent_;
};

// Lexicographic measure from the disentanglement proof: number of classes of
// entangled instances, max e-number within the lowest class, count at max.
struct EntanglementMeasure {
  long kappa = 0, mu = 0, nu = 0;
  friend bool operator<(const EntanglementMeasure& a, const EntanglementMeasure& b) {
    return std::tie(a.kappa, a.mu, a.nu) < std::tie(b.kappa, b.mu, b.nu);
  }
  friend bool operator==(const EntanglementMeasure& a, const EntanglementMeasure& b) {
    return std::tie(a.kappa, a.mu, a.nu) == std::tie(b.kappa, b.mu, b.nu);
  }
};

// Pairs of top applications of one instance where one lies on the path of
// the other: (instance, lower node id, upper node id).
std::vector<std::tuple<std::string, int, int>> same_path_violations(const Derivation& d);

// Rewrites nested same-instance top applications away with (IW)/(IC) padding.
Derivation eliminate_same_path(Derivation d, const Calculus& c);

// Unordered pairs of entangled instances (some tops of each above some tops
// of the other).
std::set<std::pair<std::string, std::string>> entangled_pairs(const Derivation& d);

long e_number(const Derivation& d, const std::string& instance);
long e_number(const Derivation& d, const std::string& instance,
              const InstanceClasses& uf);

EntanglementMeasure entanglement_measure(const Derivation& d,
                                         const InstanceClasses& uf);

// One e-reduction step: splits `instance` into two stacked copies. Updates
// `uf` with the copies made. Precondition: the instance is entangled.
Derivation e_reduce(Derivation d, const std::string& instance, InstanceClasses& uf);

// Applies e-reductions (class by class, topmost max-e-number first) until no
// entanglement remains. Asserts the measure strictly decreases per step.
Derivation disentangle(Derivation d, const Calculus& c);

}  // namespace hsr

#endif
