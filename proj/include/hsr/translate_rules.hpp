#ifndef HSR_TRANSLATE_RULES_HPP
#define HSR_TRANSLATE_RULES_HPP

#include "hsr/schema.hpp"

namespace hsr {

struct InvalidSystem : std::runtime_error {
  explicit InvalidSystem(const std::string& m) : std::runtime_error(m) {}
};
struct InvalidSchema : std::runtime_error {
  explicit InvalidSchema(const std::string& m) : std::runtime_error(m) {}
};

// 2-system -> hypersequent rule: conclusion collects the top conclusions,
// premiss group M_i collects top i's premisses, linked to component i.
HypRuleSchema sys_to_hyp(const TwoSystem& s);

// Hypersequent rule -> 2-system: bottom with one premiss per conclusion
// component, top i built from component i and its linked premiss group;
// shared metavariables are those occurring in at least two tops.
TwoSystem hyp_to_sys(const HypRuleSchema& h);

// Translating twice returns the input up to metavariable renaming and
// reordering of conclusion components together with their premiss groups.
bool roundtrip_check(const TwoSystem& s);
bool roundtrip_check(const HypRuleSchema& h);

bool schema_equal_upto(const HypRuleSchema& a, const HypRuleSchema& b);
bool system_equal_upto(const TwoSystem& a, const TwoSystem& b);

}  // namespace hsr

#endif
