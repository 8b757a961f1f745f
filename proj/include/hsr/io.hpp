#ifndef HSR_IO_HPP
#define HSR_IO_HPP

#include <string>

#include "hsr/derivation.hpp"
#include "hsr/natded.hpp"
#include "hsr/schema.hpp"

namespace hsr {

// Calculus files (.cal): `calculus <name>`, `base LJ|HLJ|NJ`, then
// `rule ... end`, `system ... end` and `ndrule <hyprule>` blocks.
Calculus parse_calculus(const std::string& text);
Calculus load_calculus(const std::string& path);
std::string to_text(const Calculus& c);
std::string to_text(const HypRuleSchema& h);
std::string to_text(const TwoSystem& s);
std::string to_text(const NDRule& r);

// Derivation files (.drv): one node per line,
//   <hypersequent> ; rule=<name> ; subst={mv=val,...} [; sys=<id>:<role>] [; idx=i,j]
// with premisses indented below their conclusion.
Derivation parse_derivation(const std::string& text, const Calculus& c);
Derivation load_derivation(const std::string& path, const Calculus& c);
std::string to_text(const Derivation& d);

// ND derivation files (.ndd): same layout over formulas,
//   <formula> ; rule=<r> [; id=<tok>] [; label=<tok>] [; discharges=l1,l2]
//   [; uppers=t1,t2] [; block=<i>]
NDDerivation parse_nd_derivation(const std::string& text);
NDDerivation load_nd_derivation(const std::string& path);

// Metavariable kinds for a rule name (builtin, schema, top or bottom).
std::map<std::string, MetavarKind> kind_table(const std::string& rule,
                                              const Calculus& c);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hsr

#endif
