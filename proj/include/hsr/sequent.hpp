#ifndef HSR_SEQUENT_HPP
#define HSR_SEQUENT_HPP

#include <optional>
#include <vector>

#include "hsr/formula.hpp"

namespace hsr {

// Multiset of formulas kept in canonical (sorted) order.
class FormulaMultiset {
public:
  FormulaMultiset() = default;
  explicit FormulaMultiset(std::vector<FormulaPtr> items);

  void add(FormulaPtr f);
  void add_all(const FormulaMultiset& other);
  // Removes one occurrence; returns false if absent.
  bool remove_one(const FormulaPtr& f);
  bool contains(const FormulaPtr& f) const;
  // Multiset difference this - other; returns nullopt if other is not included.
  std::optional<FormulaMultiset> minus(const FormulaMultiset& other) const;

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<FormulaPtr>& items() const { return items_; }

  friend int cmp(const FormulaMultiset& a, const FormulaMultiset& b);
  friend bool operator==(const FormulaMultiset& a, const FormulaMultiset& b) {
    return cmp(a, b) == 0;
  }

private:
  std::vector<FormulaPtr> items_;
};

struct Sequent {
  FormulaMultiset ante;
  std::optional<FormulaPtr> succ;  // at most one formula

  friend int cmp(const Sequent& a, const Sequent& b);
  friend bool operator==(const Sequent& a, const Sequent& b) { return cmp(a, b) == 0; }
};

// One sequent inside a hypersequent. Ids are stable tokens used for
// ancestor tracking; multiset equality ignores them.
struct Component {
  int id;
  Sequent seq;
};

class Hypersequent {
public:
  Hypersequent() = default;
  explicit Hypersequent(std::vector<Sequent> seqs);

  static Hypersequent single(Sequent s);

  const std::vector<Component>& components() const { return comps_; }
  std::size_t size() const { return comps_.size(); }
  const Sequent& at(std::size_t i) const { return comps_[i].seq; }
  int id_at(std::size_t i) const { return comps_[i].id; }
  int index_of_id(int cid) const;  // -1 if absent

  // Appends a component with a fresh id; returns its id.
  int add(Sequent s);
  void remove_index(std::size_t i);

private:
  std::vector<Component> comps_;
  int next_id_ = 0;
};

bool hyp_equal(const Hypersequent& a, const Hypersequent& b);

Sequent parse_sequent(std::string_view text);
Hypersequent parse_hypersequent(std::string_view text);

std::string to_text(const Sequent& s);
std::string to_text(const Hypersequent& h);
std::string to_latex(const Sequent& s);
std::string to_latex(const Hypersequent& h);

}  // namespace hsr

#endif
