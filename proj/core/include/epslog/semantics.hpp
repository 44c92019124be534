#ifndef EPSLOG_SEMANTICS_HPP
#define EPSLOG_SEMANTICS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epslog/model.hpp"
#include "epslog/syntax.hpp"

namespace epslog {

// Witness tree for q-satisfaction. Nodes hold element indices; every node
// below the leaf level has exactly one child per member element.
struct QTreeNode {
  std::vector<int> elems;                           // sorted ascending
  std::vector<std::pair<int, QTreeNode>> kids;      // keyed by element, sorted
  const QTreeNode* child(int elem) const;
};

struct QTree {
  std::vector<QuantifierKind> levels;
  std::optional<QTreeNode> root;  // empty for height-0 trees
  int height() const { return static_cast<int>(levels.size()); }
};

// A bran: the root-to-leaf choice sequence <(a_i, V_i)>.
struct Bran {
  std::vector<std::pair<int, const QTreeNode*>> steps;
};

// εE-truth per the inductive definition: ∀ holds when the satisfying set has
// measure >= 1 - eps, ∃ and the connectives are classical (on the NNF).
bool eval_e(const FiniteModel& m, const Formula& f, const Rat& eps, const Env& env = {});

// εF-truth, written independently of eval_e: ∃ holds when the satisfying set
// has measure > eps, ∀ and the connectives are classical (on the NNF).
bool eval_f(const FiniteModel& m, const Formula& f, const Rat& eps, const Env& env = {});

// q-truth via the maximal-set recursion: with S = {a : remainder true at a},
// Exists needs S nonempty, Forall needs S = M, Q>=eps needs D(S) >= eps,
// Q>eps needs D(S) > eps.
bool eval_q(const FiniteModel& m, const QSentence& q, const Env& env = {});

// Canonical maximal witness tree (Exists levels pruned to the least
// satisfying element); nullopt iff eval_q is false.
std::optional<QTree> find_qtree(const FiniteModel& m, const QSentence& q);

// Structure + measure conditions for the levels only.
bool check_tree_levels(const FiniteModel& m, const std::vector<QuantifierKind>& levels,
                       const QTree& t);

// Full q-tree check: well-formed shape, level conditions from q's prefix, and
// every bran classically satisfies the matrix. Throws std::invalid_argument
// on malformed trees (child map inconsistent with the node set).
bool verify_qtree(const FiniteModel& m, const QSentence& q, const QTree& t);

// Grafts a copy of `u` under every (leaf node, member element) of `t`.
QTree wedge(const QTree& t, const QTree& u);

// Prefix concatenation + conjunction of matrices, q2's variables renamed
// apart from q1's.
QSentence conjoin_qsentences(const QSentence& q1, const QSentence& q2);

// One node per line: `level k [set: a b c] (via parent-element)`, children
// indented two spaces per level.
std::string print_qtree(const FiniteModel& m, const QTree& t);

}  // namespace epslog

#endif  // EPSLOG_SEMANTICS_HPP
