#ifndef EPSLOG_CORPUS_HPP
#define EPSLOG_CORPUS_HPP

#include <string>
#include <vector>

#include "epslog/syntax.hpp"

namespace epslog {

struct CorpusEntry {
  std::string name;
  Signature sig;
  std::vector<std::string> sentence_names;
  std::vector<Formula> sentences;
  std::string note;  // intended semantics (E or F, role of the threshold)
};

enum class PacKind { Point, Parity, Conjunction, DecisionList };

// Concept-class existence sentences over predicates P1..Ps and the label
// predicate lbl, xor/chained connectives expanded into the core AST.
// `corrected` only affects Conjunction: the second implication of the
// displayed sentence repeats z where y is plausibly intended; the default
// emits the text as printed.
CorpusEntry build_pac(PacKind kind, int s, bool corrected = false);

enum class GraphKind { VertexWeighted, EdgeWeighted };

// VertexWeighted: property sentences over the edge relation E (+ partition
// predicate A). EdgeWeighted: the equivalence/incidence/uniqueness axioms
// over I, C, D.
CorpusEntry build_graph_axioms(GraphKind kind);

// Linear-threshold update rule and presynaptic consistency for activation
// predicates actv_0..actv_tmax; the update existential is the threshold
// quantifier under an F-reading at user-supplied epsilon.
CorpusEntry build_ann(int t_max);

}  // namespace epslog

#endif  // EPSLOG_CORPUS_HPP
