#ifndef EPSLOG_MODEL_HPP
#define EPSLOG_MODEL_HPP

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "epslog/rational.hpp"
#include "epslog/syntax.hpp"

namespace epslog {

// Finite universe with an everywhere-defined rational point measure.
// Relation tuples and constants are stored as indices into `universe`.
struct FiniteModel {
  Signature sig;
  std::vector<std::string> universe;
  std::map<std::string, std::set<std::vector<int>>> relations;
  std::map<std::string, int> constants;
  std::vector<Rat> measure;

  int index_of(const std::string& label) const;  // -1 when absent
  bool holds(const std::string& pred, const std::vector<int>& tuple) const;
  Rat mass_of(const std::vector<char>& members) const;  // members[i] != 0
};

// Empty report means the model is valid.
std::vector<std::string> validate_model(const FiniteModel& m);

// Variable environment: name -> element index, innermost binding last.
using Env = std::vector<std::pair<std::string, int>>;
int env_lookup(const Env& env, const std::string& var);

// Standard Tarskian truth; equality is identity of elements.
bool classical_eval(const FiniteModel& m, const Formula& f, const Env& env = {});

// Collapses a monadic model to its simple quotient: one element per nonempty
// predicate-cell, cell measure = sum over the cell.
FiniteModel quotient_monadic(const FiniteModel& m);

// Streams every model with |universe| <= max_size over canonical labels
// e1..ek, every relation/constant assignment, and every rational point
// measure t/||t|| with nonnegative integer weights, 1 <= ||t|| <=
// max_denominator, gcd of the positive weights 1 (so each measure vector
// appears exactly once). Order: weight sum, then size, then lexicographic
// weights, then relation/constant odometer. `visit` returns true to stop;
// enumerate_models returns true when stopped early.
bool enumerate_models(const Signature& sig, int max_size, int max_denominator,
                      const std::function<bool(const FiniteModel&)>& visit);

// Small-scale convenience wrapper (tests, oracles).
std::vector<FiniteModel> enumerate_models_vec(const Signature& sig, int max_size,
                                              int max_denominator);

// Model file format (line-oriented, '#' comments):
//   universe: a b c
//   measure: a=1/4 b=1/2 c=1/4
//   const minc=a
//   rel P: a c
//   rel R: (a b) (b c)
FiniteModel parse_model(const std::string& text, const Signature& sig);
std::string print_model(const FiniteModel& m);

}  // namespace epslog

#endif  // EPSLOG_MODEL_HPP
