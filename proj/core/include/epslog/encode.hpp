#ifndef EPSLOG_ENCODE_HPP
#define EPSLOG_ENCODE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "epslog/model.hpp"
#include "epslog/syntax.hpp"

namespace epslog {

// Single-tape machine over alphabet {0,1}, 0 the blank. Positions and times
// are 1-based; the head starts at cell 1 on an all-zero tape.
struct TuringMachine {
  std::vector<std::string> states;
  std::string init;
  std::set<std::string> accepting;
  std::set<std::string> rejecting;
  // (state, symbol) -> (state', written symbol, 'L' or 'R')
  std::map<std::pair<std::string, int>, std::tuple<std::string, int, char>> delta;

  // delta total on non-halting states, init/accepting/rejecting consistent.
  void check() const;
};

// TM file format:
//   states: q0 q1 qa
//   init: q0
//   accept: qa
//   reject:
//   q0 0 -> q1 1 R
TuringMachine parse_tm(const std::string& text);
std::string print_tm(const TuringMachine& tm);

struct SimConfig {
  std::string state;
  int head = 1;            // 1-based
  std::vector<int> tape;   // tape[i] = symbol at position i+1
};

struct SimResult {
  bool halted = false;
  int halt_time = 0;                 // m: the time of the halting configuration
  std::vector<SimConfig> history;    // history[t-1] = configuration at time t
};

// Runs until an accepting/rejecting state is entered or max_steps
// configurations have been produced.
SimResult simulate(const TuringMachine& tm, int max_steps);

struct TMEncoding {
  Signature sig;
  std::vector<QSentence> parts;       // the emitted q-sentence family
  std::vector<Formula> sources;       // the FO conjuncts the parts coerce
  std::vector<Rat> part_eps;          // coercion epsilon per part
  std::vector<std::string> part_names;
};

// Emits the halting encoding: the T0 conjuncts 0E-coerced, the
// measure-forcing pair (thresholds 1/4 and 3/4, pinning the eq-class of minc
// to measure exactly 1/4), and the three T1/2 conjuncts coerced at 1/2.
// Requires at least one accepting or rejecting state.
TMEncoding encode_tm(const TuringMachine& tm);

// The halting-witness model on universe {1..2m}: masses 2^-i-1 mirrored
// across the padding half, N = {1..m}, < the natural order, and T/H/S read
// off the computation history. nullopt when the machine does not halt within
// max_steps.
std::optional<FiniteModel> witness_model(const TuringMachine& tm, int max_steps);

namespace encode_detail {

// t' is the successor of t: t < t', every s below t' is at most t, and every
// s above t is at least t'.
Formula successor(const std::string& succ_var, const std::string& base_var);

// Merged shifted atom: each +1/-1 shifted argument quantifies a primed
// variable constrained by `successor`, implying the atom on the shifted
// arguments.
struct ShiftedArg {
  std::string var;
  int shift;  // -1, 0, +1
};
Formula shifted_atom(const std::string& pred, const std::vector<ShiftedArg>& args);

// Relativization through arbitrary connectives (the public relativize only
// accepts prenex input).
Formula relativize_deep(const Formula& f, const std::string& unary_pred);

}  // namespace encode_detail

}  // namespace epslog

#endif  // EPSLOG_ENCODE_HPP
