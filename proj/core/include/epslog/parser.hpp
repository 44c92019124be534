#ifndef EPSLOG_PARSER_HPP
#define EPSLOG_PARSER_HPP

#include <stdexcept>
#include <string>
#include <variant>

#include "epslog/syntax.hpp"

namespace epslog {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " at " + std::to_string(l) + ":" + std::to_string(c)),
        line(l),
        col(c) {}
};

using Parsed = std::variant<Formula, QSentence>;

// Grammar (UTF-8 s-expressions, whitespace-insensitive):
//   <f> ::= (<pred> <term>+) | (= <term> <term>) | (not <f>) | (and <f>+)
//         | (or <f>+) | (implies <f> <f>) | (iff <f> <f>)
//         | (forall <var> <f>) | (exists <var> <f>)
//         | (qgeq <rat> <var> <f>) | (qgt <rat> <var> <f>)
// q-quantifiers are only legal in prenex position; identifiers declared as
// constants in `sig` parse as constant terms, anything else as a variable.
Parsed parse_formula(const std::string& text, const Signature& sig);

// Convenience wrappers that reject the other alternative.
Formula parse_fo_formula(const std::string& text, const Signature& sig);
QSentence parse_q_sentence(const std::string& text, const Signature& sig);

// Signature file: one directive per line, `#` comments.
//   pred <name> <arity>
//   const <name>
//   equality
Signature parse_signature(const std::string& text);
std::string print_signature(const Signature& sig);

}  // namespace epslog

#endif  // EPSLOG_PARSER_HPP
