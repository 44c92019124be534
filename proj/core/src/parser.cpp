#include "epslog/parser.hpp"

#include <cctype>
#include <sstream>

namespace epslog {

namespace {

struct Token {
  enum class Kind { LParen, RParen, Symbol, End };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    skip_ws();
    if (pos_ >= s_.size()) return {Token::Kind::End, "", line_, col_};
    int l = line_, c = col_;
    char ch = s_[pos_];
    if (ch == '(') {
      advance();
      return {Token::Kind::LParen, "(", l, c};
    }
    if (ch == ')') {
      advance();
      return {Token::Kind::RParen, ")", l, c};
    }
    std::string sym;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')') {
      sym += s_[pos_];
      advance();
    }
    return {Token::Kind::Symbol, sym, l, c};
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size()) {
      char ch = s_[pos_];
      if (ch == ';' || ch == '#') {  // comment to end of line
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

class FormulaParser {
 public:
  FormulaParser(const std::string& text, const Signature& sig) : lex_(text), sig_(sig) {
    tok_ = lex_.next();
  }

  Parsed parse() {
    Parsed p = parse_expr(/*prenex_ok=*/true);
    expect(Token::Kind::End, "trailing input after formula");
    if (std::holds_alternative<Formula>(p)) {
      check_well_formed(std::get<Formula>(p), sig_);
    } else {
      const QSentence& q = std::get<QSentence>(p);
      check_well_formed(q.matrix, sig_);
      q.check();
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, tok_.line, tok_.col); }

  void expect(Token::Kind k, const std::string& msg) {
    if (tok_.kind != k) fail(msg);
  }

  void bump() { tok_ = lex_.next(); }

  std::string take_symbol(const std::string& what) {
    expect(Token::Kind::Symbol, "expected " + what);
    std::string s = tok_.text;
    bump();
    return s;
  }

  Term make_term(const std::string& name) {
    if (!is_identifier(name)) fail("bad identifier: " + name);
    return sig_.constants.count(name) ? Term::con(name) : Term::var(name);
  }

  // prenex_ok: q-quantifier heads are legal here (still at the outermost spine).
  Parsed parse_expr(bool prenex_ok) {
    expect(Token::Kind::LParen, "expected '('");
    bump();
    std::string head = take_symbol("operator or predicate");

    if (head == "qgeq" || head == "qgt") {
      if (!prenex_ok) fail("q-quantifier nested under a connective");
      Rat eps;
      try {
        eps = parse_rat(take_symbol("rational threshold"));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      if (eps < 0 || eps > 1) fail("q-threshold outside [0,1]");
      std::string v = take_symbol("variable");
      if (!is_identifier(v) || sig_.constants.count(v)) fail("bad bound variable: " + v);
      Parsed body = parse_expr(/*prenex_ok=*/true);
      expect(Token::Kind::RParen, "expected ')'");
      bump();
      QSentence q = to_qsentence(std::move(body));
      QuantifierKind k = head == "qgeq" ? QuantifierKind::weak_at_least(eps)
                                        : QuantifierKind::strong_greater(eps);
      q.prefix.insert(q.prefix.begin(), {k, v});
      return q;
    }

    if (head == "forall" || head == "exists") {
      std::string v = take_symbol("variable");
      if (!is_identifier(v) || sig_.constants.count(v)) fail("bad bound variable: " + v);
      Parsed body = parse_expr(prenex_ok);
      expect(Token::Kind::RParen, "expected ')'");
      bump();
      if (std::holds_alternative<QSentence>(body)) {
        // FO quantifier above a q-prefix: stay in q-sentence form.
        QSentence q = std::get<QSentence>(std::move(body));
        QuantifierKind k =
            head == "forall" ? QuantifierKind::all() : QuantifierKind::exist();
        q.prefix.insert(q.prefix.begin(), {k, v});
        return q;
      }
      Formula f = std::get<Formula>(std::move(body));
      return head == "forall" ? Formula::forall(v, std::move(f))
                              : Formula::exists(v, std::move(f));
    }

    if (head == "not" || head == "and" || head == "or" || head == "implies" ||
        head == "iff") {
      std::vector<Formula> kids;
      while (tok_.kind == Token::Kind::LParen) {
        Parsed k = parse_expr(/*prenex_ok=*/false);
        if (std::holds_alternative<QSentence>(k))
          fail("q-quantifier nested under a connective");
        kids.push_back(std::get<Formula>(std::move(k)));
      }
      expect(Token::Kind::RParen, "expected ')'");
      bump();
      if (head == "not") {
        if (kids.size() != 1) fail("not takes exactly one argument");
        return Formula::lnot(std::move(kids[0]));
      }
      if (head == "and" || head == "or") {
        if (kids.empty()) fail(head + " needs at least one argument");
        Formula f;
        f.kind = head == "and" ? FormulaKind::And : FormulaKind::Or;
        if (kids.size() == 1) return std::move(kids[0]);
        f.kids = std::move(kids);
        return f;
      }
      if (kids.size() != 2) fail(head + " takes exactly two arguments");
      return head == "implies" ? Formula::implies(std::move(kids[0]), std::move(kids[1]))
                               : Formula::iff(std::move(kids[0]), std::move(kids[1]));
    }

    if (head == "=") {
      if (!sig_.has_equality) fail("equality not declared in signature");
      Term l = make_term(take_symbol("term"));
      Term r = make_term(take_symbol("term"));
      expect(Token::Kind::RParen, "expected ')'");
      bump();
      return Formula::equal(l, r);
    }

    // Atom.
    auto it = sig_.predicates.find(head);
    if (it == sig_.predicates.end()) fail("undeclared symbol " + head);
    std::vector<Term> args;
    while (tok_.kind == Token::Kind::Symbol) args.push_back(make_term(take_symbol("term")));
    expect(Token::Kind::RParen, "expected ')'");
    bump();
    if (static_cast<int>(args.size()) != it->second)
      throw ParseError("arity mismatch for " + head + ": got " +
                           std::to_string(args.size()) + ", declared " +
                           std::to_string(it->second),
                       tok_.line, tok_.col);
    return Formula::atom(head, std::move(args));
  }

  static QSentence to_qsentence(Parsed p) {
    if (std::holds_alternative<QSentence>(p)) return std::get<QSentence>(std::move(p));
    Formula f = std::get<Formula>(std::move(p));
    QSentence q;
    // Fold a pure-FO prenex tail into the q-prefix.
    Formula* g = &f;
    std::vector<std::pair<QuantifierKind, std::string>> pre;
    while (g->kind == FormulaKind::Forall || g->kind == FormulaKind::Exists) {
      pre.emplace_back(g->kind == FormulaKind::Forall ? QuantifierKind::all()
                                                      : QuantifierKind::exist(),
                       g->var);
      g = &g->kids[0];
    }
    if (!is_quantifier_free(*g))
      throw std::invalid_argument("q-sentences must be prenex");
    q.prefix = std::move(pre);
    q.matrix = *g;
    return q;
  }

  Lexer lex_;
  Token tok_;
  const Signature& sig_;
};

}  // namespace

Parsed parse_formula(const std::string& text, const Signature& sig) {
  return FormulaParser(text, sig).parse();
}

Formula parse_fo_formula(const std::string& text, const Signature& sig) {
  Parsed p = parse_formula(text, sig);
  if (!std::holds_alternative<Formula>(p))
    throw std::invalid_argument("expected a first-order formula, got a q-sentence");
  return std::get<Formula>(std::move(p));
}

QSentence parse_q_sentence(const std::string& text, const Signature& sig) {
  Parsed p = parse_formula(text, sig);
  if (std::holds_alternative<QSentence>(p)) return std::get<QSentence>(std::move(p));
  // A plain prenex FO sentence is a q-sentence with ∀/∃ levels.
  Formula f = std::get<Formula>(std::move(p));
  QSentence q;
  const Formula* g = &f;
  while (g->kind == FormulaKind::Forall || g->kind == FormulaKind::Exists) {
    q.prefix.emplace_back(g->kind == FormulaKind::Forall ? QuantifierKind::all()
                                                         : QuantifierKind::exist(),
                          g->var);
    g = &g->kids[0];
  }
  if (!is_quantifier_free(*g)) throw std::invalid_argument("q-sentences must be prenex");
  q.matrix = *g;
  q.check();
  return q;
}

Signature parse_signature(const std::string& text) {
  Signature sig;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "pred") {
      std::string name;
      int arity;
      if (!(ls >> name >> arity))
        throw ParseError("expected 'pred <name> <arity>'", lineno, 1);
      if (!is_identifier(name)) throw ParseError("bad predicate name " + name, lineno, 1);
      if (arity < 1) throw ParseError("arity of " + name + " must be >= 1", lineno, 1);
      if (sig.predicates.count(name) || sig.constants.count(name))
        throw ParseError("duplicate name " + name, lineno, 1);
      sig.predicates[name] = arity;
    } else if (kw == "const") {
      std::string name;
      if (!(ls >> name)) throw ParseError("expected 'const <name>'", lineno, 1);
      if (!is_identifier(name)) throw ParseError("bad constant name " + name, lineno, 1);
      if (sig.predicates.count(name) || sig.constants.count(name))
        throw ParseError("duplicate name " + name, lineno, 1);
      sig.constants.insert(name);
    } else if (kw == "equality") {
      sig.has_equality = true;
    } else {
      throw ParseError("unknown directive " + kw, lineno, 1);
    }
    std::string rest;
    if (ls >> rest) throw ParseError("trailing junk: " + rest, lineno, 1);
  }
  sig.check();
  return sig;
}

std::string print_signature(const Signature& sig) {
  std::string out;
  for (const auto& [name, arity] : sig.predicates)
    out += "pred " + name + " " + std::to_string(arity) + "\n";
  for (const auto& c : sig.constants) out += "const " + c + "\n";
  if (sig.has_equality) out += "equality\n";
  return out;
}

}  // namespace epslog
