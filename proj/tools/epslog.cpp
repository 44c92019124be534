// Command-line surface for the probability-logic toolkit: evaluation,
// decision procedures, enumeration, the halting encoding, and corpus export.
//
// Exit codes: 0 true/satisfiable/valid, 1 false/unsatisfiable/invalid,
// 2 budget exhausted, 64 usage or input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "epslog/corpus.hpp"
#include "epslog/decide.hpp"
#include "epslog/encode.hpp"
#include "epslog/model.hpp"
#include "epslog/parser.hpp"
#include "epslog/semantics.hpp"

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 64;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct CommonOpts {
  std::string format = "text";
  bool machine() const { return format == "machine"; }
};

int report_bool(const CommonOpts& o, bool value) {
  if (o.machine())
    std::cout << "RESULT value=" << (value ? "true" : "false") << "\n";
  else
    std::cout << "result: " << (value ? "true" : "false") << "\n";
  return value ? kExitTrue : kExitFalse;
}

int report_outcome(const CommonOpts& o, const epslog::DecisionOutcome& out,
                   const std::string& witness_path) {
  using epslog::Verdict;
  std::string wfile;
  if (!witness_path.empty() && out.witness) {
    spit(witness_path, epslog::print_model(*out.witness));
    wfile = witness_path;
  } else if (!witness_path.empty() && out.counter) {
    spit(witness_path, epslog::print_model(*out.counter));
    wfile = witness_path;
  }
  std::cout << "VERDICT kind=" << epslog::verdict_name(out.verdict);
  if (!wfile.empty()) std::cout << " witness=" << wfile;
  std::cout << "\n";
  if (!o.machine()) {
    if (out.witness && wfile.empty())
      std::cout << "witness model:\n" << epslog::print_model(*out.witness);
    if (out.counter && wfile.empty())
      std::cout << "countermodel:\n" << epslog::print_model(*out.counter);
    if (out.certificate_assignment) {
      std::cout << "falsifying assignment:";
      for (const auto& [pv, val] : *out.certificate_assignment)
        std::cout << " " << pv.to_string() << "=" << (val ? "1" : "0");
      std::cout << "\n";
    }
  }
  switch (out.verdict) {
    case Verdict::Satisfiable:
    case Verdict::Valid:
      return kExitTrue;
    case Verdict::Unsatisfiable:
    case Verdict::Invalid:
      return kExitFalse;
    case Verdict::BudgetExhausted:
      return kExitBudget;
  }
  return kExitUsage;
}

epslog::Rat parse_eps(const std::string& s) {
  epslog::Rat eps = epslog::parse_rat(s);
  if (eps < 0 || eps > 1) throw std::runtime_error("epsilon must be in [0,1]");
  return eps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epsilon-probability logic toolkit"};
  app.require_subcommand(1);
  CommonOpts common;
  app.add_option("--format", common.format, "text or machine output")
      ->check(CLI::IsMember({"text", "machine"}));

  // check
  std::string sig_path, formula_path, model_path, semantics = "E", eps_str = "0";
  std::string witness_path;
  int jobs = 1;
  auto* check = app.add_subcommand("check", "evaluate a formula on a model");
  check->add_option("--sig", sig_path, "signature file")->required();
  check->add_option("--formula", formula_path, "formula file")->required();
  check->add_option("--model", model_path, "model file")->required();
  check->add_option("--semantics", semantics, "E, F, or Q")
      ->check(CLI::IsMember({"E", "F", "Q"}));
  check->add_option("--epsilon", eps_str, "rational threshold p/q (E and F only)");
  check->add_option("--witness", witness_path, "write the witness q-tree here");

  // decide-monadic
  std::string dm_mode = "E";
  auto* dm = app.add_subcommand("decide-monadic", "monadic relational satisfiability");
  dm->add_option("--sig", sig_path, "signature file")->required();
  dm->add_option("--formula", formula_path, "formula or q-sentence file")->required();
  dm->add_option("--mode", dm_mode, "E or F (ignored for q-sentences)")
      ->check(CLI::IsMember({"E", "F"}));
  dm->add_option("--epsilon", eps_str, "rational threshold (ignored for q-sentences)");
  dm->add_option("--witness", witness_path, "write the witness model here");

  // decide-zero
  std::string problem = "0f-valid";
  auto* dz = app.add_subcommand("decide-zero", "epsilon = 0 decision procedure");
  dz->add_option("--sig", sig_path, "signature file")->required();
  dz->add_option("--formula", formula_path, "formula file")->required();
  dz->add_option("--problem", problem, "which problem to decide")
      ->check(CLI::IsMember(
          {"0f-valid", "0e-sat", "0f-valid-countable", "0e-sat-countable"}));
  dz->add_option("--witness", witness_path, "write the witness/countermodel here");

  // enum-sat
  int budget = 4, max_size = -1;
  std::string es_mode = "E";
  auto* es = app.add_subcommand("enum-sat", "finite-model enumeration semi-decision");
  es->add_option("--sig", sig_path, "signature file")->required();
  es->add_option("--formula", formula_path, "formula file")->required();
  es->add_option("--mode", es_mode, "E or F")->check(CLI::IsMember({"E", "F"}));
  es->add_option("--epsilon", eps_str, "rational threshold p/q");
  es->add_option("--budget", budget, "maximum measure weight-sum")->required();
  es->add_option("--max-size", max_size, "universe size cap (default: budget)");
  es->add_option("--jobs", jobs, "parallel evaluation workers");
  es->add_option("--witness", witness_path, "write the witness model here");

  // encode-tm
  std::string tm_path, out_dir;
  int max_steps = 64;
  bool verify = false;
  auto* et = app.add_subcommand("encode-tm", "halting encoding of a Turing machine");
  et->add_option("--tm", tm_path, "machine description file")->required();
  et->add_option("--max-steps", max_steps, "simulation bound");
  et->add_flag("--verify", verify, "simulate, build the witness, check every part");
  et->add_option("--out", out_dir, "write signature and part files here");

  // quotient
  auto* qt = app.add_subcommand("quotient", "monadic quotient of a model");
  qt->add_option("--sig", sig_path, "signature file")->required();
  qt->add_option("--model", model_path, "model file")->required();
  qt->add_option("--witness", witness_path, "write the quotient model here");

  // corpus
  std::string corpus_name;
  int pac_s = 1, tmax = 1;
  bool corrected = false;
  auto* cp = app.add_subcommand("corpus", "emit bundled application sentences");
  cp->add_subcommand("emit", "write signature + sentence files");
  cp->add_option("name", corpus_name,
                 "pac-point | pac-parity | pac-conjunction | pac-decision-list | "
                 "graph-vertex | graph-edge | ann")
      ->required();
  cp->add_option("--s", pac_s, "PAC dimension");
  cp->add_option("--tmax", tmax, "ANN time horizon");
  cp->add_flag("--corrected", corrected, "corrected conjunction-class variant");
  cp->add_option("--out", out_dir, "output directory (default: .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    using namespace epslog;

    if (*check) {
      Signature sig = parse_signature(slurp(sig_path));
      FiniteModel m = parse_model(slurp(model_path), sig);
      auto errs = validate_model(m);
      if (!errs.empty()) {
        for (const auto& e : errs) std::cerr << "model error: " << e << "\n";
        return kExitUsage;
      }
      Parsed p = parse_formula(slurp(formula_path), sig);
      bool value = false;
      QSentence tree_target;
      bool have_tree_target = false;
      if (semantics == "Q") {
        if (!std::holds_alternative<QSentence>(p))
          throw std::runtime_error("semantics Q needs a q-sentence (or prenex form)");
        tree_target = std::get<QSentence>(p);
        value = eval_q(m, tree_target);
        have_tree_target = true;
      } else {
        if (!std::holds_alternative<Formula>(p))
          throw std::runtime_error("semantics E/F need a first-order formula");
        const Formula& f = std::get<Formula>(p);
        Rat eps = parse_eps(eps_str);
        value = semantics == "E" ? eval_e(m, f, eps) : eval_f(m, f, eps);
        tree_target = semantics == "E" ? e_coerce(f, eps) : f_coerce(f, eps);
        have_tree_target = true;
      }
      if (!witness_path.empty() && value && have_tree_target) {
        auto tree = find_qtree(m, tree_target);
        if (tree) spit(witness_path, print_qtree(m, *tree));
      }
      return report_bool(common, value);
    }

    if (*dm) {
      Signature sig = parse_signature(slurp(sig_path));
      Parsed p = parse_formula(slurp(formula_path), sig);
      DecisionOutcome out;
      if (std::holds_alternative<QSentence>(p)) {
        out = decide_monadic(std::get<QSentence>(p), sig);
      } else {
        Rat eps = parse_eps(eps_str);
        out = decide_monadic(std::get<Formula>(p), dm_mode == "E" ? Mode::E : Mode::F,
                             eps, sig);
      }
      return report_outcome(common, out, witness_path);
    }

    if (*dz) {
      Signature sig = parse_signature(slurp(sig_path));
      Formula f = parse_fo_formula(slurp(formula_path), sig);
      ZeroProblem zp = problem == "0f-valid"             ? ZeroProblem::ZeroFValidFinite
                       : problem == "0f-valid-countable" ? ZeroProblem::ZeroFValidCountable
                       : problem == "0e-sat"             ? ZeroProblem::ZeroESatFinite
                                                         : ZeroProblem::ZeroESatCountable;
      DecisionOutcome out = decide_zero(f, zp, sig);
      return report_outcome(common, out, witness_path);
    }

    if (*es) {
      Signature sig = parse_signature(slurp(sig_path));
      Formula f = parse_fo_formula(slurp(formula_path), sig);
      Rat eps = parse_eps(eps_str);
      DecisionOutcome out =
          semi_decide_finite_sat(f, eps, es_mode == "E" ? Mode::E : Mode::F, budget, sig,
                                 max_size, jobs);
      return report_outcome(common, out, witness_path);
    }

    if (*et) {
      TuringMachine tm = parse_tm(slurp(tm_path));
      TMEncoding enc = encode_tm(tm);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        spit(out_dir + "/encoding.sig", print_signature(enc.sig));
        std::string parts;
        for (std::size_t i = 0; i < enc.parts.size(); ++i)
          parts += "# " + enc.part_names[i] + "\n" + print_qsentence(enc.parts[i]) + "\n";
        spit(out_dir + "/parts.sx", parts);
      }
      std::cout << "parts: " << enc.parts.size() << "\n";
      if (!verify) return kExitTrue;

      SimResult sim = simulate(tm, max_steps);
      if (!sim.halted) {
        std::cout << "VERDICT kind=budget_exhausted\n";
        return kExitBudget;
      }
      std::cout << "halted at m=" << sim.halt_time << "\n";
      auto w = witness_model(tm, max_steps);
      bool all_ok = true;
      for (std::size_t i = 0; i < enc.parts.size(); ++i) {
        bool ok = eval_q(*w, enc.parts[i]);
        all_ok = all_ok && ok;
        std::cout << "part " << enc.part_names[i] << ": " << (ok ? "ok" : "FAIL") << "\n";
      }
      if (!witness_path.empty()) spit(witness_path, print_model(*w));
      std::cout << "VERDICT kind=" << (all_ok ? "satisfiable" : "invalid") << "\n";
      return all_ok ? kExitTrue : kExitFalse;
    }

    if (*qt) {
      Signature sig = parse_signature(slurp(sig_path));
      FiniteModel m = parse_model(slurp(model_path), sig);
      auto errs = validate_model(m);
      if (!errs.empty()) {
        for (const auto& e : errs) std::cerr << "model error: " << e << "\n";
        return kExitUsage;
      }
      FiniteModel q = quotient_monadic(m);
      std::string text = print_model(q);
      if (!witness_path.empty())
        spit(witness_path, text);
      else
        std::cout << text;
      return kExitTrue;
    }

    if (*cp) {
      CorpusEntry entry;
      if (corpus_name == "pac-point")
        entry = build_pac(PacKind::Point, pac_s, corrected);
      else if (corpus_name == "pac-parity")
        entry = build_pac(PacKind::Parity, pac_s, corrected);
      else if (corpus_name == "pac-conjunction")
        entry = build_pac(PacKind::Conjunction, pac_s, corrected);
      else if (corpus_name == "pac-decision-list")
        entry = build_pac(PacKind::DecisionList, pac_s, corrected);
      else if (corpus_name == "graph-vertex")
        entry = build_graph_axioms(GraphKind::VertexWeighted);
      else if (corpus_name == "graph-edge")
        entry = build_graph_axioms(GraphKind::EdgeWeighted);
      else if (corpus_name == "ann")
        entry = build_ann(tmax);
      else
        throw std::runtime_error("unknown corpus entry " + corpus_name);
      std::string dir = out_dir.empty() ? "." : out_dir;
      std::filesystem::create_directories(dir);
      spit(dir + "/" + entry.name + ".sig", print_signature(entry.sig));
      for (std::size_t i = 0; i < entry.sentences.size(); ++i)
        spit(dir + "/" + entry.name + "_" + entry.sentence_names[i] + ".sx",
             print_formula(entry.sentences[i]) + "\n");
      std::cout << "wrote " << entry.sentences.size() << " sentences to " << dir << "\n";
      return kExitTrue;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
