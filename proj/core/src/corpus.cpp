#include "epslog/corpus.hpp"

#include <stdexcept>

namespace epslog {

namespace {

Term v(const std::string& n) { return Term::var(n); }

Formula P(int i, const std::string& x) {
  return Formula::atom("P" + std::to_string(i), {v(x)});
}
Formula lbl(const std::string& x) { return Formula::atom("lbl", {v(x)}); }

Formula lxor(Formula a, Formula b) {
  return Formula::lnot(Formula::iff(std::move(a), std::move(b)));
}

Formula conj(std::vector<Formula> fs) { return Formula::land(std::move(fs)); }

Signature pac_sig(int s) {
  Signature sig;
  for (int i = 1; i <= s; ++i) sig.predicates["P" + std::to_string(i)] = 1;
  sig.predicates["lbl"] = 1;
  return sig;
}

}  // namespace

CorpusEntry build_pac(PacKind kind, int s, bool corrected) {
  if (s < 1) throw std::invalid_argument("s must be >= 1");
  CorpusEntry e;
  e.sig = pac_sig(s);
  switch (kind) {
    case PacKind::Point: {
      e.name = "pac_point";
      std::vector<Formula> same;
      for (int i = 1; i <= s; ++i) same.push_back(Formula::iff(P(i, "x"), P(i, "y")));
      Formula body = Formula::iff(lbl("y"), conj(std::move(same)));
      e.sentences.push_back(
          Formula::exists("x", Formula::forall("y", std::move(body))));
      e.sentence_names.push_back("point_exists_concept");
      e.note = "E-semantics; the measure-forall tolerates an epsilon of mislabeled mass";
      break;
    }
    case PacKind::Parity: {
      e.name = "pac_parity";
      Formula acc = Formula::land({P(1, "x"), P(1, "y")});
      for (int i = 2; i <= s; ++i)
        acc = lxor(std::move(acc), Formula::land({P(i, "x"), P(i, "y")}));
      Formula body = Formula::iff(lbl("y"), std::move(acc));
      e.sentences.push_back(
          Formula::exists("x", Formula::forall("y", std::move(body))));
      e.sentence_names.push_back("parity_exists_concept");
      e.note = "E-semantics; x encodes the parity vector";
      break;
    }
    case PacKind::Conjunction: {
      e.name = corrected ? "pac_conjunction_corrected" : "pac_conjunction";
      std::vector<Formula> clauses;
      for (int i = 1; i <= s; ++i) {
        Formula pos = Formula::implies(Formula::land({P(i, "x"), P(i, "y")}), P(i, "z"));
        // As printed, the negative clause repeats z in the antecedent; the
        // corrected variant uses y.
        Formula neg = Formula::implies(
            Formula::land({Formula::lnot(P(i, "x")),
                           Formula::lnot(P(i, corrected ? "y" : "z"))}),
            Formula::lnot(P(i, "z")));
        clauses.push_back(Formula::land({std::move(pos), std::move(neg)}));
      }
      Formula body = Formula::iff(lbl("z"), conj(std::move(clauses)));
      e.sentences.push_back(Formula::exists(
          "x", Formula::exists("y", Formula::forall("z", std::move(body)))));
      e.sentence_names.push_back("conjunction_exists_concept");
      e.note = "E-semantics; x and y jointly encode the sign vector";
      break;
    }
    case PacKind::DecisionList: {
      e.name = "pac_decision_list";
      std::vector<Formula> parts;
      {
        std::vector<Formula> alldiff;
        for (int j = 1; j <= s; ++j) alldiff.push_back(lxor(P(j, "x"), P(j, "w")));
        parts.push_back(Formula::implies(conj(std::move(alldiff)),
                                         Formula::iff(lbl("w"), P(1, "z"))));
      }
      for (int i = 1; i <= s; ++i) {
        std::vector<Formula> ante;
        for (int j = 1; j < i; ++j) ante.push_back(lxor(P(j, "x"), P(j, "w")));
        ante.push_back(Formula::iff(P(i, "x"), P(i, "w")));
        parts.push_back(Formula::implies(conj(std::move(ante)),
                                         Formula::iff(lbl("w"), P(i, "y"))));
      }
      Formula body = conj(std::move(parts));
      e.sentences.push_back(Formula::exists(
          "x", Formula::exists(
                   "y", Formula::exists("z", Formula::forall("w", std::move(body))))));
      e.sentence_names.push_back("decision_list_exists_concept");
      e.note = "E-semantics; (x, y, z1) encodes the decision list";
      break;
    }
  }
  for (const auto& f : e.sentences) check_well_formed(f, e.sig);
  return e;
}

CorpusEntry build_graph_axioms(GraphKind kind) {
  CorpusEntry e;
  auto E2 = [&](const std::string& a, const std::string& b) {
    return Formula::atom("E", {v(a), v(b)});
  };
  if (kind == GraphKind::VertexWeighted) {
    e.name = "graph_vertex_weighted";
    e.sig.predicates["E"] = 2;
    e.sig.predicates["A"] = 1;
    e.note = "F-semantics property sentences; forall reads classically";

    e.sentence_names.push_back("loopless");
    e.sentences.push_back(Formula::forall("x", Formula::lnot(E2("x", "x"))));

    e.sentence_names.push_back("undirected");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall("y", Formula::iff(E2("x", "y"), E2("y", "x")))));

    e.sentence_names.push_back("complete");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall("y", Formula::land({E2("x", "y"), E2("y", "x")}))));

    e.sentence_names.push_back("bipartite_fixed_partition");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall(
                 "y", Formula::implies(
                          Formula::iff(Formula::atom("A", {v("x")}),
                                       Formula::atom("A", {v("y")})),
                          Formula::land({Formula::lnot(E2("x", "y")),
                                         Formula::lnot(E2("y", "x"))})))));
  } else {
    e.name = "graph_edge_weighted";
    e.sig.predicates["I"] = 2;
    e.sig.predicates["C"] = 2;
    e.sig.predicates["D"] = 2;
    e.note = "universal axioms; edges carry the measure, I/C/D relate them";
    auto R2 = [&](const std::string& p, const std::string& a, const std::string& b) {
      return Formula::atom(p, {v(a), v(b)});
    };
    for (const std::string p : {"C", "D"}) {
      e.sentence_names.push_back("eqr_" + p + "_refl");
      e.sentences.push_back(Formula::forall("x", R2(p, "x", "x")));
      e.sentence_names.push_back("eqr_" + p + "_sym");
      e.sentences.push_back(Formula::forall(
          "x", Formula::forall("y", Formula::iff(R2(p, "x", "y"), R2(p, "y", "x")))));
      e.sentence_names.push_back("eqr_" + p + "_trans");
      e.sentences.push_back(Formula::forall(
          "x", Formula::forall(
                   "y", Formula::forall(
                            "z", Formula::implies(
                                     Formula::land({R2(p, "x", "y"), R2(p, "y", "z")}),
                                     R2(p, "z", "x"))))));
    }
    e.sentence_names.push_back("idc_codomain");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall(
                 "y", Formula::implies(R2("C", "x", "y"),
                                       Formula::forall("z", Formula::iff(
                                                                R2("I", "x", "z"),
                                                                R2("I", "y", "z")))))));
    e.sentence_names.push_back("idc_domain");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall(
                 "y", Formula::implies(R2("D", "x", "y"),
                                       Formula::forall("z", Formula::iff(
                                                                R2("I", "z", "x"),
                                                                R2("I", "z", "y")))))));
    e.sentence_names.push_back("dci_codomain");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall(
                 "y", Formula::implies(R2("I", "x", "y"),
                                       Formula::forall("z", Formula::iff(
                                                                R2("C", "z", "x"),
                                                                R2("I", "z", "y")))))));
    e.sentence_names.push_back("dci_domain");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall(
                 "y", Formula::implies(R2("I", "x", "y"),
                                       Formula::forall("z2", Formula::iff(
                                                                 R2("D", "z2", "y"),
                                                                 R2("I", "x", "z2")))))));
    e.sentence_names.push_back("unique_domain");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall(
                 "y", Formula::forall(
                          "z", Formula::implies(
                                   Formula::land({R2("I", "x", "y"), R2("I", "x", "z")}),
                                   R2("D", "y", "z"))))));
    e.sentence_names.push_back("unique_codomain");
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall(
                 "y", Formula::forall(
                          "z", Formula::implies(
                                   Formula::land({R2("I", "y", "x"), R2("I", "z", "x")}),
                                   R2("C", "y", "z"))))));
  }
  for (const auto& f : e.sentences) check_well_formed(f, e.sig);
  return e;
}

CorpusEntry build_ann(int t_max) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  CorpusEntry e;
  e.name = "ann_threshold";
  e.sig.predicates["I"] = 2;
  e.sig.predicates["C"] = 2;
  e.sig.predicates["D"] = 2;
  for (int t = 0; t <= t_max; ++t) e.sig.predicates["actv_" + std::to_string(t)] = 1;
  e.note =
      "F-semantics; the update existential is the linear-threshold quantifier at the "
      "network threshold";
  auto actv = [&](int t, const std::string& x) {
    return Formula::atom("actv_" + std::to_string(t), {v(x)});
  };
  for (int t = 0; t < t_max; ++t) {
    e.sentence_names.push_back("presyn_consistent_" + std::to_string(t));
    e.sentences.push_back(Formula::forall(
        "x", Formula::forall(
                 "y", Formula::implies(Formula::atom("D", {v("x"), v("y")}),
                                       Formula::iff(actv(t, "x"), actv(t, "y"))))));
    e.sentence_names.push_back("update_" + std::to_string(t));
    e.sentences.push_back(Formula::forall(
        "x", Formula::iff(actv(t + 1, "x"),
                          Formula::exists(
                              "y", Formula::land({Formula::atom("I", {v("y"), v("x")}),
                                                  actv(t, "y")})))));
  }
  for (const auto& f : e.sentences) check_well_formed(f, e.sig);
  return e;
}

}  // namespace epslog
