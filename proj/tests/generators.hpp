#pragma once

// Random schema sets and datasets that instantiate them. Every instance gets
// fresh resources, so two matches never compete for one triple.

#include <random>
#include <string>

#include "semunits/store.hpp"

namespace gen {

struct Generated {
  std::string schema_text;
  su::QuadDataset data;
  std::size_t schemas = 0;
};

inline std::string ex(const std::string& local) { return "http://example.org/gen/" + local; }

inline Generated random_corpus(std::mt19937_64& rng, std::size_t max_triples = 500) {
  const std::string rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
  const std::string rdfs_label = "http://www.w3.org/2000/01/rdf-schema#label";
  Generated g;
  g.schemas = std::uniform_int_distribution<std::size_t>(3, 10)(rng);
  std::vector<int> arity(g.schemas);
  std::vector<bool> quantitative(g.schemas), with_adjunct(g.schemas);
  for (std::size_t k = 0; k < g.schemas; ++k) {
    arity[k] = std::uniform_int_distribution<int>(1, 3)(rng);
    quantitative[k] = std::bernoulli_distribution(0.3)(rng);
    with_adjunct[k] = std::bernoulli_distribution(0.4)(rng);
    std::string K = std::to_string(k);
    g.schema_text += "unit <" + ex("Gen" + K + "Unit") + "> anchor <" + ex("p" + K + "_0") + ">\n";
    for (int a = 0; a < arity[k]; ++a)
      g.schema_text += "template ?s <" + ex("p" + K + "_" + std::to_string(a)) + "> ?o" +
                       std::to_string(a) + "\n";
    for (int a = 0; a < arity[k]; ++a)
      g.schema_text += "arg ?o" + std::to_string(a) + (quantitative[k] && a == 0 ? " numeric" : "") + "\n";
    if (with_adjunct[k]) {
      g.schema_text += "template ?s <" + ex("adj" + K) + "> ?t\nadjunct ?t\n";
    }
    g.schema_text += std::string("relation ") + (quantitative[k] ? "quantitative" : "qualitative") +
                     "\nlabel \"{s} gen" + K + " {o0}\"\n\n";
  }

  std::size_t target = std::uniform_int_distribution<std::size_t>(0, max_triples - 6)(rng);
  std::size_t serial = 0;
  std::bernoulli_distribution coin(0.5);
  auto fresh = [&](const std::string& stem) { return ex(stem + std::to_string(serial++)); };
  while (g.data.size() < target) {
    int roll = std::uniform_int_distribution<int>(0, 9)(rng);
    std::string graph = coin(rng) ? std::string(su::kDefaultGraph) : ex("g" + std::to_string(roll));
    if (roll < 6) {
      std::size_t k = std::uniform_int_distribution<std::size_t>(0, g.schemas - 1)(rng);
      std::string K = std::to_string(k);
      std::string s = fresh("r");
      for (int a = 0; a < arity[k]; ++a) {
        su::Term o = (quantitative[k] && a == 0)
                         ? su::Term::literal(std::to_string(serial++), su::xsd::kInteger)
                         : su::Term::iri(fresh("r"));
        g.data.add(s, ex("p" + K + "_" + std::to_string(a)), o, graph);
      }
      if (with_adjunct[k] && coin(rng)) g.data.add(s, ex("adj" + K), su::Term::literal("t"), graph);
      if (coin(rng)) {
        g.data.add(s, rdf_type, su::Term::iri(ex("C" + K)), graph);
        g.data.add(s, rdfs_label, su::Term::literal("thing " + std::to_string(serial)), graph);
      }
    } else if (roll < 8) {
      // Triples no schema covers; they end up in fallback units.
      g.data.add(fresh("r"), ex("noise" + std::to_string(roll)), su::Term::iri(fresh("r")), graph);
    } else if (roll == 8) {
      g.data.add(fresh("r"), "https://w3id.org/semunits/vocab#someInstanceOf",
                 su::Term::iri(ex("C0")), graph);
    } else {
      // A lone partial instance: only a non-anchor template.
      std::size_t k = std::uniform_int_distribution<std::size_t>(0, g.schemas - 1)(rng);
      if (arity[k] > 1)
        g.data.add(fresh("r"), ex("p" + std::to_string(k) + "_1"), su::Term::iri(fresh("r")), graph);
    }
  }
  return g;
}

}  // namespace gen
