#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semunits/pipeline.hpp"

namespace py = pybind11;

namespace {

constexpr const char* kDefaultNs = "https://w3id.org/semunits/unit/";

su::Syntax syntax_of(const std::string& name) {
  if (name == "trig") return su::Syntax::TriG;
  if (name == "nquads") return su::Syntax::NQuads;
  throw py::value_error("syntax must be 'trig' or 'nquads'");
}

py::list triples(const su::QuadDataset& d) {
  py::list out;
  for (const auto& q : d) out.append(py::make_tuple(q.subject, q.predicate, su::term_to_nquads(q.object)));
  return out;
}

// A processed graph together with the catalog it was built with.
struct Graph {
  su::VocabularyCatalog catalog;
  su::ProcessedGraph g;

  std::string trig(const su::QuadDataset& d) const {
    return su::serialize_quads(d, su::Syntax::TriG, &catalog.prefixes());
  }

  py::list statement_units() const {
    py::list out;
    for (const auto& u : g.partition.units) {
      py::dict d;
      d["upri"] = u.upri;
      d["classes"] = std::vector<std::string>(u.classes.begin(), u.classes.end());
      d["subject"] = u.subject;
      d["identification"] = u.is_identification();
      d["triples"] = triples(u.data);
      out.append(d);
    }
    return out;
  }

  py::list compound_units() const {
    py::list out;
    for (const auto* c : g.compounds.all()) {
      py::dict d;
      d["upri"] = c->upri;
      d["class"] = catalog.get(c->kind_class_key());
      d["subject"] = c->subject ? py::cast(*c->subject) : py::none();
      d["associated"] = c->associated;
      out.append(d);
    }
    return out;
  }

  std::map<std::string, std::string> summary() const {
    std::map<std::string, std::string> out;
    std::string text = su::summary(g);
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string line = text.substr(pos, nl - pos);
      auto eq = line.find('=');
      if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
      pos = nl == std::string::npos ? text.size() : nl + 1;
    }
    return out;
  }

  std::vector<std::pair<std::string, std::string>> labels() const {
    std::vector<std::pair<std::string, std::string>> out;
    std::string text = su::render_labels(g, catalog);
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string line = text.substr(pos, nl - pos);
      auto tab = line.find('\t');
      if (tab != std::string::npos) out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
      pos = nl == std::string::npos ? text.size() : nl + 1;
    }
    return out;
  }

  py::dict reason(const std::string& rules, const std::string& patterns, std::size_t bound) const {
    const auto* pm = &catalog.prefixes();
    auto r = su::reason(g, su::parse_program(rules, pm), su::parse_patterns(patterns, pm), catalog, bound);
    py::list models;
    for (const auto& m : r.models) {
      std::vector<std::string> atoms;
      for (const auto& a : m) atoms.push_back(a.to_string(pm));
      models.append(atoms);
    }
    std::vector<std::string> axioms;
    for (const auto& a : r.axioms) axioms.push_back(su::to_functional(a, pm));
    py::dict d;
    d["models"] = models;
    d["axioms"] = axioms;
    d["conflicts"] = su::format_conflicts(r.conflicts, pm);
    return d;
  }

  std::string nanopublications(const std::string& creator, const std::string& created,
                               const std::string& now) const {
    su::ProvenanceRecord p;
    p.creator = creator;
    p.created = created;
    p.application = "semunits";
    return trig(su::emit_all_nanopublications(g, p, p, catalog, now.empty() ? su::current_timestamp() : now));
  }

  std::string visible(const std::string& policy, const std::map<std::string, std::string>& requester) const {
    auto pol = su::parse_policy(policy, &catalog.prefixes());
    auto v = su::apply_access_policy(g.partition.units, g.compounds.all(), pol, requester, g.dataset);
    return trig(su::visible_dataset(v, catalog));
  }
};

Graph process(const std::string& data, const std::string& schemas, const std::string& catalog,
              const std::string& syntax, const std::string& ns, std::optional<std::uint64_t> seed) {
  Graph out{catalog.empty() ? su::VocabularyCatalog::defaults() : su::VocabularyCatalog::load(catalog), {}};
  auto compiled = su::compile_schema(schemas, &out.catalog.prefixes());
  out.g = su::process_graph(su::parse_quads(data, syntax_of(syntax)), compiled, out.catalog, ns, seed);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Semantic units over RDF datasets";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error;
  error.call_once_and_store_result([&]() { return py::exception<su::Error>(m, "SemunitsError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const su::Error& e) {
      std::string msg = su::to_string(e.code()) + std::string(": ") + e.what();
      py::set_error(error.get_stored(), msg.c_str());
    }
  });

  py::class_<Graph>(m, "Graph")
      .def("statement_units", &Graph::statement_units)
      .def("compound_units", &Graph::compound_units)
      .def("summary", &Graph::summary, "unit counts per kind")
      .def("labels", &Graph::labels, "(upri, label) for every statement unit")
      .def("partition_trig", [](const Graph& g) { return g.trig(su::partition_dataset(g.g.partition)); })
      .def("trig", [](const Graph& g) { return g.trig(g.g.dataset); })
      .def("reason", &Graph::reason, py::arg("rules") = "", py::arg("patterns") = "",
           py::arg("bound") = su::kDefaultAtomBound)
      .def("nanopublications", &Graph::nanopublications, py::arg("creator"), py::arg("created"),
           py::arg("now") = "")
      .def("visible", &Graph::visible, py::arg("policy"),
           py::arg("requester") = std::map<std::string, std::string>{});

  m.def("process", &process, py::arg("data"), py::arg("schemas") = "", py::arg("catalog") = "",
        py::arg("syntax") = "trig", py::arg("ns") = kDefaultNs, py::arg("seed") = py::none(),
        "parse, partition and compound a dataset");

  m.def(
      "align",
      [](const Graph& a, const Graph& b) { return su::format_report(su::align_graphs(a.g, b.g, a.catalog)); },
      "alignment report, one correspondence per line");

  m.def(
      "stable_models",
      [](const std::string& program, std::size_t bound) {
        auto cat = su::VocabularyCatalog::defaults();
        auto ground = su::ground_program(su::parse_program(program, &cat.prefixes()), {});
        std::vector<std::vector<std::string>> out;
        for (const auto& model : su::stable_models(ground, bound)) {
          std::vector<std::string> atoms;
          for (const auto& a : model) atoms.push_back(a.to_string(&cat.prefixes()));
          out.push_back(atoms);
        }
        return out;
      },
      py::arg("program"), py::arg("bound") = su::kDefaultAtomBound);

  m.def(
      "mint_upri", [](const std::string& ns, std::optional<std::uint64_t> seed) { return su::mint_upri(ns, seed); },
      py::arg("ns") = kDefaultNs, py::arg("seed") = py::none());
}
