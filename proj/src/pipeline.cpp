#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "semunits/pipeline.hpp"

namespace su {

std::string default_rules_text(const VocabularyCatalog& c) {
  auto iri = [&](const char* key) { return "<" + c.get(key) + ">"; };
  std::string out;
  out += iri("NegatedAssertionalStatementUnit") + "(?x) :- " + iri("NegationUnit") + "(?x), " +
         iri("AssertionalStatementUnit") + "(?x).\n";
  out += iri("NegationUnit") + "(?a) :- " + iri("DisagreementUnit") + "(?d), " + iri("statement") +
         "(?d, ?a, " + iri("type") + ", " + iri("NegationUnit") + ").\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::Io, "cannot rename onto " + path + ": " + ec.message());
  }
}

QuadDataset load_dataset(const std::string& text, const std::string& path_hint) {
  auto ends_with = [&](const char* ext) {
    std::string e(ext);
    return path_hint.size() >= e.size() &&
           path_hint.compare(path_hint.size() - e.size(), e.size(), e) == 0;
  };
  Syntax syn = ends_with(".nq") || ends_with(".nt") ? Syntax::NQuads : Syntax::TriG;
  return parse_quads(text, syn);
}

ProcessedGraph process_graph(const QuadDataset& ds, const std::vector<StatementSchema>& schemas,
                             const VocabularyCatalog& catalog, const std::string& ns,
                             std::optional<std::uint64_t> seed) {
  UpriMinter partition_minter(ns, seed, "partition");
  UpriMinter compound_minter(ns, seed, "compound");
  ProcessedGraph g;
  g.partition = partition(ds, schemas, catalog, partition_minter);
  g.compounds = build_compounds(g.partition, catalog, compound_minter);
  g.dataset = g.partition.to_dataset();
  g.dataset.merge(compound_quads(g.compounds, catalog));
  return g;
}

QuadDataset partition_dataset(const PartitionResult& p) { return p.to_dataset(); }

ReasoningResult reason(const ProcessedGraph& g, const LogicProgram& rules,
                       const std::vector<TranslationPattern>& patterns,
                       const VocabularyCatalog& catalog, std::size_t bound) {
  ReasoningResult r;
  r.facts = facts_from_units(g.partition, catalog, &g.compounds);
  LogicProgram prog = parse_program(default_rules_text(catalog), &catalog.prefixes());
  prog.rules.insert(prog.rules.end(), rules.rules.begin(), rules.rules.end());
  prog.universe = rules.universe;
  r.ground = ground_program(prog, r.facts, GroundingMode::Relevant);
  r.models = stable_models(r.ground, bound);
  if (!r.models.empty()) {
    r.cautious = r.models.front();
    for (std::size_t i = 1; i < r.models.size(); ++i) {
      std::set<Atom> keep;
      for (const auto& a : r.cautious)
        if (r.models[i].count(a)) keep.insert(a);
      r.cautious = std::move(keep);
    }
  }
  r.axioms = translate_to_owl(r.cautious, patterns);
  // Conflicts are looked for among every atom the program could derive.
  std::set<Atom> possible;
  for (const auto& rule : r.ground.rules) possible.insert(rule.head);
  r.conflicts = check_conflicts(possible, catalog);
  return r;
}

std::string format_models(const std::vector<std::set<Atom>>& models, const PrefixMap* prefixes) {
  std::string out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    out += "model " + std::to_string(i + 1) + "\n";
    for (const auto& a : models[i]) out += "  " + a.to_string(prefixes) + "\n";
  }
  if (models.empty()) out += "no stable model\n";
  return out;
}

std::string format_axioms(const std::vector<OwlAxiom>& axioms, const PrefixMap* prefixes) {
  std::string out;
  for (const auto& a : axioms) out += to_functional(a, prefixes) + "\n";
  return out;
}

std::string format_conflicts(const ConflictReport& c, const PrefixMap* prefixes) {
  std::string out;
  for (const auto& [p, n] : c.classical)
    out += "conflict\t" + p.to_string(prefixes) + "\t" + n.to_string(prefixes) + "\n";
  for (const auto& d : c.disputes)
    out += "dispute\t" + d.disagreement_unit + "\t" + d.target_unit + "\n";
  return out;
}

std::string render_labels(const ProcessedGraph& g, const VocabularyCatalog& catalog,
                          std::vector<std::string>* warnings) {
  std::string out;
  for (const auto& u : g.partition.units) {
    RenderedLabel l = render_dynamic_label(u, g.dataset, catalog);
    out += u.upri + "\t" + l.text + "\n";
    if (warnings)
      for (const auto& w : l.warnings) warnings->push_back(u.upri + ": " + w);
  }
  return out;
}

QuadDataset emit_all_nanopublications(const ProcessedGraph& g, const ProvenanceRecord& provenance,
                                      const ProvenanceRecord& pubinfo,
                                      const VocabularyCatalog& catalog, const std::string& now) {
  QuadDataset out;
  for (const auto& u : g.partition.units)
    out.merge(emit_nanopublication(unit_record(u, catalog), provenance, pubinfo, catalog, now).quads);
  for (const CompoundUnit* c : g.compounds.all())
    out.merge(emit_nanopublication(unit_record(*c, catalog), provenance, pubinfo, catalog, now).quads);
  return out;
}

std::string summary(const ProcessedGraph& g) {
  std::map<std::string, std::size_t> counts;
  std::size_t identification = 0;
  for (const auto& u : g.partition.units) {
    if (u.is_identification()) ++identification;
    for (const auto& c : u.classes) ++counts["class." + local_name(c)];
  }
  std::string out;
  auto line = [&](const std::string& k, std::size_t v) { out += k + "=" + std::to_string(v) + "\n"; };
  line("statement_units", g.partition.units.size());
  line("identification_units", identification);
  line("fallback_units", g.partition.fallback_units.size());
  std::map<std::string, std::size_t> kinds;
  for (const CompoundUnit* c : g.compounds.all()) ++kinds[c->kind_class_key()];
  for (const char* k : {"TypedStatementUnit", "QualityMeasurementUnit", "InstanceItemUnit",
                        "ClassItemUnit", "TextHybridItemUnit", "InstanceItemGroupUnit",
                        "ClassItemGroupUnit", "ClassAxiomItemGroupUnit", "GranularityTreeUnit",
                        "ContextUnit"})
    line(std::string("compound.") + k, kinds[k]);
  for (const auto& [k, v] : counts) line(k, v);
  return out;
}

}  // namespace su
