#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semunits/align.hpp"
#include "semunits/compound.hpp"
#include "semunits/fdo.hpp"
#include "semunits/semantics.hpp"

namespace su {

// Rules applied before any user rules: negation markers and disagreement.
std::string default_rules_text(const VocabularyCatalog& catalog);

std::string read_file(const std::string& path);
// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& contents);

QuadDataset load_dataset(const std::string& text, const std::string& path_hint);

// Partition and compound with separate minter streams per stage.
ProcessedGraph process_graph(const QuadDataset& ds, const std::vector<StatementSchema>& schemas,
                             const VocabularyCatalog& catalog, const std::string& ns,
                             std::optional<std::uint64_t> seed);

// Partition output as one dataset: re-homed data graphs plus unit layer.
QuadDataset partition_dataset(const PartitionResult& p);

struct ReasoningResult {
  std::vector<Atom> facts;
  LogicProgram ground;
  std::vector<std::set<Atom>> models;
  std::set<Atom> cautious;  // atoms true in every stable model
  std::vector<OwlAxiom> axioms;
  ConflictReport conflicts;
};

// Facts from the graph, the default rules plus `rules`, relevant grounding,
// stable models, then translation of the cautious consequences.
ReasoningResult reason(const ProcessedGraph& g, const LogicProgram& rules,
                       const std::vector<TranslationPattern>& patterns,
                       const VocabularyCatalog& catalog, std::size_t bound = kDefaultAtomBound);

std::string format_models(const std::vector<std::set<Atom>>& models, const PrefixMap* prefixes);
std::string format_axioms(const std::vector<OwlAxiom>& axioms, const PrefixMap* prefixes);
std::string format_conflicts(const ConflictReport& c, const PrefixMap* prefixes);

// `upri<TAB>label` for every statement unit; warnings go to `warnings`.
std::string render_labels(const ProcessedGraph& g, const VocabularyCatalog& catalog,
                          std::vector<std::string>* warnings = nullptr);

// One nanopublication per statement and compound unit.
QuadDataset emit_all_nanopublications(const ProcessedGraph& g, const ProvenanceRecord& provenance,
                                      const ProvenanceRecord& pubinfo,
                                      const VocabularyCatalog& catalog, const std::string& now);

// `key=value` lines with unit counts per kind.
std::string summary(const ProcessedGraph& g);

}  // namespace su
