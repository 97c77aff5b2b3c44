#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semunits/compound.hpp"
#include "semunits/mint.hpp"
#include "semunits/units.hpp"

namespace su {

// Terms of the internal metadata vocabulary.
namespace meta {
inline constexpr const char* kNs = "https://w3id.org/semunits/meta#";
inline constexpr const char* kCreator = "https://w3id.org/semunits/meta#creator";
inline constexpr const char* kCreated = "https://w3id.org/semunits/meta#created";
inline constexpr const char* kApplication = "https://w3id.org/semunits/meta#application";
inline constexpr const char* kTitle = "https://w3id.org/semunits/meta#title";
inline constexpr const char* kContributor = "https://w3id.org/semunits/meta#contributor";
inline constexpr const char* kLastUpdated = "https://w3id.org/semunits/meta#lastUpdated";
inline constexpr const char* kSchema = "https://w3id.org/semunits/meta#schema";
}  // namespace meta

namespace np {
inline constexpr const char* kNs = "http://www.nanopub.org/nschema#";
inline constexpr const char* kNanopublication = "http://www.nanopub.org/nschema#Nanopublication";
inline constexpr const char* kHasAssertion = "http://www.nanopub.org/nschema#hasAssertion";
inline constexpr const char* kHasProvenance = "http://www.nanopub.org/nschema#hasProvenance";
inline constexpr const char* kHasPublicationInfo =
    "http://www.nanopub.org/nschema#hasPublicationInfo";
}  // namespace np

struct ProvenanceRecord {
  std::string creator;  // agent IRI, required
  std::string created;  // xsd:date or xsd:dateTime lexical form, required
  std::string application;
  std::string title;
  std::vector<std::string> contributors;
  std::string last_updated;

  bool operator==(const ProvenanceRecord&) const = default;
};

// Seconds since the epoch (UTC) for `YYYY-MM-DD` or
// `YYYY-MM-DDThh:mm:ss[.f][Z|+hh:mm]`; nullopt when malformed.
std::optional<long long> parse_timestamp(std::string_view s);
std::string current_timestamp();

// Throws MissingProvenance or FutureDate.
void validate_provenance(const ProvenanceRecord& r, std::string_view now);

// Any unit reduced to what a nanopublication carries.
struct UnitRecord {
  std::string upri;
  std::set<std::string> classes;
  std::optional<std::string> subject;
  QuadDataset data;  // graph == upri; empty for compound units
  std::vector<std::string> associated;
  std::vector<std::pair<std::string, std::string>> linked;
  std::vector<std::pair<std::string, std::string>> described_by;
  std::set<std::string> opaque;
  std::string schema;  // modelling metadata: schema or unit class used

  bool operator==(const UnitRecord&) const = default;
};

UnitRecord unit_record(const StatementUnit& u, const VocabularyCatalog& catalog);
UnitRecord unit_record(const CompoundUnit& c, const VocabularyCatalog& catalog);

struct Nanopublication {
  std::string upri;
  std::string head_graph;
  std::string assertion_graph;
  std::string provenance_graph;
  std::string pubinfo_graph;
  QuadDataset quads;
};

std::string nanopub_upri(const std::string& unit_upri);

Nanopublication emit_nanopublication(const UnitRecord& unit, const ProvenanceRecord& provenance,
                                     const ProvenanceRecord& pubinfo,
                                     const VocabularyCatalog& catalog, std::string_view now);

struct ParsedNanopublication {
  std::string upri;
  UnitRecord unit;
  ProvenanceRecord provenance;
  ProvenanceRecord pubinfo;
};

// `quads` must hold exactly one nanopublication.
// Contributors and pair lists come back sorted.
ParsedNanopublication parse_nanopublication(const QuadDataset& quads,
                                            const VocabularyCatalog& catalog);
// Splits a dataset holding several nanopublications by head graph.
std::vector<ParsedNanopublication> parse_nanopublications(const QuadDataset& quads,
                                                          const VocabularyCatalog& catalog);

// ------------------------------------------------------------------ access

struct PolicyCondition {
  enum class Kind { SubjectPath, Requester, RequesterNot };
  Kind kind = Kind::SubjectPath;
  std::vector<std::string> path;  // predicates walked from the unit's subject
  std::string key;                // requester attribute
  std::string value;              // IRI or literal lexical form

  bool operator==(const PolicyCondition&) const = default;
};

struct PolicyRule {
  bool allow = true;
  std::string unit_class;  // "*" matches every unit
  std::vector<PolicyCondition> conditions;
  std::size_t line = 0;

  bool operator==(const PolicyRule&) const = default;
};

// First matching rule wins; units matching no rule are visible.
struct AccessPolicy {
  std::vector<PolicyRule> rules;
};

using RequesterContext = std::map<std::string, std::string>;

// Lines: `allow|deny <class|*> [if <cond> (and <cond>)*]` where a condition is
// `subject <p1/p2/...> <value>`, `requester <key> <value>` or
// `requester-not <key> <value>`. `#` starts a comment.
AccessPolicy parse_policy(std::string_view text, const PrefixMap* prefixes = nullptr);

struct VisibleUnits {
  std::vector<StatementUnit> statements;
  std::vector<CompoundUnit> compounds;  // hidden associations marked opaque
  std::set<std::string> hidden;
};

// `ds` supplies subject metadata for path conditions.
VisibleUnits apply_access_policy(const std::vector<StatementUnit>& statements,
                                 const std::vector<const CompoundUnit*>& compounds,
                                 const AccessPolicy& policy, const RequesterContext& requester,
                                 const QuadDataset& ds);

// Data and unit-layer quads of the visible units only.
QuadDataset visible_dataset(const VisibleUnits& v, const VocabularyCatalog& catalog);

}  // namespace su
