#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semunits/compound.hpp"
#include "semunits/units.hpp"

namespace su {

// Arguments starting with '?' are variables; everything else is a constant
// (an IRI, a bare symbol or a literal's lexical form).
struct Atom {
  std::string predicate;
  std::vector<std::string> args;
  bool negated = false;  // classical negation, written -p(...)

  bool is_ground() const;
  std::string to_string(const PrefixMap* prefixes = nullptr) const;
  auto operator<=>(const Atom&) const = default;
};

struct Rule {
  Atom head;
  std::vector<Atom> positive;
  std::vector<Atom> negative;  // default-negated ("not") body atoms

  bool is_fact() const { return positive.empty() && negative.empty(); }
  std::string to_string(const PrefixMap* prefixes = nullptr) const;
  auto operator<=>(const Rule&) const = default;
};

struct LogicProgram {
  std::vector<Rule> rules;
  std::set<std::string> universe;  // extra constants beyond those in the rules

  std::string to_string(const PrefixMap* prefixes = nullptr) const;
};

bool is_variable(const std::string& term);

// Syntax: `head :- a, b, not c.` and facts `head.`; `-p(x)` is classical
// negation; `?x` is a variable; `%` starts a comment; `@prefix p: <iri> .`
// adds a prefix on top of `prefixes`.
LogicProgram parse_program(std::string_view text, const PrefixMap* prefixes = nullptr);

// Unit-class atoms, subject atoms and content atoms for every unit.
std::vector<Atom> facts_from_units(const PartitionResult& p, const VocabularyCatalog& catalog,
                                   const CompoundResult* compounds = nullptr);

enum class GroundingMode {
  Full,      // every substitution over the constant universe
  Relevant,  // substitutions whose positive body can possibly hold
};

LogicProgram ground_program(const LogicProgram& program, const std::vector<Atom>& facts,
                            GroundingMode mode = GroundingMode::Relevant,
                            std::size_t max_rules = 2000000);

inline constexpr std::size_t kDefaultAtomBound = 24;

// Gelfond-Lifschitz stable models of a ground program. `bound` limits the
// number of default-negated atoms that are guessed.
std::vector<std::set<Atom>> stable_models(const LogicProgram& ground,
                                          std::size_t bound = kDefaultAtomBound);

// ------------------------------------------------------------------ OWL

struct OwlExpr {
  enum class Kind {
    Name,
    ClassAssertion,          // (class, individual)
    ObjectPropertyAssertion, // (property, subject, object)
    SubClassOf,              // (sub, super)
    SomeValuesFrom,          // (property, filler)
    AllValuesFrom,           // (property, filler)
    ComplementOf,            // (class)
    IntersectionOf,          // (class...)
    OneOf,                   // (individual...)
    QualifiedCardinality,    // (property, n, filler)
    CollectionMembership,    // (member, collection)
  };
  Kind kind = Kind::Name;
  std::string name;
  std::vector<OwlExpr> args;

  static OwlExpr leaf(std::string n);
  std::strong_ordering operator<=>(const OwlExpr& o) const;
  bool operator==(const OwlExpr& o) const { return (*this <=> o) == 0; }
};

using OwlAxiom = OwlExpr;

// Deterministic functional-style text, one axiom per call.
std::string to_functional(const OwlExpr& e, const PrefixMap* prefixes = nullptr);
OwlExpr parse_owl_expr(std::string_view text, const PrefixMap* prefixes = nullptr);

struct TranslationPattern {
  std::string id;
  std::vector<Atom> guard;        // positive precondition
  std::vector<Atom> guard_not;    // default-negated precondition
  std::vector<OwlExpr> outputs;
  std::vector<std::string> fresh; // variables that receive Skolem constants
};

// Blocks of:
//   pattern <id>
//   if <atom>, ..., not <atom>
//   emit <axiom>
//   fresh ?c
//   end
std::vector<TranslationPattern> parse_patterns(std::string_view text,
                                               const PrefixMap* prefixes = nullptr);

std::string skolem_name(const std::string& pattern_id, const std::vector<std::pair<std::string, std::string>>& substitution);

std::vector<OwlAxiom> translate_to_owl(const std::set<Atom>& model,
                                       const std::vector<TranslationPattern>& patterns);

struct Dispute {
  std::string disagreement_unit;
  std::string target_unit;
};

struct ConflictReport {
  std::vector<std::pair<Atom, Atom>> classical;  // (p, -p)
  std::vector<Dispute> disputes;
  bool empty() const { return classical.empty() && disputes.empty(); }
};

ConflictReport check_conflicts(const std::set<Atom>& atoms, const VocabularyCatalog& catalog);

}  // namespace su
