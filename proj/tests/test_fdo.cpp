#include <gtest/gtest.h>

#include <functional>
#include <unordered_set>

#include "semunits/fdo.hpp"
#include "support.hpp"

using namespace su;

namespace {

const char* kNow = "2026-01-01T00:00:00Z";
const char* kNs = "https://w3id.org/semunits/unit/";

ProvenanceRecord prov() {
  ProvenanceRecord r;
  r.creator = "https://orcid.org/0000-0002-0000-0001";
  r.created = "2022-06-29";
  r.application = "semunits";
  r.title = "a unit";
  r.contributors = {"https://orcid.org/0000-0002-0000-0003", "https://orcid.org/0000-0002-0000-0002"};
  r.last_updated = "2023-01-02T10:00:00Z";
  return r;
}

ProvenanceRecord sorted(ProvenanceRecord r) {
  std::sort(r.contributors.begin(), r.contributors.end());
  return r;
}

void expect_code(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

Nanopublication fig7_nanopub() {
  auto g = fx::process("fig07.trig");
  const StatementUnit* u = nullptr;
  for (const auto& s : g.partition.units)
    if (!s.is_identification()) u = &s;
  return emit_nanopublication(unit_record(*u, fx::catalog()), prov(), prov(), fx::catalog(), kNow);
}

// Statement units of a given class.
std::size_t with_class(const std::vector<StatementUnit>& units, const std::string& c) {
  std::size_t n = 0;
  for (const auto& u : units) n += u.has_class(c);
  return n;
}

}  // namespace

TEST(Mint, SeededSequenceRepeats) {
  UpriMinter a(kNs, 42), b(kNs, 42);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a.mint(), b.mint());
  EXPECT_EQ(mint_upri(kNs, 3), mint_upri(kNs, 3));
}

TEST(Mint, StreamsAndSeedsDiffer) {
  UpriMinter a(kNs, 1, "partition"), b(kNs, 1, "compound"), c(kNs, 2, "partition");
  std::string x = a.mint();
  EXPECT_NE(x, b.mint());
  EXPECT_NE(x, c.mint());
}

TEST(Mint, UnseededMintsAreDistinct) {
  EXPECT_NE(mint_upri(kNs), mint_upri(kNs));
  UpriMinter m(kNs);
  EXPECT_FALSE(m.seeded());
  EXPECT_NE(m.mint(), m.mint());
}

TEST(Mint, TenThousandWithoutCollision) {
  for (std::optional<std::uint64_t> seed : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{9}}) {
    UpriMinter m(kNs, seed);
    std::unordered_set<std::string> seen;
    for (int i = 0; i < 10000; ++i) {
      std::string u = m.mint();
      EXPECT_EQ(u.rfind(kNs, 0), 0u);
      seen.insert(u);
    }
    EXPECT_EQ(seen.size(), 10000u);
  }
}

TEST(Mint, MalformedNamespace) {
  expect_code(ErrorCode::MalformedNamespace, [] { UpriMinter m("not an iri/"); });
  expect_code(ErrorCode::MalformedNamespace, [] { mint_upri("https://example.org/noslash"); });
}

TEST(Provenance, Timestamps) {
  EXPECT_EQ(parse_timestamp("1970-01-01"), 0);
  EXPECT_EQ(parse_timestamp("1970-01-02T00:00:00Z"), 86400);
  EXPECT_EQ(parse_timestamp("1970-01-01T01:00:00+01:00"), 0);
  EXPECT_FALSE(parse_timestamp("2022-13-01").has_value());
  EXPECT_FALSE(parse_timestamp("yesterday").has_value());
  EXPECT_TRUE(parse_timestamp(current_timestamp()).has_value());
}

TEST(Provenance, MandatoryFields) {
  auto r = prov();
  r.creator.clear();
  expect_code(ErrorCode::MissingProvenance, [&] { validate_provenance(r, kNow); });
  r = prov();
  r.created.clear();
  expect_code(ErrorCode::MissingProvenance, [&] { validate_provenance(r, kNow); });
  r = ProvenanceRecord{};
  r.creator = prov().creator;
  r.created = "2020-01-01";
  EXPECT_NO_THROW(validate_provenance(r, kNow));
}

TEST(Provenance, FutureDatesRejected) {
  auto r = prov();
  r.created = "2030-01-01";
  expect_code(ErrorCode::FutureDate, [&] { validate_provenance(r, kNow); });
  r = prov();
  r.last_updated = "2026-01-01T00:00:01Z";
  expect_code(ErrorCode::FutureDate, [&] { validate_provenance(r, kNow); });
}

TEST(Nanopub, Fig7AssertionIsTheHasPartGraph) {
  auto n = fig7_nanopub();
  auto assertion = n.quads.graph(n.assertion_graph);
  ASSERT_EQ(assertion.size(), 1u);
  EXPECT_EQ(assertion[0].subject, fx::iri("LarsRightHand"));
  EXPECT_EQ(assertion[0].object.value, fx::iri("LarsRightThumb"));
}

TEST(Nanopub, FourGraphsAndHeadLinksAll) {
  auto n = fig7_nanopub();
  EXPECT_EQ(n.quads.graph_names(),
            (std::set<std::string>{n.head_graph, n.assertion_graph, n.provenance_graph, n.pubinfo_graph}));
  auto head = n.quads.graph(n.head_graph);
  std::set<std::string> linked;
  for (const auto& q : head)
    if (q.subject == n.upri && q.predicate != fx::catalog().type()) linked.insert(q.object.value);
  EXPECT_EQ(linked, (std::set<std::string>{n.assertion_graph, n.provenance_graph, n.pubinfo_graph}));
  EXPECT_NE(n.assertion_graph.find("https://w3id.org/semunits/unit/"), std::string::npos);
}

TEST(Nanopub, ItemUnitHasEmptyAssertion) {
  auto g = fx::process("fig16.trig");
  ASSERT_FALSE(g.compounds.items.empty());
  const auto& item = g.compounds.items.front();
  auto n = emit_nanopublication(unit_record(item, fx::catalog()), prov(), prov(), fx::catalog(), kNow);
  EXPECT_FALSE(n.quads.has_graph(n.assertion_graph));
  std::set<std::string> listed;
  for (const auto& q : n.quads.graph(n.head_graph))
    if (q.predicate == fx::su_term("hasAssociatedSemanticUnit")) listed.insert(q.object.value);
  EXPECT_EQ(listed, std::set<std::string>(item.associated.begin(), item.associated.end()));
  auto back = parse_nanopublication(n.quads, fx::catalog());
  EXPECT_TRUE(back.unit.data.empty());
  EXPECT_EQ(back.unit.associated, item.associated);
}

TEST(Nanopub, PubinfoRecordsSchema) {
  auto n = fig7_nanopub();
  bool found = false;
  for (const auto& q : n.quads.graph(n.pubinfo_graph)) found |= q.predicate == meta::kSchema;
  EXPECT_TRUE(found);
}

TEST(Nanopub, RoundTripEveryUnitOfEveryFixture) {
  std::set<std::string> kinds;
  for (const auto& f : fx::figure_fixtures()) {
    auto g = fx::process(f);
    std::vector<UnitRecord> records;
    for (const auto& u : g.partition.units) records.push_back(unit_record(u, fx::catalog()));
    for (const auto* c : g.compounds.all()) records.push_back(unit_record(*c, fx::catalog()));
    for (const auto& r : records) {
      kinds.insert(r.schema);
      auto n = emit_nanopublication(r, prov(), prov(), fx::catalog(), kNow);
      auto back = parse_nanopublication(n.quads, fx::catalog());
      EXPECT_EQ(back.upri, n.upri);
      EXPECT_EQ(back.unit, r) << f << " " << r.upri;
      EXPECT_EQ(back.provenance, sorted(prov()));
      EXPECT_EQ(back.pubinfo, sorted(prov()));
    }
  }
  EXPECT_GE(kinds.size(), 10u);
}

TEST(Nanopub, BulkEmissionSplitsBack) {
  auto g = fx::process("fig16.trig");
  auto all = emit_all_nanopublications(g, prov(), prov(), fx::catalog(), kNow);
  auto parsed = parse_nanopublications(all, fx::catalog());
  EXPECT_EQ(parsed.size(), g.partition.units.size() + g.compounds.all().size());
}

TEST(Nanopub, MissingProvenanceGraph) {
  auto n = fig7_nanopub();
  for (const auto& q : n.quads.graph(n.provenance_graph)) n.quads.erase(q);
  expect_code(ErrorCode::MissingGraph, [&] { parse_nanopublication(n.quads, fx::catalog()); });
  QuadDataset none;
  expect_code(ErrorCode::MissingGraph, [&] { parse_nanopublication(none, fx::catalog()); });
}

TEST(Nanopub, DanglingHeadReference) {
  auto n = fig7_nanopub();
  Quad link{n.upri, np::kHasProvenance, Term::iri(n.provenance_graph), n.head_graph};
  ASSERT_TRUE(n.quads.erase(link));
  link.object = Term::iri(n.upri + "/elsewhere");
  n.quads.add(link);
  expect_code(ErrorCode::DanglingReference, [&] { parse_nanopublication(n.quads, fx::catalog()); });
}

TEST(Nanopub, AssertionNameMismatch) {
  auto n = fig7_nanopub();
  QuadDataset moved;
  for (const auto& q : n.quads) {
    Quad c = q;
    if (c.graph == n.assertion_graph) c.graph = n.upri + "/assertion";
    if (c.object.is_iri() && c.object.value == n.assertion_graph && c.predicate == np::kHasAssertion)
      c.object = Term::iri(n.upri + "/assertion");
    moved.add(c);
  }
  expect_code(ErrorCode::AssertionMismatch, [&] { parse_nanopublication(moved, fx::catalog()); });
}

TEST(Nanopub, EmissionValidatesProvenance) {
  auto g = fx::process("fig07.trig");
  auto r = unit_record(g.partition.units.front(), fx::catalog());
  auto p = prov();
  p.creator.clear();
  expect_code(ErrorCode::MissingProvenance,
              [&] { emit_nanopublication(r, p, prov(), fx::catalog(), kNow); });
}

TEST(Policy, ParsesFixture) {
  auto pol = parse_policy(fx::text("policy.txt"), &fx::catalog().prefixes());
  ASSERT_EQ(pol.rules.size(), 2u);
  EXPECT_FALSE(pol.rules[0].allow);
  EXPECT_EQ(pol.rules[0].unit_class, fx::iri("LocationStatementUnit"));
  ASSERT_EQ(pol.rules[0].conditions.size(), 2u);
  EXPECT_EQ(pol.rules[0].conditions[0].path,
            (std::vector<std::string>{fx::iri("ofSpecies"), fx::iri("threatStatus")}));
  EXPECT_EQ(pol.rules[0].conditions[1].kind, PolicyCondition::Kind::RequesterNot);
  EXPECT_TRUE(pol.rules[1].allow);
  EXPECT_EQ(pol.rules[1].unit_class, "*");
}

TEST(Policy, Errors) {
  const auto* pm = &fx::catalog().prefixes();
  expect_code(ErrorCode::Policy, [&] { parse_policy("permit *\n", pm); });
  expect_code(ErrorCode::Policy, [&] { parse_policy("deny nope:X\n", pm); });
  expect_code(ErrorCode::Policy, [&] { parse_policy("deny * if colour red\n", pm); });
  EXPECT_TRUE(parse_policy("# only a comment\n\n", pm).rules.empty());
}

TEST(Policy, EndangeredLocationsHidden) {
  auto g = fx::process("endangered.trig");
  auto pol = parse_policy(fx::text("policy.txt"), &fx::catalog().prefixes());
  auto v = apply_access_policy(g.partition.units, g.compounds.all(), pol, {}, g.dataset);
  const std::string loc = fx::iri("LocationStatementUnit");
  EXPECT_EQ(with_class(g.partition.units, loc), 3u);
  EXPECT_EQ(v.hidden.size(), 2u);
  std::set<std::string> hidden_subjects;
  for (const auto& u : g.partition.units) {
    if (!v.hidden.count(u.upri)) continue;
    EXPECT_TRUE(u.has_class(loc));
    hidden_subjects.insert(u.subject);
  }
  EXPECT_EQ(hidden_subjects, (std::set<std::string>{fx::iri("occ1"), fx::iri("occ2")}));
  EXPECT_EQ(v.statements.size(), g.partition.units.size() - 2);
  // The occurrences themselves stay visible through their other units.
  for (const auto& s : hidden_subjects) {
    std::size_t other = 0;
    for (const auto& u : v.statements) other += u.subject == s;
    EXPECT_GE(other, 2u) << s;
  }
  // Compound units keep the association but mark it opaque.
  std::size_t opaque = 0;
  for (const auto& c : v.compounds)
    for (const auto& o : c.opaque) {
      EXPECT_TRUE(v.hidden.count(o));
      EXPECT_TRUE(c.has(o));
      ++opaque;
    }
  EXPECT_GT(opaque, 0u);
}

TEST(Policy, HiddenQuadsNeverSerialized) {
  auto g = fx::process("endangered.trig");
  auto pol = parse_policy(fx::text("policy.txt"), &fx::catalog().prefixes());
  auto v = apply_access_policy(g.partition.units, g.compounds.all(), pol, {}, g.dataset);
  auto out = visible_dataset(v, fx::catalog());
  auto text = serialize_quads(out, Syntax::NQuads);
  auto reparsed = parse_quads(text, Syntax::NQuads);
  for (const auto& u : g.partition.units) {
    if (!v.hidden.count(u.upri)) continue;
    for (const auto& q : u.data) {
      for (const auto& r : reparsed)
        EXPECT_FALSE(r.subject == q.subject && r.predicate == q.predicate && r.object == q.object)
            << q.subject << " " << q.predicate;
    }
    EXPECT_FALSE(reparsed.has_graph(u.upri));
  }
  EXPECT_NE(text.find("Sierra Morena"), std::string::npos);
}

TEST(Policy, CuratorSeesEverything) {
  auto g = fx::process("endangered.trig");
  auto pol = parse_policy(fx::text("policy.txt"), &fx::catalog().prefixes());
  auto v = apply_access_policy(g.partition.units, g.compounds.all(), pol, {{"role", "curator"}},
                               g.dataset);
  EXPECT_TRUE(v.hidden.empty());
  EXPECT_EQ(v.statements.size(), g.partition.units.size());
}

TEST(Policy, EmptyPolicyIsIdentity) {
  for (const auto& f : fx::figure_fixtures()) {
    auto g = fx::process(f);
    auto v = apply_access_policy(g.partition.units, g.compounds.all(), AccessPolicy{}, {}, g.dataset);
    EXPECT_TRUE(v.hidden.empty());
    ASSERT_EQ(v.statements.size(), g.partition.units.size());
    for (std::size_t i = 0; i < v.statements.size(); ++i)
      EXPECT_EQ(v.statements[i].upri, g.partition.units[i].upri);
    for (const auto& c : v.compounds) EXPECT_TRUE(c.opaque.empty());
  }
}

TEST(Policy, DenyClassCountingAndMonotonicity) {
  for (const auto& f : fx::figure_fixtures()) {
    auto g = fx::process(f);
    std::set<std::string> classes;
    for (const auto& u : g.partition.units) classes.insert(u.classes.begin(), u.classes.end());
    AccessPolicy acc;
    std::size_t last = g.partition.units.size();
    for (const auto& c : classes) {
      AccessPolicy one;
      one.rules.push_back(PolicyRule{false, c, {}, 1});
      auto v = apply_access_policy(g.partition.units, g.compounds.all(), one, {}, g.dataset);
      EXPECT_EQ(v.statements.size(), g.partition.units.size() - with_class(g.partition.units, c))
          << f << " " << c;
      acc.rules.push_back(PolicyRule{false, c, {}, acc.rules.size() + 1});
      auto w = apply_access_policy(g.partition.units, g.compounds.all(), acc, {}, g.dataset);
      EXPECT_LE(w.statements.size(), last);
      last = w.statements.size();
    }
  }
}

TEST(Policy, FirstMatchWins) {
  auto g = fx::process("endangered.trig");
  AccessPolicy p;
  p.rules.push_back(PolicyRule{true, "*", {}, 1});
  p.rules.push_back(PolicyRule{false, "*", {}, 2});
  auto v = apply_access_policy(g.partition.units, g.compounds.all(), p, {}, g.dataset);
  EXPECT_TRUE(v.hidden.empty());
  std::swap(p.rules[0], p.rules[1]);
  v = apply_access_policy(g.partition.units, g.compounds.all(), p, {}, g.dataset);
  EXPECT_TRUE(v.statements.empty());
}
