#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "generators.hpp"
#include "support.hpp"

using namespace su;

namespace {

const StatementUnit* unit_with_schema(const PartitionResult& p, const std::string& local) {
  for (const auto& u : p.units)
    if (u.schema_class == fx::iri(local)) return &u;
  return nullptr;
}

std::size_t non_identification(const PartitionResult& p) {
  return std::count_if(p.units.begin(), p.units.end(),
                       [](const StatementUnit& u) { return !u.is_identification(); });
}

PartitionResult run(const QuadDataset& ds, const std::vector<StatementSchema>& schemas,
                    std::uint64_t seed = 3) {
  UpriMinter m("https://w3id.org/semunits/unit/", seed);
  return partition(ds, schemas, fx::catalog(), m);
}

}  // namespace

TEST(Schema, HasPartCompiles) {
  auto s = compile_schema(
      "unit <http://example.org/HasPart> anchor <http://purl.obolibrary.org/obo/BFO_0000051>\n"
      "template ?s <http://purl.obolibrary.org/obo/BFO_0000051> ?o\n"
      "arg ?o\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].templates.size(), 1u);
  EXPECT_EQ(s[0].subject_var, "s");
  EXPECT_EQ(s[0].relation, Relation::Qualitative);
}

TEST(Schema, WeightMeasurementIsQuantitative) {
  const auto& all = fx::schemas();
  auto it = std::find_if(all.begin(), all.end(), [](const StatementSchema& s) {
    return s.unit_class == fx::iri("WeightMeasurementStatementUnit");
  });
  ASSERT_NE(it, all.end());
  EXPECT_EQ(it->relation, Relation::Quantitative);
  EXPECT_EQ(it->numeric_args, std::set<std::string>{"n"});
  EXPECT_EQ(it->subject_var, "q");
  EXPECT_EQ(it->templates.size(), 4u);
  EXPECT_EQ(it->templates[it->anchor_index].predicate, fx::obo("OBI_0001937"));
}

TEST(Schema, QuantitativeWithoutNumericSlotFails) {
  try {
    compile_schema(
        "unit <http://example.org/W> anchor <http://example.org/weighs>\n"
        "template ?s <http://example.org/weighs> ?n\narg ?n\nrelation quantitative\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Schema);
  }
}

TEST(Schema, InvariantViolations) {
  const char* bad[] = {
      // no templates
      "unit <http://example.org/A> anchor <http://example.org/p>\n",
      // anchor predicate used by no template
      "unit <http://example.org/A> anchor <http://example.org/p>\ntemplate ?s <http://example.org/q> ?o\n",
      // subject variable missing from the templates
      "unit <http://example.org/A> anchor <http://example.org/p>\ntemplate ?s <http://example.org/p> ?o\nsubject ?z\n",
      // numeric slot on a qualitative schema
      "unit <http://example.org/A> anchor <http://example.org/p>\ntemplate ?s <http://example.org/p> ?o\narg ?o numeric\n",
  };
  for (const char* text : bad) EXPECT_THROW(compile_schema(text), Error) << text;
}

TEST(Schema, GrammarErrors) {
  EXPECT_THROW(compile_schema("template ?s <http://example.org/p> ?o\n"), SyntaxError);
  EXPECT_THROW(compile_schema("unit <http://example.org/A> anchor\n"), SyntaxError);
  EXPECT_THROW(compile_schema("unit <http://example.org/A> anchor <http://example.org/p>\n"
                              "template ?s <http://example.org/p> ?o\nrelation fuzzy\n"),
               SyntaxError);
  EXPECT_THROW(compile_schema("unit :A anchor :p\n"), SyntaxError);
}

TEST(Schema, ManySchemasPerFile) { EXPECT_EQ(fx::schemas().size(), 14u); }

TEST(Partition, EmptyDataLayer) {
  auto p = run(QuadDataset{}, fx::schemas());
  EXPECT_TRUE(p.units.empty());
  EXPECT_TRUE(p.triple_map.empty());
}

TEST(Partition, Fig7SingleHasPartUnit) {
  auto ds = fx::dataset("fig07.trig");
  auto p = run(ds, fx::schemas());
  ASSERT_EQ(p.units.size(), 1u);
  EXPECT_EQ(p.units[0].schema_class, fx::iri("HasPartStatementUnit"));
  EXPECT_EQ(p.units[0].subject, fx::iri("LarsRightHand"));
  EXPECT_EQ(fx::partition_law_violation(ds, p, fx::catalog()), "");
}

TEST(Partition, Fig2WeightGraphHasTwoStatementUnits) {
  auto p = run(fx::dataset("fig02.trig"), fx::schemas());
  EXPECT_EQ(non_identification(p), 2u);
  const auto* q = unit_with_schema(p, "HasQualityStatementUnit");
  const auto* m = unit_with_schema(p, "WeightMeasurementStatementUnit");
  ASSERT_TRUE(q && m);
  EXPECT_EQ(m->subject, fx::iri("weightX"));
  EXPECT_EQ(m->data.size(), 4u);
  EXPECT_EQ(m->relation, Relation::Quantitative);
}

TEST(Partition, IdentificationUnitsOnePerResourceAndKind) {
  auto p = run(fx::dataset("fig09a.trig"), fx::schemas());
  ASSERT_EQ(p.units.size(), 3u);
  EXPECT_EQ(fx::count_class(p, "NamedIndividualIdentificationUnit"), 2u);
  for (const auto& u : p.units)
    if (u.is_identification()) EXPECT_EQ(u.data.size(), 2u);  // type plus label
}

TEST(Partition, UnmatchedTriplesBecomeFallbackUnits) {
  QuadDataset ds;
  ds.add(fx::iri("a"), fx::iri("unknown"), Term::iri(fx::iri("b")), kDefaultGraph);
  ds.add(fx::iri("a"), fx::iri("unknown"), Term::iri(fx::iri("c")), kDefaultGraph);
  auto p = run(ds, fx::schemas());
  EXPECT_EQ(p.fallback_units.size(), 2u);
  EXPECT_EQ(fx::count_class(p, "UntypedStatementUnit"), 2u);
  EXPECT_EQ(fx::partition_law_violation(ds, p, fx::catalog()), "");
}

TEST(Partition, AdjunctIsOptional) {
  auto ds = fx::dataset("travel.trig");
  auto p = run(ds, fx::schemas());
  const auto* t = unit_with_schema(p, "TravelStatementUnit");
  ASSERT_TRUE(t);
  EXPECT_TRUE(t->adjuncts_present);
  EXPECT_EQ(t->data.size(), 4u);

  QuadDataset less;
  for (const auto& q : ds)
    if (q.predicate != fx::iri("on")) less.add(q);
  auto r = run(less, fx::schemas());
  const auto* u = unit_with_schema(r, "TravelStatementUnit");
  ASSERT_TRUE(u);
  EXPECT_FALSE(u->adjuncts_present);
  EXPECT_EQ(u->data.size(), 3u);
}

TEST(Partition, EqualRankOverlapIsAnError) {
  // Two matches of one schema share the q triple and rank equally.
  auto schemas = compile_schema(
      "unit <http://example.org/A> anchor <http://example.org/p>\n"
      "template ?s <http://example.org/p> ?o\ntemplate ?s <http://example.org/q> ?x\n");
  QuadDataset ds;
  ds.add(fx::iri("s"), fx::iri("p"), Term::iri(fx::iri("o1")), kDefaultGraph);
  ds.add(fx::iri("s"), fx::iri("p"), Term::iri(fx::iri("o2")), kDefaultGraph);
  ds.add(fx::iri("s"), fx::iri("q"), Term::iri(fx::iri("x")), kDefaultGraph);
  try {
    run(ds, schemas);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlapConflict);
  }
}

TEST(Partition, ClassIriBreaksTies) {
  auto schemas = compile_schema(
      "unit <http://example.org/B> anchor <http://example.org/p>\n"
      "template ?s <http://example.org/p> ?o\n\n"
      "unit <http://example.org/A> anchor <http://example.org/p>\n"
      "template ?s <http://example.org/p> ?o\n");
  QuadDataset ds;
  ds.add(fx::iri("s"), fx::iri("p"), Term::iri(fx::iri("o")), kDefaultGraph);
  auto r = run(ds, schemas);
  ASSERT_EQ(r.units.size(), 1u);
  EXPECT_EQ(r.units[0].schema_class, fx::iri("A"));
}

TEST(Partition, LargerMatchWins) {
  auto schemas = compile_schema(
      "unit <http://example.org/Small> anchor <http://example.org/p>\n"
      "template ?s <http://example.org/p> ?o\n\n"
      "unit <http://example.org/Big> anchor <http://example.org/p>\n"
      "template ?s <http://example.org/p> ?o\ntemplate ?s <http://example.org/q> ?x\n");
  QuadDataset ds;
  ds.add(fx::iri("s"), fx::iri("p"), Term::iri(fx::iri("o")), kDefaultGraph);
  ds.add(fx::iri("s"), fx::iri("q"), Term::iri(fx::iri("x")), kDefaultGraph);
  auto p = run(ds, schemas);
  ASSERT_EQ(p.units.size(), 1u);
  EXPECT_EQ(p.units[0].schema_class, fx::iri("Big"));
}

TEST(Partition, ExistingUnitGraphsAreKept) {
  auto ds = fx::dataset("fig17.trig");
  auto p = run(ds, fx::schemas());
  ASSERT_EQ(p.units.size(), 2u);
  ASSERT_TRUE(p.find(fx::iri("u17b")));
  EXPECT_TRUE(p.find(fx::iri("u17b"))->has_class(fx::su_term("NegationUnit")));
  EXPECT_EQ(fx::partition_law_violation(ds, p, fx::catalog()), "");
}

TEST(Partition, LawHoldsOnEveryFixture) {
  for (const auto& f : fx::figure_fixtures()) {
    auto ds = fx::dataset(f);
    EXPECT_EQ(fx::partition_law_violation(ds, run(ds, fx::schemas()), fx::catalog()), "") << f;
  }
}

TEST(Partition, LawHoldsOnRandomInstantiations) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = gen::random_corpus(rng, 200);
    auto schemas = compile_schema(g.schema_text);
    auto p = run(g.data, schemas);
    ASSERT_EQ(fx::partition_law_violation(g.data, p, fx::catalog()), "") << "trial " << trial;
  }
}

TEST(Partition, InsertionOrderIrrelevantWithSeed) {
  std::mt19937_64 rng(77);
  auto g = gen::random_corpus(rng, 150);
  auto schemas = compile_schema(g.schema_text);
  std::vector<Quad> quads(g.data.begin(), g.data.end());
  std::shuffle(quads.begin(), quads.end(), rng);
  QuadDataset shuffled;
  for (const auto& q : quads) shuffled.add(q);
  auto a = run(g.data, schemas, 9).to_dataset();
  auto b = run(shuffled, schemas, 9).to_dataset();
  EXPECT_EQ(serialize_quads(a, Syntax::NQuads), serialize_quads(b, Syntax::NQuads));
}

TEST(Partition, EveryUnitHasOneSubjectQuad) {
  for (const auto& f : fx::figure_fixtures()) {
    auto g = fx::process(f);
    for (const auto& u : g.partition.units) {
      std::size_t n = 0;
      for (const auto& q : g.dataset)
        n += q.subject == u.upri && q.predicate == fx::su_term("hasSemanticUnitSubject");
      EXPECT_EQ(n, 1u) << f << " " << u.upri;
    }
  }
}

TEST(Classify, Fig9aIsQualitativeAssertional) {
  auto g = fx::process("fig09a.trig");
  const auto* u = unit_with_schema(g.partition, "HasPartStatementUnit");
  ASSERT_TRUE(u);
  auto c = classify_unit(*u, g.dataset, fx::catalog());
  EXPECT_EQ(c.relation, Relation::Qualitative);
  EXPECT_EQ(c.category, SubjectCategory::Assertional);
  EXPECT_TRUE(c.markers.empty());
}

TEST(Classify, Fig9cIsUniversal) {
  auto g = fx::process("fig09c.trig");
  const auto* u = unit_with_schema(g.partition, "HasPartStatementUnit");
  ASSERT_TRUE(u);
  EXPECT_EQ(classify_unit(*u, g.dataset, fx::catalog()).category, SubjectCategory::Universal);
  EXPECT_TRUE(u->has_class(fx::su_term("UniversalStatementUnit")));
}

TEST(Classify, Fig9bIsContingent) {
  auto g = fx::process("fig09b.trig");
  const auto* u = unit_with_schema(g.partition, "HasPartStatementUnit");
  ASSERT_TRUE(u);
  EXPECT_EQ(classify_unit(*u, g.dataset, fx::catalog()).category, SubjectCategory::Contingent);
}

TEST(Classify, Fig2MeasurementIsQuantitativeAssertional) {
  auto g = fx::process("fig02.trig");
  const auto* u = unit_with_schema(g.partition, "WeightMeasurementStatementUnit");
  ASSERT_TRUE(u);
  auto c = classify_unit(*u, g.dataset, fx::catalog());
  EXPECT_EQ(c.relation, Relation::Quantitative);
  EXPECT_EQ(c.category, SubjectCategory::Assertional);
}

TEST(Classify, MarkersFromUnitClasses) {
  auto g = fx::process("fig17.trig");
  auto c = classify_unit(*g.partition.find(fx::iri("u17b")), g.dataset, fx::catalog());
  EXPECT_EQ(c.markers, std::set<std::string>{"negation"});
  auto h = fx::process("fig20.trig");
  std::size_t card = 0;
  for (const auto& u : h.partition.units)
    card += classify_unit(u, h.dataset, fx::catalog()).markers.count("cardinality");
  EXPECT_EQ(card, 1u);
}

TEST(Classify, UnresolvableSubject) {
  auto g = fx::process("fig07.trig");
  try {
    classify_unit(g.partition.units[0], g.dataset, fx::catalog());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnresolvedSubject);
  }
}

TEST(Classify, AxesAreExclusiveOnEveryUnit) {
  const std::string cats[] = {fx::su_term("AssertionalStatementUnit"),
                              fx::su_term("ContingentStatementUnit"),
                              fx::su_term("UniversalStatementUnit")};
  for (const auto& f : fx::figure_fixtures()) {
    if (f == "fig07.trig") continue;  // untyped subject, no category
    auto g = fx::process(f);
    for (const auto& u : g.partition.units) {
      int n = 0;
      for (const auto& c : cats) n += u.has_class(c);
      EXPECT_EQ(n, 1) << f << " " << u.upri;
    }
  }
}

TEST(Labels, Fig9aHasPart) {
  auto g = fx::process("fig09a.trig");
  const auto* u = unit_with_schema(g.partition, "HasPartStatementUnit");
  ASSERT_TRUE(u);
  auto l = render_dynamic_label(*u, g.dataset, fx::catalog());
  EXPECT_EQ(l.text, "Lars' right hand has part Lars' right thumb");
  EXPECT_TRUE(l.warnings.empty());
}

TEST(Labels, TravelTemplate) {
  auto g = fx::process("travel.trig");
  const auto* u = unit_with_schema(g.partition, "TravelStatementUnit");
  ASSERT_TRUE(u);
  EXPECT_EQ(render_dynamic_label(*u, g.dataset, fx::catalog()).text,
            "Carla travels by train from Paris to Berlin on the 29th of June 2022");
}

TEST(Labels, MissingLabelFallsBackToLocalName) {
  auto g = fx::process("fig07.trig");
  auto l = render_dynamic_label(g.partition.units[0], g.dataset, fx::catalog());
  EXPECT_EQ(l.text, "LarsRightHand has part LarsRightThumb");
  EXPECT_EQ(l.warnings.size(), 2u);
}

TEST(Labels, VerbatimAndUnbound) {
  StatementUnit u;
  u.label_template = "no placeholders here";
  EXPECT_EQ(render_dynamic_label(u, QuadDataset{}, fx::catalog()).text, "no placeholders here");
  u.label_template = "{ghost} walks";
  try {
    render_dynamic_label(u, QuadDataset{}, fx::catalog());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundPlaceholder);
  }
}

TEST(Labels, NeverThrowOnIdentifiedFixtures) {
  for (const auto& f : fx::figure_fixtures()) {
    auto g = fx::process(f);
    for (const auto& u : g.partition.units)
      EXPECT_NO_THROW(render_dynamic_label(u, g.dataset, fx::catalog())) << f;
  }
}
