// semunits: command-line front end for the semantic-units pipeline.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semunits/pipeline.hpp"

namespace {

struct Options {
  std::vector<std::string> inputs;
  std::string right;
  std::string catalog;
  std::string schemas;
  std::vector<std::string> rules;
  std::vector<std::string> patterns;
  std::string policy;
  std::string ns = "https://w3id.org/semunits/unit/";
  std::optional<std::uint64_t> seed;
  std::string out = "semunits-out";
  std::size_t bound = su::kDefaultAtomBound;
  std::vector<std::string> requester;
  std::string creator;
  std::string created;
  std::string application = "semunits";
  std::string title;
  std::string now;
};

enum Exit { kOk = 0, kUsage = 1, kData = 2, kBound = 3 };

// Everything a command needs, loaded once.
struct Context {
  const Options& opt;
  su::VocabularyCatalog catalog;
  std::vector<su::StatementSchema> schemas;
  su::QuadDataset input;
  std::map<std::string, std::string> artifacts;  // file name -> contents
  std::string summary;

  explicit Context(const Options& o)
      : opt(o),
        catalog(o.catalog.empty() ? su::VocabularyCatalog::defaults()
                                  : su::VocabularyCatalog::load(su::read_file(o.catalog))) {
    if (!o.schemas.empty()) schemas = su::compile_schema(su::read_file(o.schemas), &catalog.prefixes());
    for (const auto& path : o.inputs) input.merge(su::load_dataset(su::read_file(path), path));
  }

  const su::PrefixMap* prefixes() const { return &catalog.prefixes(); }

  su::ProcessedGraph process(const su::QuadDataset& ds) const {
    return su::process_graph(ds, schemas, catalog, opt.ns, opt.seed);
  }

  std::string trig(const su::QuadDataset& ds) const {
    return su::serialize_quads(ds, su::Syntax::TriG, prefixes());
  }

  void add(const std::string& key, std::size_t v) {
    summary += key + "=" + std::to_string(v) + "\n";
  }
};

void run_ingest(Context& c) {
  c.artifacts["ingest.nq"] = su::serialize_quads(c.input, su::Syntax::NQuads);
  c.add("quads", c.input.size());
  c.add("graphs", c.input.graph_names().size());
}

void run_partition(Context& c, const su::ProcessedGraph& g) {
  c.artifacts["partition.trig"] = c.trig(su::partition_dataset(g.partition));
}

void run_compound(Context& c, const su::ProcessedGraph& g) {
  c.artifacts["compound.trig"] = c.trig(g.dataset);
  c.artifacts["compound.txt"] = su::compound_report(g.compounds);
}

void run_label(Context& c, const su::ProcessedGraph& g) {
  std::vector<std::string> warnings;
  c.artifacts["labels.txt"] = su::render_labels(g, c.catalog, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  c.add("labels", g.partition.units.size());
  c.add("label_warnings", warnings.size());
}

su::ReasoningResult run_reasoning(Context& c, const su::ProcessedGraph& g) {
  su::LogicProgram rules;
  for (const auto& path : c.opt.rules) {
    auto p = su::parse_program(su::read_file(path), c.prefixes());
    rules.rules.insert(rules.rules.end(), p.rules.begin(), p.rules.end());
  }
  std::vector<su::TranslationPattern> patterns;
  for (const auto& path : c.opt.patterns) {
    auto p = su::parse_patterns(su::read_file(path), c.prefixes());
    patterns.insert(patterns.end(), p.begin(), p.end());
  }
  return su::reason(g, rules, patterns, c.catalog, c.opt.bound);
}

void run_translate(Context& c, const su::ReasoningResult& r) {
  c.artifacts["axioms.ofn"] = su::format_axioms(r.axioms, c.prefixes());
  c.add("axioms", r.axioms.size());
}

void run_reason(Context& c, const su::ReasoningResult& r) {
  c.artifacts["models.txt"] =
      su::format_models(r.models, c.prefixes()) + su::format_conflicts(r.conflicts, c.prefixes());
  c.add("stable_models", r.models.size());
  c.add("conflicts", r.conflicts.classical.size());
  c.add("disputes", r.conflicts.disputes.size());
}

void run_nanopub(Context& c, const su::ProcessedGraph& g) {
  su::ProvenanceRecord prov;
  prov.creator = c.opt.creator;
  prov.created = c.opt.created;
  prov.application = c.opt.application;
  prov.title = c.opt.title;
  std::string now = c.opt.now.empty() ? su::current_timestamp() : c.opt.now;
  su::QuadDataset np = su::emit_all_nanopublications(g, prov, prov, c.catalog, now);
  c.artifacts["nanopubs.trig"] = c.trig(np);
  c.add("nanopublications", g.partition.units.size() + g.compounds.all().size());
}

void run_align(Context& c, const su::ProcessedGraph& g) {
  if (c.opt.right.empty()) throw CLI::ValidationError("align", "--right is required");
  su::QuadDataset right = su::load_dataset(su::read_file(c.opt.right), c.opt.right);
  su::ProcessedGraph h = c.process(right);
  su::AlignmentReport rep = su::align_graphs(g, h, c.catalog);
  c.artifacts["alignment.txt"] = su::format_report(rep);
  std::size_t exact = 0;
  for (const auto& x : rep.correspondences) exact += x.exact();
  c.add("correspondences", rep.correspondences.size());
  c.add("exact_correspondences", exact);
}

void run_acl(Context& c, const su::ProcessedGraph& g) {
  su::AccessPolicy policy;
  if (!c.opt.policy.empty()) policy = su::parse_policy(su::read_file(c.opt.policy), c.prefixes());
  su::RequesterContext who;
  for (const auto& kv : c.opt.requester) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--requester", "expected key=value");
    who[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  su::VisibleUnits v =
      su::apply_access_policy(g.partition.units, g.compounds.all(), policy, who, g.dataset);
  c.artifacts["visible.trig"] = c.trig(su::visible_dataset(v, c.catalog));
  c.add("visible_units", v.statements.size());
  c.add("hidden_units", v.hidden.size());
}

int execute(const std::string& command, const Options& opt) {
  Context c(opt);
  if (command == "ingest") {
    run_ingest(c);
  } else {
    su::ProcessedGraph g = c.process(c.input);
    c.summary += su::summary(g);
    if (command == "partition") {
      run_partition(c, g);
    } else if (command == "compound") {
      run_compound(c, g);
    } else if (command == "label") {
      run_label(c, g);
    } else if (command == "translate") {
      run_translate(c, run_reasoning(c, g));
    } else if (command == "reason") {
      run_reason(c, run_reasoning(c, g));
    } else if (command == "nanopub") {
      run_nanopub(c, g);
    } else if (command == "align") {
      run_align(c, g);
    } else if (command == "acl") {
      run_acl(c, g);
    } else if (command == "pipeline") {
      run_ingest(c);
      run_partition(c, g);
      run_compound(c, g);
      run_label(c, g);
      auto r = run_reasoning(c, g);
      run_translate(c, r);
      run_reason(c, r);
      if (!opt.creator.empty()) run_nanopub(c, g);
      if (!opt.right.empty()) run_align(c, g);
      run_acl(c, g);
    }
  }
  // Nothing reaches the disk until every stage has succeeded.
  std::string dir = opt.out;
  if (const char* env = std::getenv("SEMUNITS_OUT"); env && *env) dir = env;
  for (const auto& [name, text] : c.artifacts) su::write_file_atomic(dir + "/" + name, text);
  std::cout << c.summary;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Organize RDF knowledge graphs into semantic units"};
  app.set_config("--config", "", "TOML or INI file with option defaults, one [command] section each");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Options opt;

  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec commands[] = {
      {"ingest", "parse inputs and write them as N-Quads"},
      {"partition", "partition the data layer into statement units"},
      {"compound", "build compound units"},
      {"label", "render dynamic labels of statement units"},
      {"translate", "translate units into OWL axioms"},
      {"reason", "compute stable models of the unit facts and rules"},
      {"nanopub", "package every unit as a nanopublication"},
      {"align", "align the input graph with --right"},
      {"acl", "apply an access policy and write the visible units"},
      {"pipeline", "run every stage"},
  };
  std::optional<std::uint64_t> seed_value;
  for (const auto& s : commands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("inputs", opt.inputs, "TriG or N-Quads files")->required()->check(CLI::ExistingFile);
    sub->add_option("--catalog", opt.catalog, "vocabulary catalog file")->check(CLI::ExistingFile);
    sub->add_option("--schemas", opt.schemas, "statement unit schema file")->check(CLI::ExistingFile);
    sub->add_option("--rules", opt.rules, "logic program files")->check(CLI::ExistingFile);
    sub->add_option("--patterns", opt.patterns, "translation pattern files")->check(CLI::ExistingFile);
    sub->add_option("--policy", opt.policy, "access policy file")->check(CLI::ExistingFile);
    sub->add_option("--right", opt.right, "second graph for alignment")->check(CLI::ExistingFile);
    sub->add_option("--ns", opt.ns, "namespace for minted UPRIs");
    sub->add_option("--seed", seed_value, "seed for reproducible UPRIs");
    sub->add_option("--out", opt.out, "output directory (SEMUNITS_OUT overrides)");
    sub->add_option("--bound", opt.bound, "limit on guessed default-negated atoms")
        ->check(CLI::PositiveNumber);
    sub->add_option("--requester", opt.requester, "requester attribute key=value");
    sub->add_option("--creator", opt.creator, "creator IRI for nanopublications");
    sub->add_option("--created", opt.created, "creation date for nanopublications");
    sub->add_option("--application", opt.application, "creating application");
    sub->add_option("--title", opt.title, "title recorded in provenance");
    sub->add_option("--now", opt.now, "reference time for date checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  opt.seed = seed_value;
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "semunits: " << e.what() << "\n";
    return kUsage;
  } catch (const su::Error& e) {
    std::cerr << "semunits: " << su::to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == su::ErrorCode::BoundExceeded ? kBound : kData;
  } catch (const std::exception& e) {
    std::cerr << "semunits: " << e.what() << "\n";
    return kData;
  }
}
