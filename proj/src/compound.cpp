#include "semunits/compound.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace su {

const char* to_string(CompoundKind k) {
  switch (k) {
    case CompoundKind::TypedStatement: return "typed-statement";
    case CompoundKind::QualityMeasurement: return "quality-measurement";
    case CompoundKind::Item: return "item";
    case CompoundKind::ItemGroup: return "item-group";
    case CompoundKind::GranularityTree: return "granularity-tree";
    case CompoundKind::GranularItemGroup: return "granular-item-group";
    case CompoundKind::Context: return "context";
    case CompoundKind::Dataset: return "dataset";
    case CompoundKind::List: return "list";
  }
  return "?";
}

const char* to_string(Subkind k) {
  switch (k) {
    case Subkind::None: return "";
    case Subkind::Instance: return "instance";
    case Subkind::Class: return "class";
    case Subkind::TextHybrid: return "text-hybrid";
    case Subkind::ClassAxiom: return "class-axiom";
    case Subkind::Ordered: return "ordered";
    case Subkind::Unordered: return "unordered";
    case Subkind::Set: return "set";
  }
  return "?";
}

void CompoundUnit::associate(const std::string& upri) {
  auto it = std::lower_bound(associated.begin(), associated.end(), upri);
  if (it == associated.end() || *it != upri) associated.insert(it, upri);
}

bool CompoundUnit::has(const std::string& upri) const {
  return std::binary_search(associated.begin(), associated.end(), upri);
}

std::string CompoundUnit::kind_class_key() const {
  switch (kind) {
    case CompoundKind::TypedStatement: return "TypedStatementUnit";
    case CompoundKind::QualityMeasurement: return "QualityMeasurementUnit";
    case CompoundKind::Item:
      return subkind == Subkind::Class        ? "ClassItemUnit"
             : subkind == Subkind::TextHybrid ? "TextHybridItemUnit"
                                              : "InstanceItemUnit";
    case CompoundKind::ItemGroup:
      return subkind == Subkind::Class        ? "ClassItemGroupUnit"
             : subkind == Subkind::ClassAxiom ? "ClassAxiomItemGroupUnit"
                                              : "InstanceItemGroupUnit";
    case CompoundKind::GranularityTree: return "GranularityTreeUnit";
    case CompoundKind::GranularItemGroup: return "GranularItemGroupUnit";
    case CompoundKind::Context: return "ContextUnit";
    case CompoundKind::Dataset: return "DatasetUnit";
    case CompoundKind::List:
      return subkind == Subkind::Ordered ? "OrderedListUnit"
             : subkind == Subkind::Set   ? "SetUnit"
                                         : "UnorderedListUnit";
  }
  return "";
}

// ---------------------------------------------------------------- registry

UnitRegistry::UnitRegistry(const PartitionResult& p) {
  for (const auto& u : p.units) statements_[u.upri] = &u;
}

void UnitRegistry::add(const CompoundUnit& c) {
  compounds_[c.upri] = c;
  for (const auto& m : compounds_[c.upri].members) statements_[m.upri] = &m;
}

const StatementUnit* UnitRegistry::statement(const std::string& upri) const {
  auto it = statements_.find(upri);
  return it == statements_.end() ? nullptr : it->second;
}

const CompoundUnit* UnitRegistry::compound(const std::string& upri) const {
  auto it = compounds_.find(upri);
  return it == compounds_.end() ? nullptr : &it->second;
}

std::set<std::string> UnitRegistry::statement_members(const std::string& upri) const {
  std::set<std::string> out, seen;
  std::function<void(const std::string&)> walk = [&](const std::string& u) {
    if (!seen.insert(u).second) return;
    if (statement(u)) {
      out.insert(u);
      return;
    }
    if (const auto* c = compound(u))
      for (const auto& a : c->associated) walk(a);
  };
  walk(upri);
  return out;
}

QuadDataset UnitRegistry::data_graph(const std::string& upri) const {
  QuadDataset out;
  for (const auto& s : statement_members(upri)) out.merge(statement(s)->data);
  return out;
}

// ---------------------------------------------------------------- helpers

namespace {

// Resource IRIs a statement unit talks about (subjects and IRI objects).
std::set<std::string> referenced_resources(const StatementUnit& u) {
  std::set<std::string> out;
  for (const auto& q : u.data) {
    out.insert(q.subject);
    if (q.object.is_iri()) out.insert(q.object.value);
  }
  return out;
}

std::vector<std::string> object_arguments(const StatementUnit& u) {
  std::vector<std::string> out;
  for (const auto& o : u.objects)
    if (o.role == UnitObject::Role::Argument && o.term.is_iri()) out.push_back(o.term.value);
  return out;
}

struct UnionFind {
  std::map<std::string, std::string> parent;
  std::string find(const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return x;
    }
    if (it->second == x) return x;
    std::string r = find(it->second);
    parent[x] = r;
    return r;
  }
  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
  }
};

std::map<std::string, std::vector<const StatementUnit*>> identification_index(
    const PartitionResult& p) {
  std::map<std::string, std::vector<const StatementUnit*>> out;
  for (const auto& u : p.units)
    if (u.is_identification()) out[u.subject].push_back(&u);
  return out;
}

std::map<std::string, ResourceKind> subject_kinds(const PartitionResult& p,
                                                  const VocabularyCatalog& catalog) {
  std::map<std::string, ResourceKind> out;
  KindIndex kinds(p.to_dataset(), catalog);
  for (const auto& u : p.units) {
    if (out.count(u.subject)) continue;
    try {
      out[u.subject] = kinds.kind(u.subject);
    } catch (const Error&) {
    }
  }
  return out;
}

bool is_negated(const StatementUnit& u, const VocabularyCatalog& catalog) {
  return u.has_class(catalog.get("NegationUnit"));
}

}  // namespace

// ---------------------------------------------------------------- typed

std::vector<CompoundUnit> build_typed_statement_units(const PartitionResult& p,
                                                      const VocabularyCatalog& catalog,
                                                      UpriMinter& minter) {
  (void)catalog;
  std::vector<CompoundUnit> out;
  auto idents = identification_index(p);
  std::set<std::string> unit_upris;
  for (const auto& u : p.units) unit_upris.insert(u.upri);
  for (const auto& u : p.units) {
    if (u.is_identification()) continue;
    CompoundUnit c;
    c.upri = minter.mint();
    c.kind = CompoundKind::TypedStatement;
    c.reference = u.upri;
    c.subject = u.subject;
    c.associate(u.upri);
    for (const auto& r : referenced_resources(u)) {
      bool is_predicate_only = false;
      for (const auto& q : u.data)
        if (q.predicate == r) is_predicate_only = true;
      auto it = idents.find(r);
      if (it != idents.end()) {
        for (const auto* iu : it->second) c.associate(iu->upri);
      } else if (!unit_upris.count(r) && !is_predicate_only) {
        c.warnings.push_back("no identification unit for " + r);
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------- quality

std::vector<CompoundUnit> build_quality_measurement_units(const std::vector<CompoundUnit>& typed,
                                                          const PartitionResult& p,
                                                          const VocabularyCatalog& catalog,
                                                          UpriMinter& minter) {
  (void)catalog;
  std::vector<CompoundUnit> out;
  std::map<std::string, std::vector<const CompoundUnit*>> quantitative_by_subject;
  for (const auto& t : typed) {
    const auto* ref = p.find(t.reference);
    if (ref && ref->relation == Relation::Quantitative)
      quantitative_by_subject[ref->subject].push_back(&t);
  }
  for (const auto& t : typed) {
    const auto* ref = p.find(t.reference);
    if (!ref || ref->relation != Relation::Qualitative) continue;
    std::vector<const CompoundUnit*> measurements;
    for (const auto& o : object_arguments(*ref)) {
      auto it = quantitative_by_subject.find(o);
      if (it == quantitative_by_subject.end()) continue;
      for (const auto* m : it->second)
        if (std::find(measurements.begin(), measurements.end(), m) == measurements.end())
          measurements.push_back(m);
    }
    if (measurements.empty()) continue;
    CompoundUnit c;
    c.upri = minter.mint();
    c.kind = CompoundKind::QualityMeasurement;
    c.subject = ref->subject;
    c.associate(t.upri);
    for (const auto* m : measurements) {
      c.associate(m->upri);
      c.described_by.emplace_back(t.upri, m->upri);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------- items

namespace {

// Measurement typed units (and their statement units) live only inside
// their quality compound.
std::set<std::string> absorbed_by_quality(const std::vector<CompoundUnit>& typed,
                                          const std::vector<CompoundUnit>& quality) {
  std::map<std::string, const CompoundUnit*> typed_by_upri;
  for (const auto& t : typed) typed_by_upri[t.upri] = &t;
  std::set<std::string> out;
  for (const auto& q : quality) {
    for (const auto& [qual, meas] : q.described_by) {
      out.insert(meas);
      auto it = typed_by_upri.find(meas);
      if (it != typed_by_upri.end()) out.insert(it->second->reference);
    }
  }
  return out;
}

}  // namespace

std::vector<CompoundUnit> build_item_units(const PartitionResult& p,
                                           const std::vector<CompoundUnit>& typed,
                                           const std::vector<CompoundUnit>& quality,
                                           const VocabularyCatalog& catalog, UpriMinter& minter) {
  auto absorbed = absorbed_by_quality(typed, quality);
  std::map<std::string, std::string> typed_of;
  for (const auto& t : typed) typed_of[t.reference] = t.upri;
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& u : p.units) {
    if (u.is_identification() || absorbed.count(u.upri)) continue;
    auto& m = members[u.subject];
    m.push_back(u.upri);
    auto it = typed_of.find(u.upri);
    if (it != typed_of.end()) m.push_back(it->second);
  }
  for (const auto& q : quality) members[*q.subject].push_back(q.upri);
  if (members.empty()) return {};

  auto idents = identification_index(p);
  auto kinds = subject_kinds(p, catalog);
  const auto& desc = catalog.get("description");
  const auto& mentions = catalog.get("mentions");
  std::set<std::string> described, mentioning;
  for (const auto& u : p.units) {
    for (const auto& q : u.data) {
      if (q.predicate == desc && q.object.is_literal()) described.insert(q.subject);
      if (q.predicate == mentions) mentioning.insert(q.subject);
    }
  }
  std::vector<CompoundUnit> out;
  for (const auto& [subject, ms] : members) {
    CompoundUnit c;
    c.upri = minter.mint();
    c.kind = CompoundKind::Item;
    c.subject = subject;
    for (const auto& m : ms) c.associate(m);
    auto it = idents.find(subject);
    if (it != idents.end())
      for (const auto* iu : it->second) c.associate(iu->upri);
    auto k = kinds.find(subject);
    if (described.count(subject) && mentioning.count(subject))
      c.subkind = Subkind::TextHybrid;
    else if (k != kinds.end() &&
             (k->second == ResourceKind::SomeInstance || k->second == ResourceKind::EveryInstance))
      c.subkind = Subkind::Class;
    else
      c.subkind = Subkind::Instance;
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------- groups

std::vector<CompoundUnit> build_item_group_units(const std::vector<CompoundUnit>& items,
                                                 const PartitionResult& p,
                                                 const std::vector<CompoundUnit>& typed,
                                                 const std::vector<CompoundUnit>& quality,
                                                 const VocabularyCatalog& catalog,
                                                 UpriMinter& minter,
                                                 std::vector<ItemLink>* links_out) {
  std::map<std::string, const CompoundUnit*> item_by_subject;
  for (const auto& it : items) item_by_subject[*it.subject] = &it;

  UnionFind uf;
  for (const auto& it : items) uf.find(it.upri);
  std::vector<ItemLink> links;
  for (const auto& u : p.units) {
    if (u.is_identification()) continue;
    auto a = item_by_subject.find(u.subject);
    if (a == item_by_subject.end()) continue;
    for (const auto& o : object_arguments(u)) {
      auto b = item_by_subject.find(o);
      if (b == item_by_subject.end() || b->second == a->second) continue;
      ItemLink l{a->second->upri, b->second->upri, u.upri};
      bool dup = false;
      for (const auto& x : links)
        if (x.from_item == l.from_item && x.to_item == l.to_item) dup = true;
      if (!dup) links.push_back(l);
      uf.unite(l.from_item, l.to_item);
    }
  }

  // Orphans: units that no item reaches.
  UnitRegistry reg(p);
  for (const auto& t : typed) reg.add(t);
  for (const auto& q : quality) reg.add(q);
  for (const auto& it : items) reg.add(it);
  std::set<std::string> covered;
  for (const auto& it : items) {
    covered.insert(it.upri);
    std::function<void(const std::string&)> walk = [&](const std::string& u) {
      if (!covered.insert(u).second) return;
      if (const auto* c = reg.compound(u))
        for (const auto& a : c->associated) walk(a);
    };
    for (const auto& a : it.associated) walk(a);
  }
  std::map<std::string, std::string> resource_item;  // resource -> item upri
  for (const auto& it : items) {
    for (const auto& s : reg.statement_members(it.upri)) {
      for (const auto& r : referenced_resources(*reg.statement(s))) {
        auto [pos, fresh] = resource_item.emplace(r, it.upri);
        if (!fresh && it.upri < pos->second) pos->second = it.upri;
      }
    }
  }
  std::map<std::string, std::vector<std::string>> orphans_by_root;
  auto place_orphan = [&](const std::string& upri, const std::string& subject,
                          const std::set<std::string>& resources) {
    auto s = item_by_subject.find(subject);
    if (s != item_by_subject.end()) {
      orphans_by_root[uf.find(s->second->upri)].push_back(upri);
      return;
    }
    for (const auto& r : resources) {
      auto hit = resource_item.find(r);
      if (hit != resource_item.end()) {
        orphans_by_root[uf.find(hit->second)].push_back(upri);
        return;
      }
    }
  };
  for (const auto& u : p.units)
    if (!covered.count(u.upri)) place_orphan(u.upri, u.subject, referenced_resources(u));
  for (const auto* list : {&typed, &quality}) {
    for (const auto& c : *list) {
      if (covered.count(c.upri)) continue;
      std::set<std::string> res;
      for (const auto& s : reg.statement_members(c.upri))
        for (const auto& r : referenced_resources(*reg.statement(s))) res.insert(r);
      place_orphan(c.upri, c.subject.value_or(""), res);
    }
  }

  auto kinds = subject_kinds(p, catalog);
  std::map<std::string, std::vector<const CompoundUnit*>> components;
  std::vector<std::string> order;
  for (const auto& it : items) {
    auto root = uf.find(it.upri);
    if (!components.count(root)) order.push_back(root);
    components[root].push_back(&it);
  }
  std::vector<CompoundUnit> out;
  for (const auto& root : order) {
    const auto& comp = components[root];
    CompoundUnit g;
    g.upri = minter.mint();
    g.kind = CompoundKind::ItemGroup;
    bool all_class = true, any_every = false;
    std::set<std::string> in_group;
    for (const auto* it : comp) {
      g.associate(it->upri);
      in_group.insert(it->upri);
      auto k = kinds.find(*it->subject);
      ResourceKind rk = k == kinds.end() ? ResourceKind::NamedIndividual : k->second;
      if (rk == ResourceKind::EveryInstance)
        any_every = true;
      else if (rk != ResourceKind::SomeInstance)
        all_class = false;
    }
    for (const auto& o : orphans_by_root[root]) g.associate(o);
    g.subkind = all_class ? (any_every ? Subkind::ClassAxiom : Subkind::Class) : Subkind::Instance;
    for (const auto& l : links)
      if (in_group.count(l.from_item)) g.linked.emplace_back(l.from_item, l.to_item);
    for (const auto& q : quality) {
      bool inside = false;
      for (const auto* it : comp) inside = inside || it->has(q.upri);
      if (inside || g.has(q.upri))
        for (const auto& d : q.described_by) g.described_by.push_back(d);
    }
    out.push_back(std::move(g));
  }
  if (links_out) *links_out = links;
  return out;
}

// ---------------------------------------------------------------- trees

std::vector<CompoundUnit> build_granularity_tree_units(const PartitionResult& p,
                                                       const std::vector<CompoundUnit>& typed,
                                                       const VocabularyCatalog& catalog,
                                                       UpriMinter& minter,
                                                       std::vector<TreeIssue>* issues) {
  std::map<std::string, std::string> typed_of;
  for (const auto& t : typed) typed_of[t.reference] = t.upri;
  std::vector<CompoundUnit> out;
  for (const auto& pred : catalog.order_predicates()) {
    using Edge = std::pair<std::string, std::string>;
    std::map<Edge, std::vector<std::string>> edge_units;
    for (const auto& u : p.units) {
      if (u.is_identification() || is_negated(u, catalog)) continue;
      for (const auto& q : u.data)
        if (q.predicate == pred && q.subject == u.subject && q.object.is_iri())
          edge_units[{q.subject, q.object.value}].push_back(u.upri);
    }
    if (edge_units.empty()) continue;
    UnionFind uf;
    for (const auto& [e, us] : edge_units) uf.unite(e.first, e.second);
    std::map<std::string, std::set<std::string>> comps;
    for (const auto& [e, us] : edge_units) {
      comps[uf.find(e.first)].insert(e.first);
      comps[uf.find(e.first)].insert(e.second);
    }
    for (const auto& [root_key, nodes] : comps) {
      std::map<std::string, std::set<std::string>> succ;
      std::map<std::string, int> indeg;
      for (const auto& n : nodes) indeg[n] = 0;
      for (const auto& [e, us] : edge_units) {
        if (!nodes.count(e.first)) continue;
        if (succ[e.first].insert(e.second).second) ++indeg[e.second];
      }
      // Cycle check (Kahn).
      std::vector<std::string> topo;
      {
        auto deg = indeg;
        std::vector<std::string> ready;
        for (const auto& [n, d] : deg)
          if (d == 0) ready.push_back(n);
        while (!ready.empty()) {
          std::string n = ready.back();
          ready.pop_back();
          topo.push_back(n);
          for (const auto& m : succ[n])
            if (--deg[m] == 0) ready.push_back(m);
        }
      }
      if (topo.size() != nodes.size()) {
        if (issues) issues->push_back({pred, nodes, "cycle"});
        continue;
      }
      // Reachability for the transitive reduction.
      std::map<std::string, std::set<std::string>> reach;
      for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        auto& r = reach[*it];
        for (const auto& m : succ[*it]) {
          r.insert(m);
          r.insert(reach[m].begin(), reach[m].end());
        }
      }
      std::map<std::string, std::set<std::string>> reduced;
      for (const auto& [a, cs] : succ) {
        for (const auto& c : cs) {
          bool redundant = false;
          for (const auto& b : cs)
            if (b != c && reach[b].count(c)) redundant = true;
          if (!redundant) reduced[a].insert(c);
        }
      }
      std::vector<std::string> roots;
      for (const auto& [n, d] : indeg)
        if (d == 0) roots.push_back(n);
      if (roots.size() > 1 && issues)
        issues->push_back({pred, nodes, "split into " + std::to_string(roots.size()) + " trees"});
      for (const auto& root : roots) {
        GranularityTree tree;
        tree.order_predicate = pred;
        tree.root = root;
        tree.nodes.insert(root);
        for (const auto& n : reach[root]) tree.nodes.insert(n);
        std::map<std::string, std::size_t> depth{{root, 0}};
        for (const auto& n : topo) {
          if (!tree.nodes.count(n) || !depth.count(n)) continue;
          for (const auto& c : reduced[n]) {
            tree.edges.emplace_back(n, c);
            depth[c] = std::max(depth.count(c) ? depth[c] : 0, depth[n] + 1);
            tree.depth = std::max(tree.depth, depth[c]);
          }
        }
        std::sort(tree.edges.begin(), tree.edges.end());
        CompoundUnit c;
        c.upri = minter.mint();
        c.kind = CompoundKind::GranularityTree;
        c.subject = root;
        for (const auto& [e, us] : edge_units) {
          if (!tree.nodes.count(e.first) || !tree.nodes.count(e.second)) continue;
          for (const auto& u : us) {
            c.associate(u);
            auto t = typed_of.find(u);
            if (t != typed_of.end()) c.associate(t->second);
          }
        }
        c.tree = std::move(tree);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

CompoundUnit granular_item_group(const CompoundUnit& tree, const std::vector<CompoundUnit>& items) {
  CompoundUnit g;
  g.upri = tree.upri + "/granular-item-group";
  g.kind = CompoundKind::GranularItemGroup;
  g.subject = tree.subject;
  g.associate(tree.upri);
  if (tree.tree) {
    for (const auto& it : items)
      if (it.subject && tree.tree->nodes.count(*it.subject)) g.associate(it.upri);
  }
  return g;
}

// ---------------------------------------------------------------- contexts

std::vector<CompoundUnit> build_context_units(const PartitionResult& p,
                                              const VocabularyCatalog& catalog,
                                              UpriMinter& minter,
                                              std::vector<ContextBoundary>* boundaries) {
  const auto& is_about = catalog.get("isAbout");
  const auto& about_class = catalog.get("IsAboutStatementUnit");
  std::set<std::string> unit_upris;
  for (const auto& u : p.units) unit_upris.insert(u.upri);
  UnionFind uf;
  for (const auto& u : p.units) {
    uf.find(u.subject);
    if (u.has_class(about_class)) continue;
    for (const auto& q : u.data) {
      uf.unite(u.subject, q.subject);
      if (q.object.is_iri() && !catalog.is_identification_predicate(q.predicate))
        uf.unite(q.subject, q.object.value);
    }
  }
  // A statement about a unit shares the frame of that unit's subject.
  for (const auto& u : p.units)
    if (unit_upris.count(u.subject))
      if (const auto* target = p.find(u.subject)) uf.unite(u.subject, target->subject);

  std::map<std::string, std::vector<const StatementUnit*>> comps;
  std::vector<std::string> order;
  for (const auto& u : p.units) {
    auto root = uf.find(u.subject);
    if (!comps.count(root)) order.push_back(root);
    comps[root].push_back(&u);
  }
  std::vector<CompoundUnit> out;
  std::map<std::string, std::string> context_of_root;
  for (const auto& root : order) {
    CompoundUnit c;
    c.upri = minter.mint();
    c.kind = CompoundKind::Context;
    for (const auto* u : comps[root]) c.associate(u->upri);
    context_of_root[root] = c.upri;
    out.push_back(std::move(c));
  }
  if (boundaries) {
    for (const auto& u : p.units) {
      if (!u.has_class(about_class)) continue;
      for (const auto& q : u.data) {
        if (q.predicate != is_about || !q.object.is_iri()) continue;
        ContextBoundary b;
        b.is_about_unit = u.upri;
        b.from_context = context_of_root[uf.find(u.subject)];
        auto to = context_of_root.find(uf.find(q.object.value));
        b.to_context = to == context_of_root.end() ? "" : to->second;
        b.degenerate = b.to_context.empty() || b.to_context == b.from_context;
        boundaries->push_back(b);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- collections

CompoundUnit make_collection_unit(CollectionKind kind, const std::vector<std::string>& members,
                                  const VocabularyCatalog& catalog, UpriMinter& minter,
                                  const std::set<std::string>* known_units) {
  CompoundUnit c;
  if (kind == CollectionKind::Set) {
    std::set<std::string> seen;
    for (const auto& m : members)
      if (!seen.insert(m).second)
        throw Error(ErrorCode::DuplicateMember, "set already contains " + m);
  }
  for (const auto& m : members) {
    if (!is_absolute_iri(m)) throw Error(ErrorCode::UnresolvableMember, "not an IRI: " + m);
    if (kind == CollectionKind::Dataset && known_units && !known_units->count(m))
      throw Error(ErrorCode::UnresolvableMember, "no semantic unit " + m);
  }
  c.upri = minter.mint();
  if (kind == CollectionKind::Dataset) {
    c.kind = CompoundKind::Dataset;
    for (const auto& m : members) c.associate(m);
    return c;
  }
  c.kind = CompoundKind::List;
  c.subkind = kind == CollectionKind::OrderedList ? Subkind::Ordered
              : kind == CollectionKind::Set       ? Subkind::Set
                                                  : Subkind::Unordered;
  const auto& child = catalog.get("child");
  for (std::size_t i = 0; i < members.size(); ++i) {
    StatementUnit u;
    u.upri = minter.mint();
    u.origin = UnitOrigin::Schema;
    u.subject = c.upri;
    u.classes.insert(catalog.get("MembershipStatementUnit"));
    u.schema_class = catalog.get("MembershipStatementUnit");
    u.objects.push_back({Term::iri(members[i]), UnitObject::Role::Argument, "o"});
    u.binding = {{"s", Term::iri(c.upri)}, {"o", Term::iri(members[i])}};
    u.label_template = "{s} has member {o}";
    u.data.add(c.upri, child, Term::iri(members[i]), u.upri);
    c.associate(u.upri);
    if (kind == CollectionKind::OrderedList) c.indexes[u.upri] = i;
    c.members.push_back(std::move(u));
  }
  return c;
}

// ---------------------------------------------------------------- all

std::vector<const CompoundUnit*> CompoundResult::all() const {
  std::vector<const CompoundUnit*> out;
  for (const auto* list : {&typed, &quality, &items, &groups, &trees, &contexts})
    for (const auto& c : *list) out.push_back(&c);
  return out;
}

CompoundResult build_compounds(const PartitionResult& p, const VocabularyCatalog& catalog,
                               UpriMinter& minter) {
  CompoundResult r;
  r.typed = build_typed_statement_units(p, catalog, minter);
  r.quality = build_quality_measurement_units(r.typed, p, catalog, minter);
  r.items = build_item_units(p, r.typed, r.quality, catalog, minter);
  r.groups = build_item_group_units(r.items, p, r.typed, r.quality, catalog, minter, &r.links);
  r.trees = build_granularity_tree_units(p, r.typed, catalog, minter, &r.tree_issues);
  r.contexts = build_context_units(p, catalog, minter, &r.boundaries);
  return r;
}

QuadDataset compound_quads(const CompoundUnit& c, const VocabularyCatalog& catalog) {
  QuadDataset out;
  const std::string g = meta_graph(c.upri);
  const auto& type = catalog.type();
  out.add(c.upri, type, Term::iri(catalog.get(c.kind_class_key())), g);
  for (const auto& a : c.associated)
    out.add(c.upri, catalog.get("hasAssociatedSemanticUnit"), Term::iri(a), g);
  if (c.subject) out.add(c.upri, catalog.get("hasSemanticUnitSubject"), Term::iri(*c.subject), g);
  for (const auto& [a, b] : c.linked)
    out.add(a, catalog.get("hasLinkedSemanticUnit"), Term::iri(b), g);
  for (const auto& [a, b] : c.described_by)
    out.add(a, catalog.get("objectDescribedBySemanticUnit"), Term::iri(b), g);
  for (const auto& o : c.opaque) out.add(o, type, Term::iri(catalog.get("OpaqueSemanticUnit")), g);
  for (const auto& m : c.members) {
    out.merge(m.data);
    const std::string mg = meta_graph(m.upri);
    out.add(m.upri, catalog.get("hasSemanticUnitSubject"), Term::iri(m.subject), mg);
    for (const auto& cls : m.classes) out.add(m.upri, type, Term::iri(cls), mg);
    auto idx = c.indexes.find(m.upri);
    if (idx != c.indexes.end())
      out.add(m.upri, catalog.get("index"),
              Term::literal(std::to_string(idx->second), xsd::kInteger), mg);
  }
  return out;
}

QuadDataset compound_quads(const CompoundResult& r, const VocabularyCatalog& catalog) {
  QuadDataset out;
  for (const auto* c : r.all()) out.merge(compound_quads(*c, catalog));
  const auto& sep = catalog.get("separatesContext");
  for (const auto& b : r.boundaries) {
    if (b.from_context.empty()) continue;
    const std::string g = meta_graph(b.from_context);
    out.add(b.is_about_unit, sep, Term::iri(b.from_context), g);
    if (!b.to_context.empty()) out.add(b.is_about_unit, sep, Term::iri(b.to_context), g);
    if (b.degenerate)
      out.add(b.is_about_unit, catalog.type(), Term::iri(catalog.get("DegenerateBoundary")), g);
  }
  return out;
}

std::string compound_report(const CompoundResult& r) {
  std::ostringstream out;
  for (const auto* c : r.all()) {
    out << c->upri << '\t' << to_string(c->kind);
    if (c->subkind != Subkind::None) out << '/' << to_string(c->subkind);
    out << '\t' << (c->subject ? *c->subject : "-") << '\t';
    for (std::size_t i = 0; i < c->associated.size(); ++i)
      out << (i ? " " : "") << c->associated[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace su
