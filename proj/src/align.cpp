#include <algorithm>
#include <numeric>
#include <set>

#include "semunits/align.hpp"

namespace su {

const char* to_string(AlignLevel l) {
  switch (l) {
    case AlignLevel::ItemGroup: return "item-group";
    case AlignLevel::Item: return "item";
    case AlignLevel::Statement: return "statement";
    case AlignLevel::Triple: return "triple";
  }
  return "?";
}

std::string Correspondence::score() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

using Signature = std::map<std::string, std::uint64_t>;

std::pair<std::uint64_t, std::uint64_t> jaccard(const Signature& a, const Signature& b) {
  std::uint64_t inter = 0, uni = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      uni += i->second;
      ++i;
    } else if (i == a.end() || j->first < i->first) {
      uni += j->second;
      ++j;
    } else {
      inter += std::min(i->second, j->second);
      uni += std::max(i->second, j->second);
      ++i;
      ++j;
    }
  }
  if (uni == 0) return {1, 1};
  std::uint64_t g = std::gcd(inter, uni);
  return {inter / g, uni / g};
}

// Everything about one side needed to build signatures.
class Side {
 public:
  Side(const ProcessedGraph& g, const VocabularyCatalog& catalog)
      : g_(g), reg_(g.partition), kinds_(g.dataset, catalog) {
    for (const CompoundUnit* c : g.compounds.all()) reg_.add(*c);
    for (const auto& u : g.partition.units) class_key_[u.upri] = u.class_key();
    for (const CompoundUnit* c : g.compounds.all()) class_key_[c->upri] = c->kind_class_key();
    for (const auto& q : g.dataset)
      if (q.predicate == catalog.type() && q.object.is_iri()) types_[q.subject].insert(q.object.value);
  }

  const UnitRegistry& reg() const { return reg_; }
  const ProcessedGraph& graph() const { return g_; }

  std::string term_token(const std::string& iri) const {
    auto it = class_key_.find(iri);
    if (it != class_key_.end()) return "unit:" + it->second;
    return "<" + iri + ">";
  }
  std::string term_token(const Term& t) const {
    return t.is_iri() ? term_token(t.value) : term_to_nquads(t);
  }

  // Class and kind of a subject; unit resources collapse to their class.
  std::string subject_class(const std::string& r) const {
    auto it = class_key_.find(r);
    if (it != class_key_.end()) return "unit:" + it->second;
    std::string out;
    try {
      out = su::to_string(kinds_.kind(r));
    } catch (const Error&) {
      out = "unknown";
    }
    auto t = types_.find(r);
    if (t != types_.end())
      for (const auto& c : t->second) out += "|" + c;
    return out;
  }

  void add_subject(Signature& s, const std::string& r) const {
    ++s["subject-class:" + subject_class(r)];
    if (!class_key_.count(r)) ++s["subject:" + r];
  }

  void add_triples(Signature& s, const StatementUnit& u) const {
    for (const auto& q : u.data)
      ++s["triple:" + term_token(q.subject) + " <" + q.predicate + "> " + term_token(q.object)];
  }

  Signature statement_sig(const std::string& upri) const {
    const StatementUnit& u = *reg_.statement(upri);
    Signature s;
    ++s["class:" + u.class_key()];
    add_subject(s, u.subject);
    add_triples(s, u);
    return s;
  }

  // Statement units an item owns: everything it reaches except other
  // subjects' identification units.
  std::set<std::string> item_statements(const CompoundUnit& item) const {
    std::set<std::string> out;
    for (const auto& s : reg_.statement_members(item.upri)) {
      const StatementUnit* u = reg_.statement(s);
      if (!u->is_identification() || (item.subject && u->subject == *item.subject)) out.insert(s);
    }
    return out;
  }

  Signature item_sig(const CompoundUnit& item) const {
    Signature s;
    if (item.subject) add_subject(s, *item.subject);
    for (const auto& m : item_statements(item)) {
      const StatementUnit& u = *reg_.statement(m);
      ++s["member:" + u.class_key()];
      add_triples(s, u);
    }
    return s;
  }

  std::vector<const CompoundUnit*> group_items(const CompoundUnit& group) const {
    std::vector<const CompoundUnit*> out;
    for (const auto& a : group.associated) {
      const CompoundUnit* c = reg_.compound(a);
      if (c && c->kind == CompoundKind::Item) out.push_back(c);
    }
    return out;
  }

  // Statement units reachable from a group; whatever the item pass leaves
  // unmatched is matched at group scope.
  std::set<std::string> loose_statements(const CompoundUnit& group) const {
    auto m = reg_.statement_members(group.upri);
    return {m.begin(), m.end()};
  }

  Signature group_sig(const CompoundUnit& group) const {
    Signature s;
    for (const auto& m : reg_.statement_members(group.upri)) {
      const StatementUnit& u = *reg_.statement(m);
      ++s["member:" + u.class_key() + "@" + subject_class(u.subject)];
      add_triples(s, u);
    }
    for (const auto* it : group_items(group))
      if (it->subject) add_subject(s, *it->subject);
    return s;
  }

  std::set<std::string> statement_classes() const {
    std::set<std::string> out;
    for (const auto& u : g_.partition.units) out.insert(u.class_key());
    return out;
  }

 private:
  const ProcessedGraph& g_;
  UnitRegistry reg_;
  KindIndex kinds_;
  std::map<std::string, std::string> class_key_;
  std::map<std::string, std::set<std::string>> types_;
};

struct Candidate {
  std::string left, right;
  std::uint64_t num, den;
};

// Greedy injective matching over candidates with positive score.
std::vector<Candidate> greedy(std::vector<Candidate> cands, std::set<std::string>& used_left,
                              std::set<std::string>& used_right) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    // a.num/a.den > b.num/b.den without division.
    unsigned __int128 x = static_cast<unsigned __int128>(a.num) * b.den;
    unsigned __int128 y = static_cast<unsigned __int128>(b.num) * a.den;
    if (x != y) return x > y;
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  });
  std::vector<Candidate> out;
  for (auto& c : cands) {
    if (c.num == 0 || used_left.count(c.left) || used_right.count(c.right)) continue;
    used_left.insert(c.left);
    used_right.insert(c.right);
    out.push_back(std::move(c));
  }
  return out;
}

template <class L, class R, class SigL, class SigR>
std::vector<Candidate> match_sets(const L& left, const R& right, SigL sig_l, SigR sig_r,
                                  std::set<std::string>& used_left,
                                  std::set<std::string>& used_right) {
  std::vector<std::pair<std::string, Signature>> rs;
  for (const auto& r : right)
    if (!used_right.count(r.first)) rs.emplace_back(r.first, sig_r(r.second));
  std::vector<Candidate> cands;
  for (const auto& l : left) {
    if (used_left.count(l.first)) continue;
    Signature sl = sig_l(l.second);
    for (const auto& [rid, sr] : rs) {
      auto [n, d] = jaccard(sl, sr);
      if (n) cands.push_back({l.first, rid, n, d});
    }
  }
  return greedy(std::move(cands), used_left, used_right);
}

std::string triple_id(const Quad& q) {
  return "<" + q.subject + "> <" + q.predicate + "> " + term_to_nquads(q.object);
}

}  // namespace

AlignmentReport align_graphs(const ProcessedGraph& a, const ProcessedGraph& b,
                             const VocabularyCatalog& catalog) {
  AlignmentReport rep;
  Side A(a, catalog), B(b, catalog);
  std::map<AlignLevel, std::set<std::string>> used_l, used_r;

  auto all_ids = [](const Side& s, AlignLevel level) {
    std::vector<std::string> out;
    const ProcessedGraph& g = s.graph();
    switch (level) {
      case AlignLevel::ItemGroup:
        for (const auto& c : g.compounds.groups) out.push_back(c.upri);
        break;
      case AlignLevel::Item:
        for (const auto& c : g.compounds.items) out.push_back(c.upri);
        break;
      case AlignLevel::Statement:
        for (const auto& u : g.partition.units) out.push_back(u.upri);
        break;
      case AlignLevel::Triple:
        for (const auto& u : g.partition.units)
          for (const auto& q : u.data) out.push_back(triple_id(q));
        break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto finish = [&]() {
    for (AlignLevel level : {AlignLevel::ItemGroup, AlignLevel::Item, AlignLevel::Statement,
                             AlignLevel::Triple}) {
      for (const auto& id : all_ids(A, level))
        if (!used_l[level].count(id)) rep.unmatched_left[level].push_back(id);
      for (const auto& id : all_ids(B, level))
        if (!used_r[level].count(id)) rep.unmatched_right[level].push_back(id);
    }
  };

  auto ca = A.statement_classes(), cb = B.statement_classes();
  bool shared = std::any_of(ca.begin(), ca.end(), [&](const auto& c) { return cb.count(c) > 0; });
  if (!shared) {
    rep.diagnostics.push_back("the graphs share no statement unit classes; nothing to align");
    finish();
    return rep;
  }

  auto record = [&](AlignLevel level, const std::vector<Candidate>& ms) {
    for (const auto& m : ms) rep.correspondences.push_back({level, m.left, m.right, m.num, m.den});
  };

  // Level 1: item groups.
  std::map<std::string, const CompoundUnit*> ga, gb;
  for (const auto& g : a.compounds.groups) ga[g.upri] = &g;
  for (const auto& g : b.compounds.groups) gb[g.upri] = &g;
  auto groups = match_sets(
      ga, gb, [&](const CompoundUnit* g) { return A.group_sig(*g); },
      [&](const CompoundUnit* g) { return B.group_sig(*g); }, used_l[AlignLevel::ItemGroup],
      used_r[AlignLevel::ItemGroup]);
  record(AlignLevel::ItemGroup, groups);

  auto stmt_sig_a = [&](const std::string& u) { return A.statement_sig(u); };
  auto stmt_sig_b = [&](const std::string& u) { return B.statement_sig(u); };
  auto as_map = [](const std::set<std::string>& ids) {
    std::map<std::string, std::string> m;
    for (const auto& id : ids) m[id] = id;
    return m;
  };

  // Levels 2 and 3 inside matched groups and items.
  std::vector<Candidate> stmt_matches;
  for (const auto& gm : groups) {
    std::map<std::string, const CompoundUnit*> ia, ib;
    for (const auto* it : A.group_items(*ga[gm.left])) ia[it->upri] = it;
    for (const auto* it : B.group_items(*gb[gm.right])) ib[it->upri] = it;
    auto items = match_sets(
        ia, ib, [&](const CompoundUnit* c) { return A.item_sig(*c); },
        [&](const CompoundUnit* c) { return B.item_sig(*c); }, used_l[AlignLevel::Item],
        used_r[AlignLevel::Item]);
    record(AlignLevel::Item, items);
    for (const auto& im : items) {
      auto s = match_sets(as_map(A.item_statements(*ia[im.left])),
                          as_map(B.item_statements(*ib[im.right])), stmt_sig_a, stmt_sig_b,
                          used_l[AlignLevel::Statement], used_r[AlignLevel::Statement]);
      stmt_matches.insert(stmt_matches.end(), s.begin(), s.end());
    }
    auto loose = match_sets(as_map(A.loose_statements(*ga[gm.left])),
                            as_map(B.loose_statements(*gb[gm.right])), stmt_sig_a, stmt_sig_b,
                            used_l[AlignLevel::Statement], used_r[AlignLevel::Statement]);
    stmt_matches.insert(stmt_matches.end(), loose.begin(), loose.end());
  }
  // Statement units no group reaches are matched among themselves.
  auto ungrouped = [](const Side& s) {
    std::set<std::string> in_group, out;
    for (const auto& g : s.graph().compounds.groups)
      for (const auto& m : s.reg().statement_members(g.upri)) in_group.insert(m);
    for (const auto& u : s.graph().partition.units)
      if (!in_group.count(u.upri)) out.insert(u.upri);
    return out;
  };
  auto rest = match_sets(as_map(ungrouped(A)), as_map(ungrouped(B)), stmt_sig_a, stmt_sig_b,
                         used_l[AlignLevel::Statement], used_r[AlignLevel::Statement]);
  stmt_matches.insert(stmt_matches.end(), rest.begin(), rest.end());
  record(AlignLevel::Statement, stmt_matches);

  // Level 4: triples inside matched statement units.
  for (const auto& sm : stmt_matches) {
    std::map<std::string, Quad> ta, tb;
    for (const auto& q : A.reg().statement(sm.left)->data) ta.emplace(triple_id(q), q);
    for (const auto& q : B.reg().statement(sm.right)->data) tb.emplace(triple_id(q), q);
    auto triple_sig = [](const Side& s) {
      return [&s](const Quad& q) {
        Signature sig;
        ++sig["s:" + s.term_token(q.subject)];
        ++sig["p:" + q.predicate];
        ++sig["o:" + s.term_token(q.object)];
        return sig;
      };
    };
    record(AlignLevel::Triple, match_sets(ta, tb, triple_sig(A), triple_sig(B),
                                          used_l[AlignLevel::Triple], used_r[AlignLevel::Triple]));
  }
  finish();
  return rep;
}

std::string format_report(const AlignmentReport& r) {
  std::string out;
  for (const auto& c : r.correspondences)
    out += std::string(to_string(c.level)) + "\t" + c.left + "\t" + c.right + "\t" + c.score() + "\n";
  for (const auto& [level, ids] : r.unmatched_left)
    for (const auto& id : ids) out += "unmatched-left\t" + std::string(to_string(level)) + "\t" + id + "\n";
  for (const auto& [level, ids] : r.unmatched_right)
    for (const auto& id : ids) out += "unmatched-right\t" + std::string(to_string(level)) + "\t" + id + "\n";
  for (const auto& d : r.diagnostics) out += "# " + d + "\n";
  return out;
}

}  // namespace su
