#include <map>
#include <set>

#include "semunits/fdo.hpp"

namespace su {

namespace {

[[noreturn]] void policy_error(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::Policy, msg + " at line " + std::to_string(line));
}

// Whitespace-separated words; `"..."` and `<...>` stay whole.
std::vector<std::string> words(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::string w;
    bool in_iri = false;
    if (line[i] == '"') {
      w += line[i++];
      while (i < line.size() && line[i] != '"') {
        if (line[i] == '\\' && i + 1 < line.size()) ++i;
        w += line[i++];
      }
      if (i == line.size()) policy_error(lineno, "unterminated string");
      w += line[i++];
      out.push_back(w);
      continue;
    }
    while (i < line.size() && (in_iri || !std::isspace(static_cast<unsigned char>(line[i])))) {
      if (line[i] == '<') in_iri = true;
      if (line[i] == '>') in_iri = false;
      w += line[i++];
    }
    if (in_iri) policy_error(lineno, "unterminated IRI");
    out.push_back(w);
  }
  return out;
}

std::string resolve(const std::string& w, const PrefixMap& pm, std::size_t lineno) {
  if (w.size() >= 2 && w.front() == '"' && w.back() == '"') return w.substr(1, w.size() - 2);
  if (w.size() >= 2 && w.front() == '<' && w.back() == '>') {
    std::string iri = w.substr(1, w.size() - 2);
    if (!is_absolute_iri(iri)) policy_error(lineno, "not an absolute IRI: " + w);
    return iri;
  }
  std::string iri = pm.expand(w);
  if (iri.empty()) policy_error(lineno, "unknown prefix in " + w);
  return iri;
}

std::vector<std::string> resolve_path(const std::string& w, const PrefixMap& pm,
                                      std::size_t lineno) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t end;
    if (w[i] == '<') {
      end = w.find('>', i);
      if (end == std::string::npos) policy_error(lineno, "unterminated IRI in path");
      ++end;
    } else {
      end = w.find('/', i);
      if (end == std::string::npos) end = w.size();
    }
    out.push_back(resolve(w.substr(i, end - i), pm, lineno));
    if (end < w.size() && w[end] != '/') policy_error(lineno, "expected '/' in path " + w);
    i = end + 1;
  }
  if (out.empty()) policy_error(lineno, "empty path");
  return out;
}

}  // namespace

AccessPolicy parse_policy(std::string_view text, const PrefixMap* prefixes) {
  PrefixMap pm = prefixes ? *prefixes : PrefixMap{};
  AccessPolicy policy;
  std::size_t lineno = 0, start = 0;
  const std::string body(text);
  while (start <= body.size()) {
    auto nl = body.find('\n', start);
    std::string line = body.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
    start = nl == std::string::npos ? body.size() + 1 : nl + 1;
    ++lineno;
    auto w = words(line, lineno);
    if (w.empty()) continue;
    if (w[0] == "prefix") {
      if (w.size() != 3 || w[2].size() < 2 || w[2].front() != '<')
        policy_error(lineno, "expected: prefix <name> <iri>");
      std::string name = w[1];
      if (!name.empty() && name.back() == ':') name.pop_back();
      pm.add(name, resolve(w[2], pm, lineno));
      continue;
    }
    PolicyRule r;
    r.line = lineno;
    if (w[0] == "allow") r.allow = true;
    else if (w[0] == "deny") r.allow = false;
    else policy_error(lineno, "rule must start with allow or deny");
    if (w.size() < 2) policy_error(lineno, "missing unit class");
    r.unit_class = w[1] == "*" ? "*" : resolve(w[1], pm, lineno);
    std::size_t i = 2;
    if (i < w.size()) {
      if (w[i] != "if") policy_error(lineno, "expected 'if'");
      ++i;
      for (;;) {
        if (i + 3 > w.size()) policy_error(lineno, "incomplete condition");
        PolicyCondition c;
        const std::string& kind = w[i];
        if (kind == "subject") {
          c.kind = PolicyCondition::Kind::SubjectPath;
          c.path = resolve_path(w[i + 1], pm, lineno);
        } else if (kind == "requester" || kind == "requester-not") {
          c.kind = kind == "requester" ? PolicyCondition::Kind::Requester
                                       : PolicyCondition::Kind::RequesterNot;
          c.key = w[i + 1];
        } else {
          policy_error(lineno, "unknown condition '" + kind + "'");
        }
        const std::string& v = w[i + 2];
        c.value = (v.front() == '"' || v.front() == '<' || v.find(':') != std::string::npos)
                      ? resolve(v, pm, lineno)
                      : v;
        r.conditions.push_back(std::move(c));
        i += 3;
        if (i == w.size()) break;
        if (w[i] != "and") policy_error(lineno, "expected 'and'");
        ++i;
      }
    }
    policy.rules.push_back(std::move(r));
  }
  return policy;
}

namespace {

bool path_reaches(const QuadDataset& ds, const std::string& start,
                  const std::vector<std::string>& path, const std::string& value) {
  std::set<std::string> frontier = {start};
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::set<std::string> next;
    bool last = i + 1 == path.size();
    for (const auto& q : ds) {
      if (q.predicate != path[i] || !frontier.count(q.subject)) continue;
      if (last && q.object.value == value) return true;
      if (q.object.is_iri()) next.insert(q.object.value);
    }
    frontier = std::move(next);
    if (frontier.empty()) return false;
  }
  return false;
}

bool matches(const PolicyRule& r, const StatementUnit& u, const RequesterContext& requester,
             const QuadDataset& ds) {
  if (r.unit_class != "*" && !u.has_class(r.unit_class) && u.schema_class != r.unit_class)
    return false;
  for (const auto& c : r.conditions) {
    switch (c.kind) {
      case PolicyCondition::Kind::SubjectPath:
        if (!path_reaches(ds, u.subject, c.path, c.value)) return false;
        break;
      case PolicyCondition::Kind::Requester: {
        auto it = requester.find(c.key);
        if (it == requester.end() || it->second != c.value) return false;
        break;
      }
      case PolicyCondition::Kind::RequesterNot: {
        auto it = requester.find(c.key);
        if (it != requester.end() && it->second == c.value) return false;
        break;
      }
    }
  }
  return true;
}

}  // namespace

VisibleUnits apply_access_policy(const std::vector<StatementUnit>& statements,
                                 const std::vector<const CompoundUnit*>& compounds,
                                 const AccessPolicy& policy, const RequesterContext& requester,
                                 const QuadDataset& ds) {
  VisibleUnits out;
  for (const auto& u : statements) {
    bool allow = true;
    for (const auto& r : policy.rules) {
      if (matches(r, u, requester, ds)) {
        allow = r.allow;
        break;
      }
    }
    if (allow) out.statements.push_back(u);
    else out.hidden.insert(u.upri);
  }
  for (const CompoundUnit* c : compounds) {
    CompoundUnit v = *c;
    for (const auto& a : v.associated)
      if (out.hidden.count(a)) v.opaque.insert(a);
    out.compounds.push_back(std::move(v));
  }
  return out;
}

QuadDataset visible_dataset(const VisibleUnits& v, const VocabularyCatalog& catalog) {
  QuadDataset out;
  const std::string& subj = catalog.get("hasSemanticUnitSubject");
  for (const auto& u : v.statements) {
    out.merge(u.data);
    const std::string g = meta_graph(u.upri);
    out.add(u.upri, subj, Term::iri(u.subject), g);
    for (const auto& c : u.classes) out.add(u.upri, catalog.type(), Term::iri(c), g);
  }
  for (const auto& c : v.compounds) out.merge(compound_quads(c, catalog));
  return out;
}

}  // namespace su
