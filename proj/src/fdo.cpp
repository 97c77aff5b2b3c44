#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "semunits/fdo.hpp"

namespace su {

// ------------------------------------------------------------------ minting

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// Finalizer of splitmix64; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void check_namespace(const std::string& ns) {
  if (!is_absolute_iri(ns) || ns.empty() ||
      (ns.back() != '/' && ns.back() != '#' && ns.back() != ':'))
    throw Error(ErrorCode::MalformedNamespace,
                "namespace must be an absolute IRI ending in '/', '#' or ':': " + ns);
}

}  // namespace

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

UpriMinter::UpriMinter(std::string ns, std::optional<std::uint64_t> seed, const std::string& stream)
    : ns_(std::move(ns)), seeded_(seed.has_value()) {
  check_namespace(ns_);
  if (seed) {
    state_ = *seed;
  } else {
    std::random_device rd;
    state_ = (std::uint64_t{rd()} << 32) ^ rd();
  }
  salt_ = fnv1a64(stream);
}

std::string UpriMinter::mint() {
  std::uint64_t n;
  {
    std::lock_guard<std::mutex> lock(mu_);
    n = counter_++;
  }
  // Distinct counters give distinct words before mixing, hence after it.
  std::uint64_t id = mix64(state_ + salt_ + n * kGamma);
  if (seeded_) return ns_ + hex64(id);
  std::uint64_t hi = mix64(state_ ^ salt_);
  std::string h = hex64(hi) + hex64(id);
  h[12] = '4';
  return ns_ + h.substr(0, 8) + "-" + h.substr(8, 4) + "-" + h.substr(12, 4) + "-" +
         h.substr(16, 4) + "-" + h.substr(20);
}

std::string mint_upri(const std::string& ns, std::optional<std::uint64_t> seed) {
  UpriMinter m(ns, seed);
  return m.mint();
}

// --------------------------------------------------------------- timestamps

namespace {

long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

bool digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  out = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    out = out * 10 + (s[i] - '0');
  }
  return true;
}

}  // namespace

std::optional<long long> parse_timestamp(std::string_view s) {
  int y, mo, d;
  if (!digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !digits(s, 5, 2, mo) || s[7] != '-' ||
      !digits(s, 8, 2, d))
    return std::nullopt;
  static const int mdays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (mo < 1 || mo > 12 || d < 1 || d > mdays[mo - 1]) return std::nullopt;
  bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (mo == 2 && d == 29 && !leap) return std::nullopt;
  long long secs = days_from_civil(y, mo, d) * 86400;
  std::size_t i = 10;
  if (i < s.size() && s[i] == 'T') {
    int h, mi, se;
    if (!digits(s, 11, 2, h) || s.size() < 19 || s[13] != ':' || !digits(s, 14, 2, mi) ||
        s[16] != ':' || !digits(s, 17, 2, se) || h > 23 || mi > 59 || se > 60)
      return std::nullopt;
    secs += h * 3600 + mi * 60 + se;
    i = 19;
    if (i < s.size() && s[i] == '.') {
      ++i;
      std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i == start) return std::nullopt;
    }
  }
  if (i < s.size()) {
    if (s[i] == 'Z') {
      ++i;
    } else if (s[i] == '+' || s[i] == '-') {
      int oh, om;
      if (!digits(s, i + 1, 2, oh) || i + 3 >= s.size() || s[i + 3] != ':' ||
          !digits(s, i + 4, 2, om) || oh > 14 || om > 59)
        return std::nullopt;
      long long off = oh * 3600 + om * 60;
      secs += s[i] == '+' ? -off : off;
      i += 6;
    }
  }
  if (i != s.size()) return std::nullopt;
  return secs;
}

std::string current_timestamp() {
  auto now = std::chrono::system_clock::now();
  long long t = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  long long days = t / 86400, rem = t % 86400;
  // Inverse of days_from_civil.
  days += 719468;
  long long era = (days >= 0 ? days : days - 146096) / 146097;
  unsigned doe = static_cast<unsigned>(days - era * 146097);
  unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  long long y = static_cast<long long>(yoe) + era * 400;
  unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  unsigned mp = (5 * doy + 2) / 153;
  unsigned d = doy - (153 * mp + 2) / 5 + 1;
  unsigned m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d, rem / 3600,
                rem / 60 % 60, rem % 60);
  return buf;
}

void validate_provenance(const ProvenanceRecord& r, std::string_view now) {
  if (r.creator.empty()) throw Error(ErrorCode::MissingProvenance, "creator is required");
  if (!is_absolute_iri(r.creator))
    throw Error(ErrorCode::MissingProvenance, "creator must be an agent IRI: " + r.creator);
  if (r.created.empty()) throw Error(ErrorCode::MissingProvenance, "creation date is required");
  auto limit = parse_timestamp(now);
  if (!limit) throw Error(ErrorCode::MissingProvenance, "invalid reference time " + std::string(now));
  auto check = [&](const std::string& value, const char* what) {
    auto t = parse_timestamp(value);
    if (!t) throw Error(ErrorCode::MissingProvenance, std::string("invalid ") + what + " " + value);
    if (*t > *limit)
      throw Error(ErrorCode::FutureDate, std::string(what) + " " + value + " is in the future");
  };
  check(r.created, "creation date");
  if (!r.last_updated.empty()) check(r.last_updated, "last-updated date");
  for (const auto& c : r.contributors)
    if (!is_absolute_iri(c))
      throw Error(ErrorCode::MissingProvenance, "contributor must be an agent IRI: " + c);
}

// ------------------------------------------------------------------ records

UnitRecord unit_record(const StatementUnit& u, const VocabularyCatalog& catalog) {
  UnitRecord r;
  r.upri = u.upri;
  r.classes = u.classes;
  r.subject = u.subject;
  r.data = u.data;
  if (!u.schema_class.empty()) {
    r.schema = u.schema_class;
  } else if (!u.fallback_predicate.empty()) {
    r.schema = catalog.get("UntypedStatementUnit");
  } else if (u.identification == IdentificationKind::NamedIndividual) {
    r.schema = catalog.get("NamedIndividualIdentificationUnit");
  } else if (u.identification == IdentificationKind::SomeInstance) {
    r.schema = catalog.get("SomeInstanceIdentificationUnit");
  } else if (u.identification == IdentificationKind::EveryInstance) {
    r.schema = catalog.get("EveryInstanceIdentificationUnit");
  } else if (!u.classes.empty()) {
    r.schema = *u.classes.begin();
  }
  return r;
}

UnitRecord unit_record(const CompoundUnit& c, const VocabularyCatalog& catalog) {
  UnitRecord r;
  r.upri = c.upri;
  r.classes.insert(catalog.get(c.kind_class_key()));
  r.subject = c.subject;
  r.associated = c.associated;
  r.linked = c.linked;
  r.described_by = c.described_by;
  std::sort(r.linked.begin(), r.linked.end());
  std::sort(r.described_by.begin(), r.described_by.end());
  r.opaque = c.opaque;
  r.schema = catalog.get(c.kind_class_key());
  return r;
}

// ---------------------------------------------------------- nanopublications

std::string nanopub_upri(const std::string& unit_upri) { return unit_upri + "/np"; }

namespace {

Term date_literal(const std::string& v) {
  return Term::literal(v, v.find('T') == std::string::npos ? xsd::kDate : xsd::kDateTime);
}

void write_record(QuadDataset& out, const std::string& subject, const ProvenanceRecord& r,
                  const std::string& g) {
  out.add(subject, meta::kCreator, Term::iri(r.creator), g);
  out.add(subject, meta::kCreated, date_literal(r.created), g);
  if (!r.application.empty()) out.add(subject, meta::kApplication, Term::literal(r.application), g);
  if (!r.title.empty()) out.add(subject, meta::kTitle, Term::literal(r.title), g);
  for (const auto& c : r.contributors) out.add(subject, meta::kContributor, Term::iri(c), g);
  if (!r.last_updated.empty())
    out.add(subject, meta::kLastUpdated, date_literal(r.last_updated), g);
}

ProvenanceRecord read_record(const std::vector<Quad>& quads, const std::string& subject) {
  ProvenanceRecord r;
  for (const auto& q : quads) {
    if (q.subject != subject) continue;
    const std::string& p = q.predicate;
    if (p == meta::kCreator) r.creator = q.object.value;
    else if (p == meta::kCreated) r.created = q.object.value;
    else if (p == meta::kApplication) r.application = q.object.value;
    else if (p == meta::kTitle) r.title = q.object.value;
    else if (p == meta::kContributor) r.contributors.push_back(q.object.value);
    else if (p == meta::kLastUpdated) r.last_updated = q.object.value;
  }
  std::sort(r.contributors.begin(), r.contributors.end());
  if (r.creator.empty() || r.created.empty())
    throw Error(ErrorCode::MissingProvenance, "record for " + subject + " lacks creator or date");
  return r;
}

}  // namespace

Nanopublication emit_nanopublication(const UnitRecord& unit, const ProvenanceRecord& provenance,
                                     const ProvenanceRecord& pubinfo,
                                     const VocabularyCatalog& catalog, std::string_view now) {
  validate_provenance(provenance, now);
  validate_provenance(pubinfo, now);
  for (const auto& q : unit.data)
    if (q.graph != unit.upri)
      throw Error(ErrorCode::AssertionMismatch,
                  "quad in graph " + q.graph + " does not belong to unit " + unit.upri);

  Nanopublication n;
  n.upri = nanopub_upri(unit.upri);
  n.head_graph = n.upri + "/head";
  n.assertion_graph = unit.upri;
  n.provenance_graph = n.upri + "/provenance";
  n.pubinfo_graph = n.upri + "/pubinfo";
  const std::string& type = catalog.type();
  const std::string& h = n.head_graph;

  n.quads.add(n.upri, type, Term::iri(np::kNanopublication), h);
  n.quads.add(n.upri, np::kHasAssertion, Term::iri(n.assertion_graph), h);
  n.quads.add(n.upri, np::kHasProvenance, Term::iri(n.provenance_graph), h);
  n.quads.add(n.upri, np::kHasPublicationInfo, Term::iri(n.pubinfo_graph), h);
  for (const auto& c : unit.classes) n.quads.add(unit.upri, type, Term::iri(c), h);
  if (unit.subject)
    n.quads.add(unit.upri, catalog.get("hasSemanticUnitSubject"), Term::iri(*unit.subject), h);
  for (const auto& a : unit.associated)
    n.quads.add(unit.upri, catalog.get("hasAssociatedSemanticUnit"), Term::iri(a), h);
  for (const auto& [a, b] : unit.linked)
    n.quads.add(a, catalog.get("hasLinkedSemanticUnit"), Term::iri(b), h);
  for (const auto& [a, b] : unit.described_by)
    n.quads.add(a, catalog.get("objectDescribedBySemanticUnit"), Term::iri(b), h);
  for (const auto& o : unit.opaque)
    n.quads.add(o, type, Term::iri(catalog.get("OpaqueSemanticUnit")), h);

  n.quads.merge(unit.data);
  write_record(n.quads, n.assertion_graph, provenance, n.provenance_graph);
  write_record(n.quads, n.upri, pubinfo, n.pubinfo_graph);
  if (!unit.schema.empty())
    n.quads.add(n.upri, meta::kSchema, Term::iri(unit.schema), n.pubinfo_graph);
  return n;
}

ParsedNanopublication parse_nanopublication(const QuadDataset& quads,
                                            const VocabularyCatalog& catalog) {
  const std::string& type = catalog.type();
  std::vector<const Quad*> heads;
  for (const auto& q : quads)
    if (q.predicate == type && q.object.is_iri() && q.object.value == np::kNanopublication)
      heads.push_back(&q);
  if (heads.empty()) throw Error(ErrorCode::MissingGraph, "no head graph");
  if (heads.size() > 1)
    throw Error(ErrorCode::MissingGraph, "more than one head graph; expected exactly one");

  ParsedNanopublication out;
  out.upri = heads[0]->subject;
  const std::string head_name = heads[0]->graph;
  const auto head = quads.graph(head_name);
  auto link = [&](const char* p, const char* what) {
    std::string found;
    for (const auto& q : head) {
      if (q.subject != out.upri || q.predicate != p) continue;
      if (!found.empty())
        throw Error(ErrorCode::MissingGraph, std::string("several ") + what + " graphs");
      found = q.object.value;
    }
    if (found.empty())
      throw Error(ErrorCode::MissingGraph, std::string("head does not name a ") + what + " graph");
    return found;
  };
  const std::string assertion = link(np::kHasAssertion, "assertion");
  const std::string provenance = link(np::kHasProvenance, "provenance");
  const std::string pubinfo = link(np::kHasPublicationInfo, "publication info");

  std::set<std::string> referenced = {head_name, assertion, provenance, pubinfo};
  bool unreferenced = false;
  for (const auto& g : quads.graph_names())
    if (!referenced.count(g)) unreferenced = true;
  auto require = [&](const std::string& g, const char* what) {
    if (quads.has_graph(g)) return;
    if (unreferenced)
      throw Error(ErrorCode::DanglingReference,
                  std::string("head references missing ") + what + " graph " + g);
    throw Error(ErrorCode::MissingGraph, std::string("no ") + what + " graph " + g);
  };
  require(provenance, "provenance");
  require(pubinfo, "publication info");
  if (!quads.has_graph(assertion) && unreferenced)
    throw Error(ErrorCode::DanglingReference, "head references missing assertion graph " + assertion);

  // The described unit is whatever the head types or gives a subject, apart
  // from the nanopublication itself and opaque markers.
  const std::string& opaque = catalog.get("OpaqueSemanticUnit");
  const std::string& subj = catalog.get("hasSemanticUnitSubject");
  std::set<std::string> candidates;
  for (const auto& q : head) {
    if (q.subject == out.upri) continue;
    if ((q.predicate == type && q.object.value != opaque) || q.predicate == subj)
      candidates.insert(q.subject);
  }
  if (candidates.size() != 1 || *candidates.begin() != assertion)
    throw Error(ErrorCode::AssertionMismatch,
                "assertion graph " + assertion + " is not named after the described unit");

  UnitRecord& u = out.unit;
  u.upri = assertion;
  for (const auto& q : head) {
    if (q.subject == out.upri) continue;
    if (q.predicate == type) {
      if (q.object.value == opaque) u.opaque.insert(q.subject);
      else u.classes.insert(q.object.value);
    } else if (q.predicate == subj) {
      u.subject = q.object.value;
    } else if (q.predicate == catalog.get("hasAssociatedSemanticUnit")) {
      u.associated.push_back(q.object.value);
    } else if (q.predicate == catalog.get("hasLinkedSemanticUnit")) {
      u.linked.emplace_back(q.subject, q.object.value);
    } else if (q.predicate == catalog.get("objectDescribedBySemanticUnit")) {
      u.described_by.emplace_back(q.subject, q.object.value);
    }
  }
  std::sort(u.associated.begin(), u.associated.end());
  std::sort(u.linked.begin(), u.linked.end());
  std::sort(u.described_by.begin(), u.described_by.end());
  for (const auto& q : quads.graph(assertion)) u.data.add(q);

  const auto prov_quads = quads.graph(provenance);
  const auto info_quads = quads.graph(pubinfo);
  out.provenance = read_record(prov_quads, assertion);
  out.pubinfo = read_record(info_quads, out.upri);
  for (const auto& q : info_quads)
    if (q.subject == out.upri && q.predicate == meta::kSchema) u.schema = q.object.value;
  return out;
}

std::vector<ParsedNanopublication> parse_nanopublications(const QuadDataset& quads,
                                                          const VocabularyCatalog& catalog) {
  std::vector<ParsedNanopublication> out;
  const std::string& type = catalog.type();
  for (const auto& q : quads) {
    if (q.predicate != type || q.object.value != np::kNanopublication) continue;
    QuadDataset one;
    std::set<std::string> graphs = {q.graph};
    for (const auto& h : quads.graph(q.graph)) {
      if (h.subject == q.subject &&
          (h.predicate == np::kHasAssertion || h.predicate == np::kHasProvenance ||
           h.predicate == np::kHasPublicationInfo))
        graphs.insert(h.object.value);
    }
    for (const auto& g : graphs)
      for (const auto& x : quads.graph(g)) one.add(x);
    out.push_back(parse_nanopublication(one, catalog));
  }
  return out;
}

}  // namespace su
