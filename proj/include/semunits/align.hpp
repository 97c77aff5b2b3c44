#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semunits/compound.hpp"
#include "semunits/units.hpp"

namespace su {

// A dataset after partitioning and compounding.
struct ProcessedGraph {
  QuadDataset dataset;  // input data plus unit layer
  PartitionResult partition;
  CompoundResult compounds;
};

enum class AlignLevel { ItemGroup, Item, Statement, Triple };
const char* to_string(AlignLevel l);

struct Correspondence {
  AlignLevel level = AlignLevel::ItemGroup;
  std::string left;
  std::string right;
  std::uint64_t num = 0;  // score = num / den, reduced
  std::uint64_t den = 1;

  bool exact() const { return num == den; }
  std::string score() const;
};

struct AlignmentReport {
  std::vector<Correspondence> correspondences;
  std::map<AlignLevel, std::vector<std::string>> unmatched_left;
  std::map<AlignLevel, std::vector<std::string>> unmatched_right;
  std::vector<std::string> diagnostics;
};

// Greedy matching level by level: item groups, then items inside matched
// groups, statement units inside matched items, then the rest of each matched
// group, then statement units outside every group; last, triples inside
// matched statement units.
// Scores are multiset Jaccard overlaps of signatures; ties go to the
// lexicographically smallest (left, right) pair.
AlignmentReport align_graphs(const ProcessedGraph& a, const ProcessedGraph& b,
                             const VocabularyCatalog& catalog);

// `level<TAB>left<TAB>right<TAB>score` per correspondence, then
// `unmatched-left|unmatched-right<TAB>level<TAB>id` and `# diagnostic` lines.
std::string format_report(const AlignmentReport& r);

}  // namespace su
