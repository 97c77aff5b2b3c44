#include <utility>

#include "semunits/units.hpp"

namespace su {

RenderedLabel render_dynamic_label(const StatementUnit& unit, const QuadDataset& ds,
                                   const VocabularyCatalog& catalog) {
  RenderedLabel out;
  const auto& label_p = catalog.label();
  auto label_of = [&](const std::string& r) -> std::string {
    // Untagged labels win over tagged ones, then the smallest value.
    const Term* best = nullptr;
    for (const auto& q : ds) {
      if (q.subject != r || q.predicate != label_p || !q.object.is_literal()) continue;
      const Term& t = q.object;
      if (!best || std::make_pair(!t.lang.empty(), t.value) <
                       std::make_pair(!best->lang.empty(), best->value))
        best = &t;
    }
    if (best) return best->value;
    out.warnings.push_back("no label for " + r + "; using its local name");
    return local_name(r);
  };
  const std::string& tpl = unit.label_template;
  std::size_t i = 0;
  while (i < tpl.size()) {
    char c = tpl[i];
    if (c != '{') {
      out.text += c;
      ++i;
      continue;
    }
    auto end = tpl.find('}', i);
    if (end == std::string::npos) {
      out.text += tpl.substr(i);
      break;
    }
    std::string var = tpl.substr(i + 1, end - i - 1);
    auto it = unit.binding.find(var);
    if (it == unit.binding.end())
      throw Error(ErrorCode::UnboundPlaceholder,
                  "placeholder {" + var + "} is unbound in unit " + unit.upri);
    const Term& t = it->second;
    out.text += t.is_literal() ? t.value : label_of(t.value);
    i = end + 1;
  }
  return out;
}

}  // namespace su
