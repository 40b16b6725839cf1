#pragma once

#include <string>
#include <vector>

#include "fallacy/prompt.hpp"

namespace fallacy::detail {

/// Appends the pieces [first, last) of `tmpl` to `out`, recording field spans.
void expand_pieces(const PromptTemplate& tmpl, std::size_t first, std::size_t last, const FallacyRecord& record,
                   const SchemeRegistry& registry, std::string& out, std::vector<FieldSpan>* spans);

}  // namespace fallacy::detail
