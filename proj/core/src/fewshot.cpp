#include <limits>
#include <random>

#include "fallacy/prompt.hpp"
#include "fallacy/text.hpp"
#include "prompt_internal.hpp"

namespace fallacy {

namespace {

std::uint64_t label_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return seed ^ h;
}

// Unbiased draw in [0, n); mt19937_64's output sequence is fixed by the
// standard, unlike the std distributions.
std::size_t draw(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t range = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return static_cast<std::size_t>(x % range);
}

std::string trim_leading_newlines(std::string s) {
    const auto at = s.find_first_not_of("\r\n");
    return at == std::string::npos ? std::string() : s.substr(at);
}

}  // namespace

std::string build_fewshot(const FewShotSpec& spec, const std::vector<FallacyRecord>& train_records,
                          const SchemeRegistry& registry, const TemplateSet& templates, const FallacyRecord& query) {
    if (spec.shots_per_class == 0) throw std::invalid_argument("shots_per_class must be positive");
    if (query.dataset != spec.dataset) throw RenderError("query record is from another dataset");
    validate_record(query, registry);

    const auto& tmpl = templates.get(spec.dataset, PromptVariant{});
    std::size_t list_at = 0;
    while (list_at < tmpl.pieces().size() &&
           !(tmpl.pieces()[list_at].is_placeholder && tmpl.pieces()[list_at].placeholder == Placeholder::Labels)) {
        ++list_at;
    }

    std::string prompt;
    detail::expand_pieces(tmpl, 0, list_at + 1, query, registry, prompt, nullptr);
    prompt += "\n\n";

    auto body = [&](const FallacyRecord& r) {
        std::string out;
        detail::expand_pieces(tmpl, list_at + 1, tmpl.pieces().size(), r, registry, out, nullptr);
        return trim_leading_newlines(std::move(out));
    };

    for (const auto& label : registry.scheme_labels(spec.dataset)) {
        std::vector<const FallacyRecord*> pool;
        for (const auto& r : train_records) {
            if (r.dataset != spec.dataset || r.split != Split::Train || r.unified_label != label) continue;
            if (r.id == query.id) continue;
            if (spec.with_explanations && (!r.explanation || text::trim(*r.explanation).empty())) continue;
            pool.push_back(&r);
        }
        if (pool.size() < spec.shots_per_class) {
            throw RenderError("only " + std::to_string(pool.size()) + " train exemplars for \"" + label + "\" (" +
                              std::to_string(spec.shots_per_class) + " needed)");
        }
        std::mt19937_64 rng(label_seed(spec.seed, label));
        for (std::size_t i = 0; i < spec.shots_per_class; ++i) {
            std::swap(pool[i], pool[i + draw(rng, pool.size() - i)]);
            const auto& exemplar = *pool[i];
            prompt += kExemplarDelimiter;
            prompt += '\n';
            prompt += body(exemplar);
            prompt += ' ';
            prompt += label;
            if (spec.with_explanations) {
                prompt += '\n';
                prompt += kExplanationPrefix;
                prompt += std::string(text::trim(*exemplar.explanation));
            }
            prompt += "\n\n";
        }
    }
    prompt += body(query);
    return prompt;
}

}  // namespace fallacy
