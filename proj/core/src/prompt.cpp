#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "fallacy/error.hpp"
#include "fallacy/prompt.hpp"
#include "fallacy/text.hpp"
#include "json.hpp"
#include "json_util.hpp"
#include "prompt_internal.hpp"

namespace fallacy {

std::string to_string(const PromptVariant& v) {
    std::string out = v.style == PromptStyle::List ? "list" : "def";
    if (v.fragment == FragmentMode::Omitted) out += "/nofrag";
    if (v.fragment == FragmentMode::AsTarget) out += "/frag";
    if (v.comment == CommentMode::WithComment) out += "/comment";
    return out;
}

std::optional<PromptStyle> parse_style(std::string_view t) {
    t = text::trim(t);
    if (text::iequals(t, "list")) return PromptStyle::List;
    if (text::iequals(t, "def")) return PromptStyle::Def;
    return std::nullopt;
}

std::optional<FragmentMode> parse_fragment_mode(std::string_view t) {
    t = text::trim(t);
    if (text::iequals(t, "inprompt") || text::iequals(t, "in-prompt")) return FragmentMode::InPrompt;
    if (text::iequals(t, "omitted") || text::iequals(t, "nofrag")) return FragmentMode::Omitted;
    if (text::iequals(t, "astarget") || text::iequals(t, "as-target") || text::iequals(t, "frag"))
        return FragmentMode::AsTarget;
    return std::nullopt;
}

std::optional<CommentMode> parse_comment_mode(std::string_view t) {
    t = text::trim(t);
    if (text::iequals(t, "with") || text::iequals(t, "comment")) return CommentMode::WithComment;
    if (text::iequals(t, "without") || text::iequals(t, "nocomment")) return CommentMode::WithoutComment;
    return std::nullopt;
}

std::optional<Phase> parse_phase(std::string_view t) {
    t = text::trim(t);
    if (text::iequals(t, "train")) return Phase::Train;
    if (text::iequals(t, "eval")) return Phase::Eval;
    return std::nullopt;
}

std::optional<PromptVariant> parse_variant(std::string_view t) {
    PromptVariant v;
    std::size_t at = 0;
    bool first = true;
    while (at <= t.size()) {
        const auto slash = t.find('/', at);
        const auto part = t.substr(at, slash == std::string_view::npos ? std::string_view::npos : slash - at);
        if (first) {
            auto style = parse_style(part);
            if (!style) return std::nullopt;
            v.style = *style;
            first = false;
        } else if (part == "nofrag") {
            v.fragment = FragmentMode::Omitted;
        } else if (part == "frag") {
            v.fragment = FragmentMode::AsTarget;
        } else if (part == "comment") {
            v.comment = CommentMode::WithComment;
        } else {
            return std::nullopt;
        }
        if (slash == std::string_view::npos) break;
        at = slash + 1;
    }
    return v;
}

bool variant_allowed(DatasetKind dataset, const PromptVariant& v) {
    if (v.fragment != FragmentMode::InPrompt && dataset != DatasetKind::Propaganda) return false;
    if (v.comment != CommentMode::WithoutComment && dataset != DatasetKind::Climate) return false;
    return true;
}

PromptVariant normalize_variant(DatasetKind dataset, PromptVariant v) {
    if (dataset != DatasetKind::Propaganda) v.fragment = FragmentMode::InPrompt;
    if (dataset != DatasetKind::Climate) v.comment = CommentMode::WithoutComment;
    return v;
}

std::vector<PromptVariant> variants_for(DatasetKind dataset, Phase phase, const PromptVariant& eval_variant) {
    if (phase == Phase::Eval) return {normalize_variant(dataset, eval_variant)};
    std::vector<PromptVariant> out;
    for (auto style : {PromptStyle::List, PromptStyle::Def}) {
        switch (dataset) {
            case DatasetKind::Propaganda:
                for (auto f : {FragmentMode::InPrompt, FragmentMode::Omitted, FragmentMode::AsTarget})
                    out.push_back({style, f, CommentMode::WithoutComment});
                break;
            case DatasetKind::Climate:
                for (auto c : {CommentMode::WithoutComment, CommentMode::WithComment})
                    out.push_back({style, FragmentMode::InPrompt, c});
                break;
            default:
                out.push_back({style, FragmentMode::InPrompt, CommentMode::WithoutComment});
        }
    }
    return out;
}

namespace detail {

namespace {

std::string label_block(const SchemeRegistry& registry, DatasetKind dataset, bool definitions) {
    std::string out;
    for (const auto& name : registry.scheme_labels(dataset)) {
        if (!out.empty()) out += '\n';
        out += kLabelBullet;
        out += name;
        if (definitions) {
            out += kDefinitionSeparator;
            out += registry.definition(name);
        }
    }
    return out;
}

std::optional<RecordField> field_of(Placeholder p) {
    switch (p) {
        case Placeholder::Question: return RecordField::Question;
        case Placeholder::Answer: return RecordField::Answer;
        case Placeholder::Sentence: return RecordField::Sentence;
        case Placeholder::Fragment: return RecordField::Fragment;
        case Placeholder::Segment: return RecordField::Segment;
        case Placeholder::Comment: return RecordField::Comment;
        default: return std::nullopt;
    }
}

std::string field_text(const FallacyRecord& r, RecordField f) {
    auto need = [&r](const std::optional<std::string>& v, const char* name) -> std::string {
        if (!v) throw RenderError("record \"" + r.id + "\" has no " + name);
        return *v;
    };
    switch (f) {
        case RecordField::Question: return need(r.question, "question");
        case RecordField::Answer: return need(r.answer, "answer");
        case RecordField::Sentence: return need(r.sentence, "sentence");
        case RecordField::Fragment: return need(r.fragment(), "fragment");
        case RecordField::Segment: return need(r.segment, "segment");
        case RecordField::Comment: return r.comment.value_or("");
    }
    return {};
}

}  // namespace

void expand_pieces(const PromptTemplate& tmpl, std::size_t first, std::size_t last, const FallacyRecord& record,
                   const SchemeRegistry& registry, std::string& out, std::vector<FieldSpan>* spans) {
    const auto& pieces = tmpl.pieces();
    for (std::size_t i = first; i < last && i < pieces.size(); ++i) {
        const auto& piece = pieces[i];
        if (!piece.is_placeholder) {
            out += piece.literal;
            continue;
        }
        if (piece.placeholder == Placeholder::Labels || piece.placeholder == Placeholder::Definitions) {
            out += label_block(registry, record.dataset, piece.placeholder == Placeholder::Definitions);
            continue;
        }
        const auto field = *field_of(piece.placeholder);
        const auto value = field_text(record, field);
        if (spans != nullptr) spans->push_back({field, out.size(), value.size()});
        out += value;
    }
}

}  // namespace detail

RenderedInstance render(const FallacyRecord& record, const PromptVariant& variant, const SchemeRegistry& registry,
                        const TemplateSet& templates) {
    if (!variant_allowed(record.dataset, variant)) {
        throw RenderError("variant " + to_string(variant) + " is not defined for " +
                          std::string(to_string(record.dataset)));
    }
    if (record.unified_label.empty()) {
        throw RenderError("record \"" + record.id + "\" has no unified label");
    }
    validate_record(record, registry);

    const auto& tmpl = templates.get(record.dataset, variant);
    RenderedInstance out;
    out.record_id = record.id;
    out.dataset = record.dataset;
    out.variant = variant;
    detail::expand_pieces(tmpl, 0, tmpl.pieces().size(), record, registry, out.source, &out.fields);
    out.target = record.unified_label;
    if (variant.fragment == FragmentMode::AsTarget) {
        out.target += kFragmentTargetSeparator;
        out.target += *record.fragment();
    }
    return out;
}

std::vector<RenderedInstance> render_all(const std::vector<FallacyRecord>& records, Phase phase,
                                         const SchemeRegistry& registry, const TemplateSet& templates,
                                         const PromptVariant& eval_variant) {
    std::vector<RenderedInstance> out;
    for (const auto& record : records) {
        for (const auto& variant : variants_for(record.dataset, phase, eval_variant)) {
            out.push_back(render(record, variant, registry, templates));
        }
    }
    return out;
}

std::optional<std::pair<std::string, std::string>> parse_fragment_target(std::string_view target) {
    const auto at = target.find(kFragmentTargetSeparator);
    if (at == std::string_view::npos) return std::nullopt;
    return std::make_pair(std::string(target.substr(0, at)),
                          std::string(target.substr(at + kFragmentTargetSeparator.size())));
}

RenderedInstance budget_truncate(const RenderedInstance& instance, std::size_t max_source_chars,
                                 std::size_t max_target_chars) {
    if (max_source_chars == 0 || max_target_chars == 0) throw std::invalid_argument("budgets must be positive");
    if (text::char_count(instance.target) > max_target_chars) {
        throw RenderError("target of \"" + instance.record_id + "\" exceeds " + std::to_string(max_target_chars) +
                          " characters");
    }
    const std::size_t total = text::char_count(instance.source);
    if (total <= max_source_chars) return instance;

    auto spans = instance.fields;
    std::sort(spans.begin(), spans.end(), [](const FieldSpan& a, const FieldSpan& b) { return a.offset < b.offset; });

    std::vector<std::string> values;
    std::size_t truncatable = 0;
    for (const auto& s : spans) {
        values.emplace_back(instance.source.substr(s.offset, s.length));
        if (s.field != RecordField::Fragment) truncatable += text::char_count(values.back());
    }
    if (total - truncatable > max_source_chars) {
        throw RenderError("instruction text of \"" + instance.record_id + "\" alone exceeds " +
                          std::to_string(max_source_chars) + " characters");
    }

    std::size_t excess = total - max_source_chars;
    for (std::size_t i = spans.size(); i-- > 0 && excess > 0;) {
        if (spans[i].field == RecordField::Fragment) continue;
        const std::size_t chars = text::char_count(values[i]);
        const std::size_t cut = std::min(excess, chars);
        values[i].resize(text::byte_offset(values[i], chars - cut));
        excess -= cut;
    }

    RenderedInstance out = instance;
    out.source.clear();
    out.fields.clear();
    std::size_t previous = 0;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        out.source.append(instance.source, previous, spans[i].offset - previous);
        out.fields.push_back({spans[i].field, out.source.size(), values[i].size()});
        out.source += values[i];
        previous = spans[i].offset + spans[i].length;
    }
    out.source.append(instance.source, previous);
    return out;
}

std::string serialize_instance(const RenderedInstance& instance) {
    nlohmann::ordered_json obj;
    obj["record_id"] = instance.record_id;
    obj["dataset"] = std::string(to_string(instance.dataset));
    obj["variant"] = to_string(instance.variant);
    obj["source"] = instance.source;
    obj["target"] = instance.target;
    return obj.dump();
}

void write_instances(std::ostream& out, const std::vector<RenderedInstance>& instances) {
    for (const auto& instance : instances) out << serialize_instance(instance) << '\n';
}

std::vector<RenderedInstance> read_instances(std::istream& in) {
    std::vector<RenderedInstance> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            const auto obj = nlohmann::json::parse(line);
            RenderedInstance instance;
            instance.record_id = detail::required_string(obj, "record_id");
            const auto dataset = detail::required_string(obj, "dataset");
            auto kind = parse_dataset(dataset);
            if (!kind) throw ParseError("unknown dataset \"" + dataset + "\"");
            instance.dataset = *kind;
            const auto variant = detail::required_string(obj, "variant");
            auto v = parse_variant(variant);
            if (!v) throw ParseError("unknown variant \"" + variant + "\"");
            instance.variant = *v;
            instance.source = detail::required_string(obj, "source");
            instance.target = detail::required_string(obj, "target");
            out.push_back(std::move(instance));
        } catch (const std::exception& e) {
            throw ParseError("instances line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<RenderedInstance> read_instances(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return read_instances(in);
}

}  // namespace fallacy
