#include <fstream>
#include <sstream>

#include "fallacy/error.hpp"
#include "fallacy/prompt.hpp"
#include "fallacy/text.hpp"

namespace fallacy {

std::string_view to_string(Placeholder placeholder) {
    switch (placeholder) {
        case Placeholder::Labels: return "labels";
        case Placeholder::Definitions: return "definitions";
        case Placeholder::Question: return "question";
        case Placeholder::Answer: return "answer";
        case Placeholder::Sentence: return "sentence";
        case Placeholder::Fragment: return "fragment";
        case Placeholder::Segment: return "segment";
        case Placeholder::Comment: return "comment";
    }
    return "?";
}

namespace {

std::optional<Placeholder> parse_placeholder(std::string_view name) {
    for (auto p : {Placeholder::Labels, Placeholder::Definitions, Placeholder::Question, Placeholder::Answer,
                   Placeholder::Sentence, Placeholder::Fragment, Placeholder::Segment, Placeholder::Comment}) {
        if (name == to_string(p)) return p;
    }
    return std::nullopt;
}

std::string dataset_stem(DatasetKind kind) { return text::ascii_lower(to_string(kind)); }

}  // namespace

PromptTemplate PromptTemplate::parse(std::string_view src) {
    PromptTemplate tmpl;
    std::string literal;
    auto flush = [&] {
        if (!literal.empty()) tmpl.pieces_.push_back({false, std::move(literal), Placeholder::Labels});
        literal.clear();
    };
    for (std::size_t i = 0; i < src.size(); ++i) {
        const char c = src[i];
        if (c == '{' && i + 1 < src.size() && src[i + 1] == '{') {
            literal += '{';
            ++i;
        } else if (c == '}' && i + 1 < src.size() && src[i + 1] == '}') {
            literal += '}';
            ++i;
        } else if (c == '{') {
            const auto close = src.find('}', i);
            if (close == std::string_view::npos) {
                throw ParseError("template: unterminated placeholder at offset " + std::to_string(i));
            }
            const auto name = src.substr(i + 1, close - i - 1);
            auto p = parse_placeholder(name);
            if (!p) throw ParseError("template: unknown placeholder {" + std::string(name) + "}");
            flush();
            tmpl.pieces_.push_back({true, {}, *p});
            i = close;
        } else if (c == '}') {
            throw ParseError("template: stray '}' at offset " + std::to_string(i));
        } else {
            literal += c;
        }
    }
    flush();
    return tmpl;
}

std::size_t PromptTemplate::count(Placeholder placeholder) const {
    std::size_t n = 0;
    for (const auto& piece : pieces_) n += piece.is_placeholder && piece.placeholder == placeholder;
    return n;
}

std::string TemplateSet::file_name(DatasetKind dataset, const PromptVariant& variant) {
    std::string name = dataset_stem(dataset);
    name += variant.style == PromptStyle::List ? ".list" : ".def";
    if (dataset == DatasetKind::Propaganda) {
        if (variant.fragment == FragmentMode::Omitted) name += ".nofrag";
        if (variant.fragment == FragmentMode::AsTarget) name += ".frag";
    }
    if (dataset == DatasetKind::Climate && variant.comment == CommentMode::WithComment) name += ".comment";
    return name + ".txt";
}

namespace {

void check_template(const PromptTemplate& t, DatasetKind dataset, const PromptVariant& v, const std::string& name) {
    auto fail = [&](const std::string& why) { throw ValidationError("template " + name + ": " + why); };
    const bool list = v.style == PromptStyle::List;
    if (t.count(list ? Placeholder::Labels : Placeholder::Definitions) != 1) {
        fail(list ? "needs exactly one {labels}" : "needs exactly one {definitions}");
    }
    if (t.count(list ? Placeholder::Definitions : Placeholder::Labels) != 0) {
        fail(list ? "List templates cannot use {definitions}" : "Def templates cannot use {labels}");
    }

    // The label list opens on its own line after a non-empty instruction, and
    // comes before any record text.
    const auto& pieces = t.pieces();
    if (pieces.empty() || pieces.front().is_placeholder || text::trim(pieces.front().literal).empty()) {
        fail("must start with instruction text");
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!pieces[i].is_placeholder) continue;
        const auto p = pieces[i].placeholder;
        if (p == Placeholder::Labels || p == Placeholder::Definitions) {
            if (i != 1 || pieces[0].literal.back() != '\n') fail("label list must directly follow the opening line(s)");
            break;
        }
    }

    auto need = [&](Placeholder p) {
        if (t.count(p) == 0) fail("missing {" + std::string(to_string(p)) + "}");
    };
    auto forbid = [&](Placeholder p) {
        if (t.count(p) != 0) fail("{" + std::string(to_string(p)) + "} not allowed here");
    };
    switch (dataset) {
        case DatasetKind::Argotario:
            need(Placeholder::Question);
            need(Placeholder::Answer);
            for (auto p : {Placeholder::Sentence, Placeholder::Fragment, Placeholder::Segment, Placeholder::Comment})
                forbid(p);
            break;
        case DatasetKind::Propaganda:
            need(Placeholder::Sentence);
            if (v.fragment == FragmentMode::InPrompt) need(Placeholder::Fragment);
            else forbid(Placeholder::Fragment);
            for (auto p : {Placeholder::Question, Placeholder::Answer, Placeholder::Segment, Placeholder::Comment})
                forbid(p);
            break;
        case DatasetKind::Logic:
        case DatasetKind::Covid19:
        case DatasetKind::Climate:
            need(Placeholder::Segment);
            if (dataset == DatasetKind::Climate && v.comment == CommentMode::WithComment) need(Placeholder::Comment);
            else forbid(Placeholder::Comment);
            for (auto p : {Placeholder::Question, Placeholder::Answer, Placeholder::Sentence, Placeholder::Fragment})
                forbid(p);
            break;
    }
}

}  // namespace

void TemplateSet::add(DatasetKind dataset, const PromptVariant& variant, PromptTemplate tmpl) {
    const auto v = normalize_variant(dataset, variant);
    check_template(tmpl, dataset, v, file_name(dataset, v));
    templates_.insert_or_assign({dataset, v}, std::move(tmpl));
}

const PromptTemplate& TemplateSet::get(DatasetKind dataset, const PromptVariant& variant) const {
    auto it = templates_.find({dataset, normalize_variant(dataset, variant)});
    if (it == templates_.end()) {
        throw RenderError("no template for " + file_name(dataset, variant));
    }
    return it->second;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
    TemplateSet set;
    for (auto dataset : kAllDatasets) {
        for (const auto& variant : variants_for(dataset, Phase::Train)) {
            const auto path = dir / file_name(dataset, variant);
            std::ifstream in(path, std::ios::binary);
            if (!in) throw ParseError("template: cannot open " + path.string());
            std::stringstream buffer;
            buffer << in.rdbuf();
            std::string body = buffer.str();
            // One trailing newline is file formatting, not prompt text.
            if (!body.empty() && body.back() == '\n') body.pop_back();
            if (!body.empty() && body.back() == '\r') body.pop_back();
            try {
                set.add(dataset, variant, PromptTemplate::parse(body));
            } catch (const ParseError& e) {
                throw ParseError(path.filename().string() + ": " + e.what());
            }
        }
    }
    return set;
}

}  // namespace fallacy
