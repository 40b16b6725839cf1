#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include "fallacy/corpus.hpp"
#include "fallacy/error.hpp"
#include "fallacy/text.hpp"
#include "json.hpp"
#include "json_util.hpp"

namespace fallacy {

using nlohmann::json;

std::vector<FramedSentence> frame_propaganda(const std::vector<SentenceSlice>& sentences,
                                             const std::vector<FragmentSpan>& spans,
                                             std::optional<std::size_t> article_length) {
    std::vector<std::size_t> lengths;
    lengths.reserve(sentences.size());
    std::size_t previous_end = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        lengths.push_back(text::char_count(sentences[i].text));
        if (i > 0 && sentences[i].start < previous_end) {
            throw ValidationError("sentence " + std::to_string(i) + " overlaps or precedes the previous one");
        }
        previous_end = sentences[i].start + lengths.back();
    }
    const std::size_t bound = article_length.value_or(previous_end);
    if (article_length && previous_end > *article_length) {
        throw ValidationError("sentences extend past the article");
    }

    for (const auto& span : spans) {
        if (span.start >= span.end) {
            throw ValidationError("span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                                  ") is empty or reversed");
        }
        if (span.end > bound) {
            throw ValidationError("span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                                  ") outside the article (length " + std::to_string(bound) + ")");
        }
    }

    // Strict weak order: longer first, then earlier start, then label.
    auto better = [](const FragmentSpan& a, const FragmentSpan& b) {
        if (a.length() != b.length()) return a.length() > b.length();
        if (a.start != b.start) return a.start < b.start;
        return a.label < b.label;
    };

    std::vector<FramedSentence> out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const std::size_t begin = sentences[i].start;
        const std::size_t end = begin + lengths[i];
        const FragmentSpan* best = nullptr;
        for (const auto& span : spans) {
            if (span.start < begin || span.end > end) continue;
            if (best == nullptr || better(span, *best)) best = &span;
        }
        if (best == nullptr) continue;
        FramedSentence framed;
        framed.sentence_index = i;
        framed.sentence = sentences[i].text;
        framed.fragment_start = best->start - begin;
        framed.fragment_end = best->end - begin;
        framed.fragment = std::string(text::char_slice(framed.sentence, framed.fragment_start, framed.fragment_end));
        framed.original_label = best->label;
        out.push_back(std::move(framed));
    }
    return out;
}

std::vector<SentenceSlice> naive_sentence_split(std::string_view article) {
    std::vector<SentenceSlice> out;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    auto emit = [&](std::size_t b, std::size_t e) {
        while (b < e && is_space(article[b])) ++b;
        while (e > b && is_space(article[e - 1])) --e;
        if (b == e) return;
        out.push_back({std::string(article.substr(b, e - b)), text::char_count(article.substr(0, b))});
    };

    std::size_t begin = 0;
    for (std::size_t i = 0; i < article.size(); ++i) {
        const char c = article[i];
        if (c == '\n') {
            emit(begin, i);
            begin = i + 1;
        } else if ((c == '.' || c == '!' || c == '?') && i + 1 < article.size() && article[i + 1] == ' ') {
            emit(begin, i + 1);
            begin = i + 1;
        }
    }
    emit(begin, article.size());
    return out;
}

ArticleIngest parse_propaganda_articles(std::istream& in, const SchemeRegistry& registry) {
    ArticleIngest result;
    std::set<std::string, std::less<>> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            json obj;
            try {
                obj = json::parse(line);
            } catch (const json::parse_error& e) {
                throw ParseError(std::string("invalid JSON: ") + e.what());
            }
            if (!obj.is_object()) throw ParseError("line is not a JSON object");
            const auto id = detail::required_string(obj, "id");
            const auto body = detail::required_string(obj, "text");
            std::optional<Split> split;
            if (auto s = detail::optional_string(obj, "split"); s && !text::trim(*s).empty()) {
                split = parse_split(*s);
                if (!split) throw ParseError("unknown split \"" + *s + "\"");
            }

            std::vector<SentenceSlice> sentences;
            if (auto it = obj.find("sentences"); it != obj.end() && !it->is_null()) {
                for (const auto& s : *it) {
                    const auto start = detail::optional_index(s, "start");
                    const auto end = detail::optional_index(s, "end");
                    if (!start || !end || *start > *end) throw ParseError("sentence needs start <= end");
                    sentences.push_back({std::string(text::char_slice(body, *start, *end)), *start});
                }
            } else {
                sentences = naive_sentence_split(body);
            }

            std::vector<FragmentSpan> spans;
            for (const auto& s : obj.value("spans", json::array())) {
                const auto start = detail::optional_index(s, "start");
                const auto end = detail::optional_index(s, "end");
                if (!start || !end) throw ParseError("span needs start and end");
                auto label = detail::required_string(s, "label");
                if (!registry.try_unify_label(DatasetKind::Propaganda, label)) {
                    ++result.ignored_spans;
                    continue;
                }
                spans.push_back({*start, *end, std::move(label)});
            }

            std::vector<FallacyRecord> article_records;
            for (auto& framed : frame_propaganda(sentences, spans, text::char_count(body))) {
                FallacyRecord r;
                r.id = id + "-s" + std::to_string(framed.sentence_index);
                r.dataset = DatasetKind::Propaganda;
                r.split = split;
                r.sentence = std::move(framed.sentence);
                r.fragment_start = framed.fragment_start;
                r.fragment_end = framed.fragment_end;
                r.original_label = std::move(framed.original_label);
                r.unified_label = registry.unify_label(DatasetKind::Propaganda, r.original_label);
                validate_record(r, registry);
                article_records.push_back(std::move(r));
            }
            if (!ids.insert(id).second) throw ValidationError("duplicate article id \"" + id + "\"");
            for (auto& r : article_records) result.records.push_back(std::move(r));
        } catch (const std::exception& e) {
            result.errors.push_back({line_no, e.what()});
        }
    }
    return result;
}

ArticleIngest load_propaganda_articles(const std::filesystem::path& path, const SchemeRegistry& registry) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return parse_propaganda_articles(in, registry);
}

}  // namespace fallacy
