#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fallacy/corpus.hpp"
#include "fallacy/registry.hpp"

namespace fallacy {

enum class PromptStyle { List, Def };
enum class FragmentMode { InPrompt, Omitted, AsTarget };
enum class CommentMode { WithoutComment, WithComment };
enum class Phase { Train, Eval };

struct PromptVariant {
    PromptStyle style = PromptStyle::List;
    FragmentMode fragment = FragmentMode::InPrompt;
    CommentMode comment = CommentMode::WithoutComment;

    auto operator<=>(const PromptVariant&) const = default;
};

/// "list", "def", "list/nofrag", "def/frag", "list/comment", ...
std::string to_string(const PromptVariant& variant);
std::optional<PromptVariant> parse_variant(std::string_view text);

std::optional<PromptStyle> parse_style(std::string_view text);
std::optional<FragmentMode> parse_fragment_mode(std::string_view text);
std::optional<CommentMode> parse_comment_mode(std::string_view text);
std::optional<Phase> parse_phase(std::string_view text);

/// Fragment modes only apply to Propaganda, comment modes only to Climate.
bool variant_allowed(DatasetKind dataset, const PromptVariant& variant);

/// Drops the modes that do not apply to `dataset`.
PromptVariant normalize_variant(DatasetKind dataset, PromptVariant variant);

/// Train: every variant for the dataset in a fixed order. Eval: the single
/// `eval_variant`, normalized for the dataset.
std::vector<PromptVariant> variants_for(DatasetKind dataset, Phase phase,
                                        const PromptVariant& eval_variant = {});

// ---------------------------------------------------------------------------
// Templates

/// Rendered label lists use one bullet line per label; Def lines append
/// ": <definition>". The mock backend relies on this layout.
inline constexpr std::string_view kLabelBullet = "- ";
inline constexpr std::string_view kDefinitionSeparator = ": ";
inline constexpr std::string_view kFragmentTargetSeparator = " ; ";
inline constexpr std::string_view kInstructionLeadIn = "Given a text segment";

enum class Placeholder { Labels, Definitions, Question, Answer, Sentence, Fragment, Segment, Comment };

std::string_view to_string(Placeholder placeholder);

/// A parsed template: literal text interleaved with `{name}` placeholders.
/// `{{` and `}}` escape literal braces.
class PromptTemplate {
public:
    struct Piece {
        bool is_placeholder = false;
        std::string literal;
        Placeholder placeholder = Placeholder::Labels;
    };

    static PromptTemplate parse(std::string_view text);

    const std::vector<Piece>& pieces() const noexcept { return pieces_; }
    std::size_t count(Placeholder placeholder) const;

private:
    std::vector<Piece> pieces_;
};

/// One template per (dataset, variant), loaded from `<dir>/<file_name()>`.
class TemplateSet {
public:
    static TemplateSet load(const std::filesystem::path& dir);

    /// e.g. "propaganda.def.nofrag.txt", "climate.list.comment.txt".
    static std::string file_name(DatasetKind dataset, const PromptVariant& variant);

    void add(DatasetKind dataset, const PromptVariant& variant, PromptTemplate tmpl);
    const PromptTemplate& get(DatasetKind dataset, const PromptVariant& variant) const;

private:
    std::map<std::pair<DatasetKind, PromptVariant>, PromptTemplate> templates_;
};

// ---------------------------------------------------------------------------
// Rendering

enum class RecordField { Question, Answer, Sentence, Fragment, Segment, Comment };

/// Where a record field was substituted into a rendered source (bytes).
struct FieldSpan {
    RecordField field;
    std::size_t offset = 0;
    std::size_t length = 0;
};

struct RenderedInstance {
    std::string record_id;
    DatasetKind dataset = DatasetKind::Argotario;
    PromptVariant variant;
    std::string source;
    std::string target;
    /// Populated by render(); empty for instances read back from a file.
    std::vector<FieldSpan> fields;
};

class RenderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RenderedInstance render(const FallacyRecord& record, const PromptVariant& variant,
                        const SchemeRegistry& registry, const TemplateSet& templates);

std::vector<RenderedInstance> render_all(const std::vector<FallacyRecord>& records, Phase phase,
                                         const SchemeRegistry& registry,
                                         const TemplateSet& templates,
                                         const PromptVariant& eval_variant = {});

/// Splits an AsTarget target on the first " ; " into (label, fragment).
std::optional<std::pair<std::string, std::string>> parse_fragment_target(std::string_view target);

/// Cuts free-text record fields from their tails (last field in the source
/// first) until the source fits `max_source_chars`. The fragment, the
/// instruction and label list are never cut. Throws RenderError when the
/// target is over budget or the non-truncatable text alone is.
RenderedInstance budget_truncate(const RenderedInstance& instance, std::size_t max_source_chars,
                                 std::size_t max_target_chars);

std::string serialize_instance(const RenderedInstance& instance);
void write_instances(std::ostream& out, const std::vector<RenderedInstance>& instances);
std::vector<RenderedInstance> read_instances(std::istream& in);
std::vector<RenderedInstance> read_instances(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Few-shot prompts

struct FewShotSpec {
    DatasetKind dataset = DatasetKind::Argotario;
    std::size_t shots_per_class = 1;
    bool with_explanations = false;
    std::uint64_t seed = 0;
};

inline constexpr std::string_view kExemplarDelimiter = "###";
inline constexpr std::string_view kExplanationPrefix = "Explanation: ";

/// List-style header, then shots_per_class exemplars per scheme label (in
/// scheme order, sampled with a seeded shuffle from train-split records of the
/// dataset), each opened by a "###" line, then the query with an empty answer
/// slot. Throws RenderError when a class has too few exemplars.
std::string build_fewshot(const FewShotSpec& spec, const std::vector<FallacyRecord>& train_records,
                          const SchemeRegistry& registry, const TemplateSet& templates,
                          const FallacyRecord& query);

}  // namespace fallacy
