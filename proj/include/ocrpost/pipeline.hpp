#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocrpost/image.hpp"
#include "ocrpost/lexicon.hpp"
#include "ocrpost/metrics.hpp"
#include "ocrpost/respace.hpp"
#include "ocrpost/segmentation.hpp"
#include "ocrpost/spellfix.hpp"

namespace ocrpost {

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class LineClass { Handwritten, Printed, Unknown };

std::string to_string(LineClass label);
LineClass line_class_from_string(std::string_view s);

struct ClassifierConfig {
    enum class Mode { Heuristic, External, Fixed };
    Mode mode = Mode::Heuristic;
    std::string command;  // external mode; receives the crop path
    LineClass fixed_label = LineClass::Unknown;
};

struct Classification {
    LineClass label = LineClass::Unknown;
    double confidence = 0.0;
};

enum class PostStage { Respace, SpellfixNorvig, SpellfixSymspell };

std::string to_string(PostStage stage);
std::vector<PostStage> parse_chain(std::string_view csv);  // "respace,symspell"

struct PipelineConfig {
    std::string ocr_command;      // template: {path} and {label} expand
    std::string transcript_path;  // alternative backend: line index -> text
    ClassifierConfig classifier;
    std::vector<PostStage> chain{PostStage::Respace, PostStage::SpellfixSymspell};
    std::string lexicon_path;  // empty: OCRPOST_LEXICON, then bundled data
    int chunk_size = 128;
    double ocr_timeout_seconds = 120.0;
    std::string work_dir;  // where line crops are written; empty = temp dir
    SegmentConfig segment;
    RespaceConfig respace;
    int workers = 1;  // parallel line workers; output order is unaffected
};

struct LineRecord {
    int index = 0;
    std::string crop_path;
    LineClass class_label = LineClass::Unknown;
    double confidence = 0.0;
    std::string ocr_text;
    std::string corrected_text;
    bool ocr_failed = false;
};

struct RunReport {
    std::vector<LineRecord> lines;
    std::string document_text;  // corrected lines joined by newline
    std::optional<EvalReport> metrics;
    std::map<std::string, double> timings_ms;

    std::string to_json() const;  // schema_version 1
    static RunReport from_json(const std::string& json_text);
};

// Heuristic mode measures the variance of per-row ink run lengths
// (printed text runs are uniform); external mode parses
// "label<TAB>confidence" from the command output.
Classification classify_line(const GrayImage& crop, const ClassifierConfig& cfg,
                             const std::string& crop_path = {});

// Post-processing stages share one lexicon and (when symspell is in the
// chain) one delete index, both owned by the processor.
class PostProcessor {
public:
    PostProcessor(std::vector<PostStage> chain, Lexicon lex, RespaceConfig respace_cfg = {});
    std::string apply(std::string_view text) const;
    const std::vector<PostStage>& chain() const { return chain_; }
    const Lexicon& lexicon() const { return lex_; }

private:
    std::vector<PostStage> chain_;
    Lexicon lex_;
    RespaceConfig respace_cfg_;
    std::unique_ptr<DeleteIndex> index_;
};

// Whitespace tokens grouped into consecutive chunks (last may be shorter).
std::vector<std::string> chunk_words(std::string_view text, int chunk_size);

// Default lexicon resolution: explicit path, else OCRPOST_LEXICON, else the
// bundled data file.
std::string resolve_lexicon_path(const std::string& explicit_path);

RunReport run_document(const std::string& image_path, const PipelineConfig& cfg,
                       const std::string& reference_path = {});

}  // namespace ocrpost
