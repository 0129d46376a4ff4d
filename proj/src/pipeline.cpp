#include "ocrpost/pipeline.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ocrpost/subprocess.hpp"

namespace ocrpost {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(LineClass label) {
    switch (label) {
        case LineClass::Handwritten: return "handwritten";
        case LineClass::Printed: return "printed";
        default: return "unknown";
    }
}

LineClass line_class_from_string(std::string_view s) {
    if (s == "handwritten") return LineClass::Handwritten;
    if (s == "printed") return LineClass::Printed;
    if (s == "unknown") return LineClass::Unknown;
    throw std::invalid_argument("unknown line class '" + std::string(s) + "'");
}

std::string to_string(PostStage stage) {
    switch (stage) {
        case PostStage::Respace: return "respace";
        case PostStage::SpellfixNorvig: return "spellfix-norvig";
        default: return "spellfix-symspell";
    }
}

std::vector<PostStage> parse_chain(std::string_view csv) {
    std::vector<PostStage> chain;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        std::string_view item =
            csv.substr(pos, comma == std::string_view::npos ? csv.size() - pos : comma - pos);
        if (!item.empty()) {
            if (item == "respace")
                chain.push_back(PostStage::Respace);
            else if (item == "spellfix-norvig" || item == "norvig")
                chain.push_back(PostStage::SpellfixNorvig);
            else if (item == "spellfix-symspell" || item == "symspell")
                chain.push_back(PostStage::SpellfixSymspell);
            else
                throw std::invalid_argument("unknown postprocess stage '" + std::string(item) + "'");
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return chain;
}

namespace {

Classification classify_heuristic(const GrayImage& crop) {
    GrayImage ink = binarize(crop);
    std::vector<int> run_lengths;
    for (int r = 0; r < ink.height; ++r) {
        int run = 0;
        for (int c = 0; c < ink.width; ++c) {
            if (ink.at(r, c) == 0) {
                ++run;
            } else if (run > 0) {
                run_lengths.push_back(run);
                run = 0;
            }
        }
        if (run > 0) run_lengths.push_back(run);
    }
    if (run_lengths.size() < 2) return Classification{LineClass::Unknown, 0.5};

    double mean = 0.0;
    for (int len : run_lengths) mean += len;
    mean /= static_cast<double>(run_lengths.size());
    double var = 0.0;
    for (int len : run_lengths) var += (len - mean) * (len - mean);
    var /= static_cast<double>(run_lengths.size());
    double cv = std::sqrt(var) / mean;  // coefficient of variation of run lengths

    constexpr double kCvThreshold = 0.6;
    LineClass label = cv > kCvThreshold ? LineClass::Handwritten : LineClass::Printed;
    double confidence = std::min(1.0, 0.5 + std::abs(cv - kCvThreshold));
    return Classification{label, confidence};
}

Classification classify_external(const std::string& command, const std::string& crop_path) {
    std::string cmd = command;
    auto slot = cmd.find("{path}");
    if (slot != std::string::npos)
        cmd.replace(slot, 6, shell_quote(crop_path));
    else
        cmd += " " + shell_quote(crop_path);

    CommandResult res = run_command(cmd);
    if (!res.ok())
        throw BackendError("classifier command failed (exit " + std::to_string(res.exit_code) +
                           "): " + cmd + "\n" + res.err);
    std::istringstream out(res.out);
    std::string line;
    std::getline(out, line);
    auto tab = line.find('\t');
    if (tab == std::string::npos)
        throw BackendError("classifier output not 'label<TAB>confidence': '" + line + "'");
    Classification cls;
    try {
        cls.label = line_class_from_string(line.substr(0, tab));
        cls.confidence = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
        throw BackendError("classifier output not 'label<TAB>confidence': '" + line + "'");
    }
    if (cls.confidence < 0.0 || cls.confidence > 1.0)
        throw BackendError("classifier confidence out of [0,1]: '" + line + "'");
    return cls;
}

}  // namespace

Classification classify_line(const GrayImage& crop, const ClassifierConfig& cfg,
                             const std::string& crop_path) {
    switch (cfg.mode) {
        case ClassifierConfig::Mode::Fixed:
            return Classification{cfg.fixed_label, 1.0};
        case ClassifierConfig::Mode::External:
            return classify_external(cfg.command, crop_path);
        default:
            return classify_heuristic(crop);
    }
}

PostProcessor::PostProcessor(std::vector<PostStage> chain, Lexicon lex, RespaceConfig respace_cfg)
    : chain_(std::move(chain)), lex_(std::move(lex)), respace_cfg_(respace_cfg) {
    for (PostStage stage : chain_)
        if (stage == PostStage::SpellfixSymspell && !index_) {
            index_ = std::make_unique<DeleteIndex>(lex_);
            break;
        }
}

std::string PostProcessor::apply(std::string_view text) const {
    std::string current(text);
    for (PostStage stage : chain_) {
        switch (stage) {
            case PostStage::Respace:
                current = respace(current, lex_, respace_cfg_).joined();
                break;
            case PostStage::SpellfixNorvig:
                current = correct_sentence(current, CorrectorKind::Norvig, lex_);
                break;
            case PostStage::SpellfixSymspell:
                current = correct_sentence(current, CorrectorKind::SymSpell, lex_, index_.get());
                break;
        }
    }
    return current;
}

std::vector<std::string> chunk_words(std::string_view text, int chunk_size) {
    if (chunk_size < 1) throw std::invalid_argument("chunk_size must be >= 1");
    auto tokens = split_tokens(text);
    std::vector<std::string> chunks;
    for (std::size_t i = 0; i < tokens.size(); i += chunk_size) {
        std::string chunk;
        for (std::size_t j = i; j < tokens.size() && j < i + chunk_size; ++j) {
            if (j > i) chunk.push_back(' ');
            chunk += tokens[j];
        }
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

std::string resolve_lexicon_path(const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* env = std::getenv("OCRPOST_LEXICON"); env && *env) return env;
#ifdef OCRPOST_DATA_DIR
    return std::string(OCRPOST_DATA_DIR) + "/english_words.txt";
#else
    return "data/english_words.txt";
#endif
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::string expand_ocr_command(const std::string& tpl, const std::string& path,
                               LineClass label) {
    std::string cmd = tpl;
    auto replace_all = [&](std::string_view slot, const std::string& value) {
        std::size_t pos = 0;
        while ((pos = cmd.find(slot, pos)) != std::string::npos) {
            cmd.replace(pos, slot.size(), value);
            pos += value.size();
        }
    };
    replace_all("{path}", shell_quote(path));
    replace_all("{label}", to_string(label));
    return cmd;
}

class StageTimer {
public:
    explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

    template <typename F>
    auto time(const std::string& name, F&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            add(name, t0);
        } else {
            auto value = fn();
            add(name, t0);
            return value;
        }
    }

private:
    void add(const std::string& name, std::chrono::steady_clock::time_point t0) {
        auto t1 = std::chrono::steady_clock::now();
        std::lock_guard lock(mutex_);
        sink_[name] += std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    std::map<std::string, double>& sink_;
    std::mutex mutex_;
};

}  // namespace

RunReport run_document(const std::string& image_path, const PipelineConfig& cfg,
                       const std::string& reference_path) {
    if (cfg.ocr_command.empty() == cfg.transcript_path.empty())
        throw std::invalid_argument("configure exactly one of ocr_command / transcript_path");

    RunReport report;
    StageTimer timer(report.timings_ms);
    auto t_total = std::chrono::steady_clock::now();

    GrayImage img = load_image(image_path);
    SegmentResult seg = timer.time("segment", [&] { return segment_document(img, cfg.segment); });

    fs::path work = cfg.work_dir.empty()
                        ? fs::temp_directory_path() / ("ocrpost_" + std::to_string(::getpid()))
                        : fs::path(cfg.work_dir);
    if (!seg.lines.empty()) fs::create_directories(work);

    std::vector<std::string> transcript;
    if (!cfg.transcript_path.empty()) transcript = read_lines(cfg.transcript_path);

    std::optional<PostProcessor> post;
    if (!cfg.chain.empty())
        post.emplace(cfg.chain, Lexicon::load(resolve_lexicon_path(cfg.lexicon_path)), cfg.respace);

    // Per-line work; workers share only immutable state and write disjoint
    // slots, so report assembly stays deterministic in line-index order.
    std::vector<LineRecord> records(seg.lines.size());
    std::exception_ptr worker_error;
    std::mutex error_mutex;

    auto process_line = [&](std::size_t i) {
        LineRecord rec;
        rec.index = static_cast<int>(i);

        char name[32];
        std::snprintf(name, sizeof name, "line_%03zu.pgm", i);
        rec.crop_path = (work / name).string();
        save_pgm(seg.lines[i], rec.crop_path);

        Classification cls = timer.time("classify", [&] {
            return classify_line(seg.lines[i], cfg.classifier, rec.crop_path);
        });
        rec.class_label = cls.label;
        rec.confidence = cls.confidence;

        timer.time("ocr", [&] {
            if (!cfg.transcript_path.empty()) {
                if (i < transcript.size()) {
                    rec.ocr_text = transcript[i];
                } else {
                    rec.ocr_text.clear();
                    rec.ocr_failed = true;
                }
                return;
            }
            std::string cmd = expand_ocr_command(cfg.ocr_command, rec.crop_path, rec.class_label);
            CommandResult res = run_command(cmd, cfg.ocr_timeout_seconds);
            if (!res.ok()) {
                rec.ocr_text.clear();
                rec.ocr_failed = true;
                return;
            }
            rec.ocr_text = res.out;
            while (!rec.ocr_text.empty() &&
                   (rec.ocr_text.back() == '\n' || rec.ocr_text.back() == '\r'))
                rec.ocr_text.pop_back();
        });

        rec.corrected_text = timer.time("postprocess", [&] {
            return post ? post->apply(rec.ocr_text) : rec.ocr_text;
        });
        records[i] = std::move(rec);
    };

    int workers = std::max(1, cfg.workers);
    if (workers <= 1 || records.size() <= 1) {
        for (std::size_t i = 0; i < records.size(); ++i) process_line(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto drain = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < records.size();) {
                try {
                    process_line(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!worker_error) worker_error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < std::min<int>(workers, int(records.size())); ++w)
            pool.emplace_back(drain);
        for (auto& t : pool) t.join();
        if (worker_error) std::rethrow_exception(worker_error);
    }
    report.lines = std::move(records);

    for (std::size_t i = 0; i < report.lines.size(); ++i) {
        if (i) report.document_text.push_back('\n');
        report.document_text += report.lines[i].corrected_text;
    }

    if (!reference_path.empty() && !report.lines.empty()) {
        auto refs = read_lines(reference_path);
        std::vector<Transcript> pairs;
        std::vector<std::string> ids;
        std::size_t n = std::min(refs.size(), report.lines.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (refs[i].empty()) continue;
            pairs.push_back(Transcript{report.lines[i].corrected_text, refs[i]});
            ids.push_back("line_" + std::to_string(i));
        }
        if (!pairs.empty()) report.metrics = evaluate_corpus(pairs, {}, ids);
    }

    report.timings_ms["total"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_total)
            .count();
    return report;
}

std::string RunReport::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["lines"] = json::array();
    for (const auto& rec : lines) {
        j["lines"].push_back({
            {"index", rec.index},
            {"crop_path", rec.crop_path},
            {"class_label", to_string(rec.class_label)},
            {"confidence", rec.confidence},
            {"ocr_text", rec.ocr_text},
            {"corrected_text", rec.corrected_text},
            {"ocr_failed", rec.ocr_failed},
        });
    }
    j["document_text"] = document_text;
    if (metrics) {
        json m;
        m["aggregate_cer"] = metrics->aggregate_cer;
        m["aggregate_wer"] = metrics->aggregate_wer;
        m["per_item"] = json::array();
        for (const auto& item : metrics->per_item)
            m["per_item"].push_back({{"id", item.id}, {"cer", item.cer}, {"wer", item.wer}});
        j["metrics"] = m;
    } else {
        j["metrics"] = nullptr;
    }
    j["timings_ms"] = timings_ms;
    return j.dump(2);
}

RunReport RunReport::from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
        throw std::runtime_error("unsupported report schema version");
    RunReport report;
    for (const auto& item : j.at("lines")) {
        LineRecord rec;
        rec.index = item.at("index").get<int>();
        rec.crop_path = item.at("crop_path").get<std::string>();
        rec.class_label = line_class_from_string(item.at("class_label").get<std::string>());
        rec.confidence = item.at("confidence").get<double>();
        rec.ocr_text = item.at("ocr_text").get<std::string>();
        rec.corrected_text = item.at("corrected_text").get<std::string>();
        rec.ocr_failed = item.at("ocr_failed").get<bool>();
        report.lines.push_back(std::move(rec));
    }
    report.document_text = j.at("document_text").get<std::string>();
    if (!j.at("metrics").is_null()) {
        EvalReport m;
        m.aggregate_cer = j["metrics"].at("aggregate_cer").get<double>();
        m.aggregate_wer = j["metrics"].at("aggregate_wer").get<double>();
        for (const auto& item : j["metrics"].at("per_item"))
            m.per_item.push_back(ItemRates{item.at("id").get<std::string>(),
                                           item.at("cer").get<double>(),
                                           item.at("wer").get<double>()});
        report.metrics = std::move(m);
    }
    report.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
    return report;
}

}  // namespace ocrpost
