// ocrpost: document line segmentation, OCR backend orchestration, and
// classical NLP post-correction of OCR text.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "ocrpost/image.hpp"
#include "ocrpost/lexicon.hpp"
#include "ocrpost/metrics.hpp"
#include "ocrpost/noisegen.hpp"
#include "ocrpost/pipeline.hpp"
#include "ocrpost/respace.hpp"
#include "ocrpost/segmentation.hpp"
#include "ocrpost/spellfix.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ocrpost;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitBackend = 3;

std::string read_file_or_die(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_segment(const std::string& input, const std::string& out_dir, int smooth, int threshold) {
    GrayImage img = load_image(input);
    SegmentConfig cfg;
    cfg.smooth_window = smooth;
    cfg.binarize_threshold = threshold;
    SegmentResult seg = segment_document(img, cfg);

    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < seg.lines.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "line_%03zu.pgm", i);
        save_pgm(seg.lines[i], (fs::path(out_dir) / name).string());
    }
    json seams = json::array();
    for (const auto& seam : seg.seams) {
        json points = json::array();
        for (const auto& p : seam.points) points.push_back({p.row, p.col});
        seams.push_back(points);
    }
    std::ofstream out(fs::path(out_dir) / "seams.json");
    out << seams.dump(2) << "\n";
    std::cerr << "wrote " << seg.lines.size() << " line crop(s) to " << out_dir << "\n";
    return kExitOk;
}

std::vector<Transcript> tsv_pairs(const std::string& path, std::vector<std::string>& ids) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Transcript> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected id<TAB>hypothesis<TAB>reference");
        ids.push_back(line.substr(0, t1));
        pairs.push_back(Transcript{line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)});
    }
    return pairs;
}

int cmd_eval(const std::string& hyp, const std::string& ref, const std::string& tsv,
             bool case_fold, bool macro) {
    std::vector<Transcript> pairs;
    std::vector<std::string> ids;

    if (!tsv.empty()) {
        pairs = tsv_pairs(tsv, ids);
    } else if (fs::is_directory(hyp) && fs::is_directory(ref)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(hyp))
            if (entry.is_regular_file()) files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            fs::path ref_file = fs::path(ref) / file.filename();
            if (!fs::exists(ref_file)) continue;
            ids.push_back(file.filename().string());
            pairs.push_back(Transcript{read_file_or_die(file.string()),
                                       read_file_or_die(ref_file.string())});
        }
    } else {
        std::ifstream hin(hyp), rin(ref);
        if (!hin) throw std::runtime_error("cannot open " + hyp);
        if (!rin) throw std::runtime_error("cannot open " + ref);
        std::string hline, rline;
        std::size_t i = 0;
        while (std::getline(hin, hline) && std::getline(rin, rline)) {
            if (!hline.empty() && hline.back() == '\r') hline.pop_back();
            if (!rline.empty() && rline.back() == '\r') rline.pop_back();
            ids.push_back(std::to_string(i++));
            pairs.push_back(Transcript{hline, rline});
        }
    }

    MetricOptions opts;
    opts.case_fold = case_fold;
    opts.macro_average = macro;
    EvalReport report = evaluate_corpus(pairs, opts, ids);

    json j;
    j["aggregate_cer"] = report.aggregate_cer;
    j["aggregate_wer"] = report.aggregate_wer;
    j["items"] = json::array();
    for (const auto& item : report.per_item)
        j["items"].push_back({{"id", item.id}, {"cer", item.cer}, {"wer", item.wer}});
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_respace(const std::string& lexicon_path, double oov_char_cost) {
    Lexicon lex = Lexicon::load(resolve_lexicon_path(lexicon_path));
    RespaceConfig cfg;
    cfg.oov_char_cost = oov_char_cost;
    std::string line;
    while (std::getline(std::cin, line)) std::cout << respace(line, lex, cfg).joined() << "\n";
    return kExitOk;
}

int cmd_spellfix(const std::string& method, const std::string& lexicon_path, int max_edit,
                 int prefix_length) {
    Lexicon lex = Lexicon::load(resolve_lexicon_path(lexicon_path));
    std::unique_ptr<DeleteIndex> index;
    CorrectorKind kind = CorrectorKind::Norvig;
    if (method == "symspell") {
        kind = CorrectorKind::SymSpell;
        index = std::make_unique<DeleteIndex>(lex, max_edit, prefix_length);
    } else if (method != "norvig") {
        throw CLI::ValidationError("--method must be norvig or symspell");
    }
    std::string line;
    while (std::getline(std::cin, line))
        std::cout << correct_sentence(line, kind, lex, index.get()) << "\n";
    return kExitOk;
}

int cmd_noisegen(std::uint64_t seed, double word_p, double char_p, const std::string& confusions,
                 double drop_p, const std::string& log_path) {
    NoiseConfig cfg;
    cfg.seed = seed;
    cfg.word_aug_probability = word_p;
    cfg.char_aug_probability = char_p;
    if (!confusions.empty()) cfg.confusions = load_confusions(confusions);
    cfg.validate();

    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path);
        if (!log) throw std::runtime_error("cannot write " + log_path);
    }

    SplitMix64 rng(seed);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(std::cin, line)) {
        DegradeResult res = degrade_text(line, cfg, rng);
        std::string out = drop_p > 0.0 ? drop_spaces(res.text, drop_p, rng) : res.text;
        std::cout << out << "\n";
        if (log)
            for (const auto& tok : res.log)
                log << line_no << "\t" << tok.word_index << "\t" << tok.original << "\t"
                    << tok.degraded << "\n";
        ++line_no;
    }
    return kExitOk;
}

// Pads the lexicon with deterministic synthetic entries so the benchmark
// runs against a realistically sized index even with the compact bundled
// word list.
Lexicon padded_lexicon(const Lexicon& base, int target_size, std::uint64_t seed) {
    if (target_size <= base.size()) return base;
    std::vector<std::string> words = base.words_by_rank();
    std::unordered_set<std::string> seen(words.begin(), words.end());
    SplitMix64 rng(seed);
    static constexpr char kLetters[] = "etaoinshrdlucmfwypvbgkjqxz";
    while (static_cast<int>(words.size()) < target_size) {
        std::size_t len = 4 + rng.next_below(9);
        std::string w;
        for (std::size_t i = 0; i < len; ++i)
            w.push_back(kLetters[rng.next_below(18)]);  // bias toward common letters
        if (seen.insert(w).second) words.push_back(std::move(w));
    }
    return Lexicon::from_ranked_words(words);
}

int cmd_bench(const std::string& lexicon_path, int runs, int queries, int target_size,
              std::uint64_t seed) {
    Lexicon lex = padded_lexicon(Lexicon::load(resolve_lexicon_path(lexicon_path)), target_size, seed);
    BenchReport report = run_spellfix_benchmark(lex, runs, queries, seed);
    json j;
    j["lexicon_words"] = report.lexicon_words;
    j["runs"] = report.runs;
    j["queries_per_run"] = report.queries_per_run;
    j["symspell_median_us"] = report.symspell_median_us;
    j["norvig_median_us"] = report.norvig_median_us;
    j["speedup"] = report.speedup;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_run(const std::string& image, const std::string& ocr_cmd, const std::string& transcript,
            const std::string& classifier, const std::string& chain, const std::string& ref,
            const std::string& report_path, const std::string& out_dir,
            const std::string& lexicon_path, double timeout, double oov_char_cost, int workers) {
    PipelineConfig cfg;
    cfg.ocr_command = ocr_cmd;
    cfg.transcript_path = transcript;
    cfg.lexicon_path = lexicon_path;
    cfg.work_dir = out_dir;
    cfg.ocr_timeout_seconds = timeout;
    cfg.chain = parse_chain(chain);
    cfg.respace.oov_char_cost = oov_char_cost;
    cfg.workers = workers;

    if (classifier == "heuristic") {
        cfg.classifier.mode = ClassifierConfig::Mode::Heuristic;
    } else if (classifier.rfind("fixed:", 0) == 0) {
        cfg.classifier.mode = ClassifierConfig::Mode::Fixed;
        cfg.classifier.fixed_label = line_class_from_string(classifier.substr(6));
    } else if (classifier.rfind("cmd:", 0) == 0) {
        cfg.classifier.mode = ClassifierConfig::Mode::External;
        cfg.classifier.command = classifier.substr(4);
    } else {
        throw CLI::ValidationError("--classifier must be heuristic, fixed:<label>, or cmd:<command>");
    }

    RunReport report = run_document(image, cfg, ref);
    std::string payload = report.to_json();
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write " + report_path);
        out << payload << "\n";
    } else {
        std::cout << payload << "\n";
    }

    std::cerr << report.lines.size() << " line(s)";
    if (report.metrics)
        std::cerr << ", CER " << report.metrics->aggregate_cer << ", WER "
                  << report.metrics->aggregate_wer;
    std::cerr << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OCR line segmentation, backend orchestration, and NLP post-correction"};
    app.require_subcommand(1);

    // segment
    auto* seg = app.add_subcommand("segment", "Split a document image into line crops");
    std::string seg_input, seg_out = "lines";
    int seg_smooth = 1, seg_threshold = -1;
    seg->add_option("input", seg_input, "PGM or PNG document image")->required();
    seg->add_option("--out-dir", seg_out, "output directory");
    seg->add_option("--smooth", seg_smooth, "odd HPP smoothing window (1 = off)");
    seg->add_option("--threshold", seg_threshold, "ink threshold (-1 = Otsu)");

    // eval
    auto* ev = app.add_subcommand("eval", "Compute CER/WER for hypothesis/reference pairs");
    std::string ev_hyp, ev_ref, ev_tsv;
    bool ev_fold = false, ev_macro = false;
    ev->add_option("--hyp", ev_hyp, "hypothesis file or directory");
    ev->add_option("--ref", ev_ref, "reference file or directory");
    ev->add_option("--tsv", ev_tsv, "TSV with id, hypothesis, reference columns");
    ev->add_flag("--case-fold", ev_fold, "fold case before comparing");
    ev->add_flag("--macro", ev_macro, "macro-average aggregates (default micro)");

    // respace
    auto* rs = app.add_subcommand("respace", "Re-insert missing spaces (stdin -> stdout)");
    std::string rs_lexicon;
    double rs_oov = 8.0;
    rs->add_option("--lexicon", rs_lexicon, "frequency-list path");
    rs->add_option("--oov-char-cost", rs_oov, "per-character cost of unknown tokens");

    // spellfix
    auto* sf = app.add_subcommand("spellfix", "Correct spelling token by token (stdin -> stdout)");
    std::string sf_method = "symspell", sf_lexicon;
    int sf_max_edit = 2, sf_prefix = 7;
    sf->add_option("--method", sf_method, "norvig or symspell");
    sf->add_option("--lexicon", sf_lexicon, "frequency-list path");
    sf->add_option("--max-edit", sf_max_edit, "maximum edit distance (1..3)");
    sf->add_option("--prefix-length", sf_prefix, "symspell prefix length");

    // noisegen
    auto* ng = app.add_subcommand("noisegen", "Degrade clean text with OCR-style noise");
    std::uint64_t ng_seed = 0;
    double ng_word = 0.8, ng_char = 0.7, ng_drop = 0.0;
    std::string ng_conf, ng_log;
    ng->add_option("--seed", ng_seed, "RNG seed")->required();
    ng->add_option("--word-p", ng_word, "word augmentation probability");
    ng->add_option("--char-p", ng_char, "character augmentation probability");
    ng->add_option("--confusions", ng_conf, "confusion table TSV");
    ng->add_option("--drop-spaces", ng_drop, "probability of removing each space gap");
    ng->add_option("--log", ng_log, "write change log TSV here");

    // bench-spellfix
    auto* bench = app.add_subcommand("bench-spellfix", "Time symspell lookup vs Norvig correction");
    std::string bench_lexicon;
    int bench_runs = 30, bench_queries = 8, bench_target = 80000;
    std::uint64_t bench_seed = 0x5eed;
    bench->add_option("--lexicon", bench_lexicon, "frequency-list path");
    bench->add_option("--runs", bench_runs, "timed passes per method (>= 30 for the report)");
    bench->add_option("--queries", bench_queries, "length-8 queries per pass");
    bench->add_option("--target-size", bench_target,
                      "pad the lexicon to this many words (0 = no padding)");
    bench->add_option("--seed", bench_seed, "query/padding RNG seed");

    // run
    auto* run = app.add_subcommand("run", "Full pipeline: segment, classify, OCR, post-process");
    std::string run_image, run_ocr_cmd, run_transcript, run_classifier = "heuristic";
    std::string run_chain = "respace,symspell", run_ref, run_report, run_out, run_lexicon;
    double run_timeout = 120.0, run_oov = 8.0;
    int run_workers = 1;
    run->add_option("image", run_image, "document image")->required();
    run->add_option("--ocr-cmd", run_ocr_cmd, "OCR command template ({path}, {label})");
    run->add_option("--transcript", run_transcript, "transcript file (line index -> text)");
    run->add_option("--classifier", run_classifier, "heuristic | fixed:<label> | cmd:<command>");
    run->add_option("--chain", run_chain, "comma-separated stages (respace,norvig,symspell)");
    run->add_option("--ref", run_ref, "per-line reference file for metrics");
    run->add_option("--report", run_report, "write the JSON report here (default stdout)");
    run->add_option("--out-dir", run_out, "directory for line crops");
    run->add_option("--lexicon", run_lexicon, "frequency-list path");
    run->add_option("--timeout", run_timeout, "per-line OCR timeout in seconds");
    run->add_option("--oov-char-cost", run_oov, "respace per-character cost of unknown tokens");
    run->add_option("--workers", run_workers, "parallel line workers");

    try {
        app.parse(argc, argv);

        if (*seg) return cmd_segment(seg_input, seg_out, seg_smooth, seg_threshold);
        if (*ev) {
            if (ev_tsv.empty() && (ev_hyp.empty() || ev_ref.empty()))
                throw CLI::ValidationError("eval needs --tsv or both --hyp and --ref");
            return cmd_eval(ev_hyp, ev_ref, ev_tsv, ev_fold, ev_macro);
        }
        if (*rs) return cmd_respace(rs_lexicon, rs_oov);
        if (*sf) return cmd_spellfix(sf_method, sf_lexicon, sf_max_edit, sf_prefix);
        if (*ng) return cmd_noisegen(ng_seed, ng_word, ng_char, ng_conf, ng_drop, ng_log);
        if (*bench) return cmd_bench(bench_lexicon, bench_runs, bench_queries, bench_target, bench_seed);
        if (*run) {
            if (run_ocr_cmd.empty() == run_transcript.empty())
                throw CLI::ValidationError("run needs exactly one of --ocr-cmd / --transcript");
            return cmd_run(run_image, run_ocr_cmd, run_transcript, run_classifier, run_chain,
                           run_ref, run_report, run_out, run_lexicon, run_timeout, run_oov,
                           run_workers);
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
