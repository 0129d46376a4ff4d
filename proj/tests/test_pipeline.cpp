#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "ocrpost/pipeline.hpp"
#include "ocrpost/subprocess.hpp"

using namespace ocrpost;

namespace {

std::string bundled_lexicon_path() {
    return std::string(OCRPOST_TEST_DATA_DIR) + "/english_words.txt";
}

std::string save_doc(const helpers::TempDir& dir, int bands, std::uint64_t seed) {
    auto doc = helpers::make_document(bands, seed);
    std::string path = (dir / "doc.pgm").string();
    save_pgm(doc.image, path);
    return path;
}

}  // namespace

TEST_CASE("classify fixed mode") {
    GrayImage crop(4, 4, 255);
    ClassifierConfig cfg;
    cfg.mode = ClassifierConfig::Mode::Fixed;
    cfg.fixed_label = LineClass::Handwritten;
    Classification cls = classify_line(crop, cfg);
    CHECK(cls.label == LineClass::Handwritten);
    CHECK(cls.confidence == 1.0);
}

TEST_CASE("classify heuristic calls uniform bars printed") {
    // identical ink runs in every row: zero run-length variance
    GrayImage crop(10, 60, 255);
    for (int r = 2; r < 8; ++r)
        for (int start = 4; start + 4 < 60; start += 10)
            for (int c = start; c < start + 4; ++c) crop.at(r, c) = 0;
    Classification cls = classify_line(crop, ClassifierConfig{});
    CHECK(cls.label == LineClass::Printed);

    // strongly bimodal run lengths (dots next to long strokes) read as
    // handwritten
    GrayImage scribble(12, 60, 255);
    SplitMix64 rng(17);
    for (int r = 1; r < 11; ++r) {
        int c = 1;
        while (c < 58) {
            int run = rng.next_below(2) ? 1 : 14 + int(rng.next_below(6));
            for (int k = c; k < std::min(59, c + run); ++k) scribble.at(r, k) = 0;
            c += run + 2;
        }
    }
    CHECK(classify_line(scribble, ClassifierConfig{}).label == LineClass::Handwritten);
}

TEST_CASE("classify external parses label and confidence") {
    GrayImage crop(4, 4, 255);
    ClassifierConfig cfg;
    cfg.mode = ClassifierConfig::Mode::External;
    cfg.command = "printf 'printed\\t0.91\\n' #";
    Classification cls = classify_line(crop, cfg, "/tmp/x.pgm");
    CHECK(cls.label == LineClass::Printed);
    CHECK(cls.confidence == doctest::Approx(0.91));

    cfg.command = "exit 9 #";
    CHECK_THROWS_AS(classify_line(crop, cfg, "/tmp/x.pgm"), BackendError);
    cfg.command = "echo gibberish #";
    CHECK_THROWS_AS(classify_line(crop, cfg, "/tmp/x.pgm"), BackendError);
}

TEST_CASE("chunk_words groups tokens") {
    std::string text;
    for (int i = 0; i < 300; ++i) text += "w" + std::to_string(i) + " ";
    auto chunks = chunk_words(text, 128);
    REQUIRE(chunks.size() == 3);
    CHECK(split_tokens(chunks[0]).size() == 128);
    CHECK(split_tokens(chunks[1]).size() == 128);
    CHECK(split_tokens(chunks[2]).size() == 44);

    CHECK(chunk_words("a b c d e", 128).size() == 1);
    CHECK(chunk_words("", 128).empty());
    CHECK_THROWS_AS(chunk_words("x", 0), std::invalid_argument);
}

TEST_CASE("chunk_words round-trips the token sequence") {
    SplitMix64 rng(808);
    for (int trial = 0; trial < 20; ++trial) {
        std::string text;
        int n = int(rng.next_below(40));
        for (int i = 0; i < n; ++i) {
            text += std::string(1 + rng.next_below(3), char('a' + rng.next_below(26)));
            text += rng.next_below(4) == 0 ? "  " : " ";
        }
        int size = 1 + int(rng.next_below(7));
        std::string joined;
        for (const auto& chunk : chunk_words(text, size)) {
            if (!joined.empty()) joined.push_back(' ');
            joined += chunk;
        }
        CHECK(split_tokens(joined) == split_tokens(text));
    }
}

TEST_CASE("parse_chain accepts aliases and rejects junk") {
    auto chain = parse_chain("respace,symspell");
    REQUIRE(chain.size() == 2);
    CHECK(chain[0] == PostStage::Respace);
    CHECK(chain[1] == PostStage::SpellfixSymspell);
    CHECK(parse_chain("").empty());
    CHECK(parse_chain("norvig")[0] == PostStage::SpellfixNorvig);
    CHECK_THROWS_AS(parse_chain("respace,bogus"), std::invalid_argument);
}

TEST_CASE("postprocessor applies stages in order") {
    Lexicon lex = Lexicon::load(bundled_lexicon_path());
    PostProcessor post({PostStage::Respace, PostStage::SpellfixSymspell}, std::move(lex));
    CHECK(post.apply("THESE ARE THETIMES FORREALCHOICES") ==
          "THESE ARE THE TIMES FOR REAL CHOICES");

    PostProcessor empty({}, Lexicon::from_ranked_words({"a", "b"}));
    CHECK(empty.apply("anything at all") == "anything at all");
}

TEST_CASE("transcript backend is plumbing-transparent with an empty chain") {
    helpers::TempDir dir("pipe");
    std::string image = save_doc(dir, 3, 31);
    std::string transcript = helpers::write_file(
        dir / "t.txt", "first line here\nsecond line text\nthird line words\n");

    PipelineConfig cfg;
    cfg.transcript_path = transcript;
    cfg.chain.clear();
    cfg.work_dir = (dir / "crops").string();
    cfg.classifier.mode = ClassifierConfig::Mode::Fixed;
    cfg.classifier.fixed_label = LineClass::Printed;

    RunReport report = run_document(image, cfg);
    REQUIRE(report.lines.size() == 3);
    CHECK(report.document_text == "first line here\nsecond line text\nthird line words");
    for (const auto& rec : report.lines) {
        CHECK_FALSE(rec.ocr_failed);
        CHECK(rec.class_label == LineClass::Printed);
        CHECK(std::ifstream(rec.crop_path).good());
    }
}

TEST_CASE("missing transcript line degrades but does not abort") {
    helpers::TempDir dir("pipe");
    std::string image = save_doc(dir, 3, 32);
    std::string transcript = helpers::write_file(dir / "t.txt", "only one line\n");

    PipelineConfig cfg;
    cfg.transcript_path = transcript;
    cfg.chain.clear();
    cfg.work_dir = (dir / "crops").string();

    RunReport report = run_document(image, cfg);
    REQUIRE(report.lines.size() == 3);
    CHECK_FALSE(report.lines[0].ocr_failed);
    CHECK(report.lines[1].ocr_failed);
    CHECK(report.lines[2].ocr_failed);
    CHECK(report.lines[1].ocr_text.empty());
}

TEST_CASE("command backend captures stdout and flags failures") {
    helpers::TempDir dir("pipe");
    std::string image = save_doc(dir, 2, 33);

    PipelineConfig cfg;
    cfg.ocr_command = "echo STUB";
    cfg.chain.clear();
    cfg.work_dir = (dir / "crops").string();
    RunReport report = run_document(image, cfg);
    REQUIRE(report.lines.size() == 2);
    for (const auto& rec : report.lines) CHECK(rec.ocr_text == "STUB");

    cfg.ocr_command = "exit 3";
    report = run_document(image, cfg);
    for (const auto& rec : report.lines) {
        CHECK(rec.ocr_failed);
        CHECK(rec.ocr_text.empty());
    }
}

TEST_CASE("ocr command template expands path and label") {
    helpers::TempDir dir("pipe");
    std::string image = save_doc(dir, 1, 34);
    PipelineConfig cfg;
    cfg.ocr_command = "printf '%s' {label}; basename {path}";
    cfg.chain.clear();
    cfg.work_dir = (dir / "crops").string();
    cfg.classifier.mode = ClassifierConfig::Mode::Fixed;
    cfg.classifier.fixed_label = LineClass::Handwritten;
    RunReport report = run_document(image, cfg);
    REQUIRE(report.lines.size() == 1);
    CHECK(report.lines[0].ocr_text == "handwrittenline_000.pgm");
}

TEST_CASE("references populate metrics") {
    helpers::TempDir dir("pipe");
    std::string image = save_doc(dir, 2, 35);
    std::string transcript = helpers::write_file(dir / "t.txt", "good line\nbad linx\n");
    std::string refs = helpers::write_file(dir / "r.txt", "good line\nbad line\n");

    PipelineConfig cfg;
    cfg.transcript_path = transcript;
    cfg.chain.clear();
    cfg.work_dir = (dir / "crops").string();
    RunReport report = run_document(image, cfg, refs);
    REQUIRE(report.metrics.has_value());
    CHECK(report.metrics->aggregate_cer == doctest::Approx(1.0 / 17.0));
    CHECK(report.metrics->per_item.size() == 2);
}

TEST_CASE("run report JSON round trips") {
    helpers::TempDir dir("pipe");
    std::string image = save_doc(dir, 2, 36);
    std::string transcript = helpers::write_file(dir / "t.txt", "alpha beta\ngamma delta\n");
    std::string refs = helpers::write_file(dir / "r.txt", "alpha beta\ngamma delta\n");

    PipelineConfig cfg;
    cfg.transcript_path = transcript;
    cfg.chain.clear();
    cfg.work_dir = (dir / "crops").string();
    RunReport report = run_document(image, cfg, refs);

    RunReport back = RunReport::from_json(report.to_json());
    CHECK(back.document_text == report.document_text);
    REQUIRE(back.lines.size() == report.lines.size());
    for (std::size_t i = 0; i < back.lines.size(); ++i) {
        CHECK(back.lines[i].index == report.lines[i].index);
        CHECK(back.lines[i].ocr_text == report.lines[i].ocr_text);
        CHECK(back.lines[i].corrected_text == report.lines[i].corrected_text);
        CHECK(back.lines[i].class_label == report.lines[i].class_label);
    }
    REQUIRE(back.metrics.has_value());
    CHECK(back.metrics->aggregate_cer == report.metrics->aggregate_cer);
    CHECK(RunReport::from_json(back.to_json()).to_json() == back.to_json());
}

TEST_CASE("parallel line workers produce the sequential result") {
    helpers::TempDir dir("pipe");
    std::string image = save_doc(dir, 4, 41);
    std::string transcript = helpers::write_file(
        dir / "t.txt", "THETIMES one\nplain two\nFORREALCHOICES three\nlast four\n");

    PipelineConfig cfg;
    cfg.transcript_path = transcript;
    cfg.lexicon_path = bundled_lexicon_path();
    cfg.chain = {PostStage::Respace};
    cfg.work_dir = (dir / "w1").string();
    cfg.workers = 1;
    RunReport sequential = run_document(image, cfg);

    cfg.work_dir = (dir / "w4").string();
    cfg.workers = 4;
    RunReport parallel = run_document(image, cfg);

    CHECK(parallel.document_text == sequential.document_text);
    REQUIRE(parallel.lines.size() == sequential.lines.size());
    for (std::size_t i = 0; i < parallel.lines.size(); ++i) {
        CHECK(parallel.lines[i].index == int(i));
        CHECK(parallel.lines[i].corrected_text == sequential.lines[i].corrected_text);
    }
}

TEST_CASE("blank page produces an empty report") {
    helpers::TempDir dir("pipe");
    GrayImage blank(30, 40, 255);
    std::string image = (dir / "blank.pgm").string();
    save_pgm(blank, image);
    std::string transcript = helpers::write_file(dir / "t.txt", "unused\n");

    PipelineConfig cfg;
    cfg.transcript_path = transcript;
    cfg.chain.clear();
    RunReport report = run_document(image, cfg);
    CHECK(report.lines.empty());
    CHECK(report.document_text.empty());
    CHECK_FALSE(report.metrics.has_value());
}

TEST_CASE("config validation rejects ambiguous backends") {
    PipelineConfig cfg;  // neither ocr_command nor transcript
    CHECK_THROWS_AS(run_document("/nonexistent.pgm", cfg), std::invalid_argument);
    cfg.ocr_command = "echo x";
    cfg.transcript_path = "/tmp/t.txt";
    CHECK_THROWS_AS(run_document("/nonexistent.pgm", cfg), std::invalid_argument);
}

TEST_CASE("subprocess timeout kills the child") {
    CommandResult res = run_command("sleep 5", 0.2);
    CHECK(res.timed_out);
    CHECK_FALSE(res.ok());
    res = run_command("echo out; echo err >&2", 5.0);
    CHECK(res.ok());
    CHECK(res.out == "out\n");
    CHECK(res.err == "err\n");
}
