// End-to-end tests of the ocrpost binary: subcommand wiring, file formats,
// and exit codes (0 ok, 1 usage, 2 input, 3 backend).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "ocrpost/subprocess.hpp"

using namespace ocrpost;
using nlohmann::json;

namespace {

const std::string kBin = OCRPOST_TEST_BIN;
const std::string kLexicon = std::string(OCRPOST_TEST_DATA_DIR) + "/english_words.txt";

CommandResult cli(const std::string& args) { return run_command(kBin + " " + args, 60.0); }

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(cli("").exit_code == 1);
    CHECK(cli("frobnicate").exit_code == 1);
    CHECK(cli("eval").exit_code == 1);                       // missing inputs
    CHECK(cli("run /tmp/x.pgm").exit_code == 1);             // no backend picked
    CHECK(cli("--help").exit_code == 0);
}

TEST_CASE("input errors exit 2") {
    CHECK(cli("segment /nonexistent_image.pgm --out-dir /tmp/seg_out").exit_code == 2);
    helpers::TempDir dir("cli");
    auto bad = helpers::write_file(dir / "bad.pgm", "P5 garbage");
    CHECK(cli("segment " + shell_quote(bad)).exit_code == 2);
}

TEST_CASE("backend errors exit 3") {
    helpers::TempDir dir("cli");
    auto doc = helpers::make_document(1, 77);
    std::string image = (dir / "doc.pgm").string();
    save_pgm(doc.image, image);
    auto res = cli("run " + shell_quote(image) + " --ocr-cmd 'echo x' --chain '' " +
                   "--classifier 'cmd:exit 7' --out-dir " + shell_quote((dir / "w").string()));
    CHECK(res.exit_code == 3);
}

TEST_CASE("respace filter") {
    auto res = run_command("echo 'THESE ARE THETIMES FORREALCHOICES' | " + kBin +
                               " respace --lexicon " + shell_quote(kLexicon),
                           60.0);
    CHECK(res.ok());
    CHECK(res.out == "THESE ARE THE TIMES FOR REAL CHOICES\n");
}

TEST_CASE("spellfix filter, both methods") {
    for (std::string method : {"norvig", "symspell"}) {
        auto res = run_command("echo 'speling here' | " + kBin + " spellfix --method " + method +
                                   " --lexicon " + shell_quote(kLexicon),
                               120.0);
        CHECK(res.ok());
        CHECK(res.out == "spelling here\n");
    }
}

TEST_CASE("noisegen is seed deterministic and logs changes") {
    helpers::TempDir dir("cli");
    std::string log = (dir / "log.tsv").string();
    std::string cmd = "echo 'the silver moon glows softly' | " + kBin +
                      " noisegen --seed 1234 --log " + shell_quote(log);
    auto a = run_command(cmd, 60.0);
    auto b = run_command(cmd, 60.0);
    REQUIRE(a.ok());
    CHECK(a.out == b.out);
    CHECK(a.out != "the silver moon glows softly\n");

    std::ifstream log_in(log);
    std::string line;
    int entries = 0;
    while (std::getline(log_in, line)) {
        ++entries;
        CHECK(std::count(line.begin(), line.end(), '\t') == 3);
    }
    CHECK(entries > 0);
}

TEST_CASE("eval on line-paired files emits the aggregate JSON") {
    helpers::TempDir dir("cli");
    auto hyp = helpers::write_file(dir / "hyp.txt", "Linuv\nflying\n");
    auto ref = helpers::write_file(dir / "ref.txt", "Linux\nflying\n");
    auto res = cli("eval --hyp " + shell_quote(hyp) + " --ref " + shell_quote(ref));
    REQUIRE(res.ok());
    json j = json::parse(res.out);
    CHECK(j["aggregate_cer"].get<double>() == doctest::Approx(1.0 / 11.0));
    CHECK(j["items"].size() == 2);
}

TEST_CASE("eval pairs directory contents by basename") {
    helpers::TempDir dir("cli");
    std::filesystem::create_directories(dir / "hyp");
    std::filesystem::create_directories(dir / "ref");
    helpers::write_file(dir / "hyp" / "a.txt", "Linuv");
    helpers::write_file(dir / "ref" / "a.txt", "Linux");
    helpers::write_file(dir / "hyp" / "b.txt", "same words");
    helpers::write_file(dir / "ref" / "b.txt", "same words");
    helpers::write_file(dir / "hyp" / "unpaired.txt", "ignored");  // no reference partner

    auto res = cli("eval --hyp " + shell_quote((dir / "hyp").string()) + " --ref " +
                   shell_quote((dir / "ref").string()));
    REQUIRE(res.ok());
    json j = json::parse(res.out);
    REQUIRE(j["items"].size() == 2);
    CHECK(j["items"][0]["id"] == "a.txt");
    CHECK(j["items"][0]["cer"].get<double>() == doctest::Approx(0.2));
    CHECK(j["items"][1]["cer"].get<double>() == 0.0);
}

TEST_CASE("eval TSV mode") {
    helpers::TempDir dir("cli");
    auto tsv = helpers::write_file(dir / "pairs.tsv", "s1\tLinuv\tLinux\ns2\tsame\tsame\n");
    auto res = cli("eval --tsv " + shell_quote(tsv));
    REQUIRE(res.ok());
    json j = json::parse(res.out);
    CHECK(j["items"][0]["id"] == "s1");
    CHECK(j["items"][0]["cer"].get<double>() == doctest::Approx(0.2));
    CHECK(j["items"][1]["cer"].get<double>() == 0.0);
}

TEST_CASE("segment writes crops and seams.json") {
    helpers::TempDir dir("cli");
    auto doc = helpers::make_document(2, 88);
    std::string image = (dir / "doc.pgm").string();
    save_pgm(doc.image, image);
    std::string out = (dir / "lines").string();
    REQUIRE(cli("segment " + shell_quote(image) + " --out-dir " + shell_quote(out)).ok());
    CHECK(std::ifstream(out + "/line_000.pgm").good());
    CHECK(std::ifstream(out + "/line_001.pgm").good());
    std::ifstream seams_in(out + "/seams.json");
    REQUIRE(seams_in.good());
    json seams = json::parse(seams_in);
    REQUIRE(seams.size() == 1);
    CHECK(seams[0].size() >= std::size_t(doc.image.width));
    CHECK(seams[0][0][1] == 0);  // first point at column 0
}

TEST_CASE("full run with transcript, chain, refs, and report file") {
    helpers::TempDir dir("cli");
    auto doc = helpers::make_document(2, 89);
    std::string image = (dir / "doc.pgm").string();
    save_pgm(doc.image, image);
    auto transcript = helpers::write_file(dir / "t.txt", "THETIMES here\nplain text\n");
    auto refs = helpers::write_file(dir / "r.txt", "THE TIMES here\nplain text\n");
    std::string report_path = (dir / "report.json").string();

    auto res = cli("run " + shell_quote(image) + " --transcript " + shell_quote(transcript) +
                   " --chain respace --ref " + shell_quote(refs) + " --report " +
                   shell_quote(report_path) + " --out-dir " + shell_quote((dir / "w").string()) +
                   " --lexicon " + shell_quote(kLexicon));
    REQUIRE(res.exit_code == 0);
    std::ifstream in(report_path);
    REQUIRE(in.good());
    json j = json::parse(in);
    CHECK(j["schema_version"] == 1);
    CHECK(j["document_text"] == "THE TIMES here\nplain text");
    CHECK(j["metrics"]["aggregate_cer"].get<double>() == 0.0);
    CHECK(j["lines"].size() == 2);
}

TEST_CASE("bench-spellfix emits the timing JSON") {
    auto res = run_command(kBin + " bench-spellfix --runs 3 --queries 2 --target-size 0 --lexicon " +
                               shell_quote(kLexicon),
                           300.0);
    REQUIRE(res.ok());
    json j = json::parse(res.out);
    CHECK(j["symspell_median_us"].get<double>() > 0.0);
    CHECK(j["norvig_median_us"].get<double>() > 0.0);
    CHECK(j["runs"] == 3);
    CHECK(j["lexicon_words"].get<int>() > 1000);
}

TEST_CASE("OCRPOST_LEXICON environment variable supplies the default") {
    auto res = run_command("echo 'THETIMES' | OCRPOST_LEXICON=" + shell_quote(kLexicon) + " " +
                               kBin + " respace",
                           60.0);
    REQUIRE(res.ok());
    CHECK(res.out == "THE TIMES\n");
}
