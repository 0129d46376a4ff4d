#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ocrpost/noisegen.hpp"
#include "ocrpost/spellfix.hpp"
#include "oracles.hpp"

using namespace ocrpost;

namespace {

Lexicon norvig_lexicon() {
    return Lexicon::from_counts({
        {"the", 500}, {"spelling", 40}, {"corrected", 30}, {"cat", 60},
        {"word", 50}, {"other", 45}, {"this", 70},
    });
}

Lexicon random_lexicon(SplitMix64& rng, int max_words, std::size_t max_len = 6) {
    std::vector<std::pair<std::string, std::int64_t>> counted;
    int n = 1 + int(rng.next_below(std::uint64_t(max_words)));
    for (int i = 0; i < n; ++i) {
        std::size_t len = 1 + rng.next_below(max_len);
        std::string w;
        for (std::size_t k = 0; k < len; ++k) w.push_back(char('a' + rng.next_below(3)));
        counted.emplace_back(std::move(w), 1 + std::int64_t(rng.next_below(100)));
    }
    return Lexicon::from_counts(counted);
}

}  // namespace

TEST_CASE("norvig: known words are unchanged") {
    Lexicon lex = norvig_lexicon();
    CHECK(norvig_correct("the", lex) == "the");
    CHECK(norvig_correct("The", lex) == "The");
}

TEST_CASE("norvig: one edit beats two") {
    Lexicon lex = norvig_lexicon();
    CHECK(norvig_edits1("speling").contains("spelling"));  // insert 'l'
    CHECK(norvig_correct("speling", lex) == "spelling");
    CHECK(norvig_correct("korrectud", lex) == "corrected");  // two edits
    CHECK(norvig_correct("zzzzzz", lex) == "zzzzzz");        // no candidate at all
}

TEST_CASE("norvig: edits1 set has the expected shape") {
    auto edits = norvig_edits1("ab");
    CHECK(edits.contains("a"));    // delete
    CHECK(edits.contains("b"));
    CHECK(edits.contains("ba"));   // transpose
    CHECK(edits.contains("xb"));   // replace
    CHECK(edits.contains("abx"));  // insert
    // n deletes + (n-1) transposes + 26n replaces + 26(n+1) inserts, with
    // duplicates collapsed
    CHECK(edits.size() <= 2 + 1 + 52 + 78);
    CHECK(edits.size() > 100);
}

TEST_CASE("norvig tier choice: highest count wins inside a tier") {
    Lexicon lex = Lexicon::from_counts({{"bat", 10}, {"cat", 90}, {"rat", 20}});
    // "aat" has all three at edit distance 1
    CHECK(norvig_correct("aat", lex) == "cat");
}

TEST_CASE("norvig returns a word from the lowest non-empty tier") {
    SplitMix64 rng(424242);
    for (int trial = 0; trial < 30; ++trial) {
        Lexicon lex = random_lexicon(rng, 50);
        std::string query;
        std::size_t len = 1 + rng.next_below(6);
        for (std::size_t k = 0; k < len; ++k) query.push_back(char('a' + rng.next_below(4)));

        std::string result = norvig_correct(query, lex);
        if (lex.contains(query)) {
            CHECK(result == query);
        } else if (!oracles::scan_within(lex, query, 1).empty()) {
            CHECK(oracles::osa_matrix(query, result) <= 1);
            CHECK(lex.contains(result));
        }
    }
}

TEST_CASE("norvig: non-ascii words pass through untouched") {
    Lexicon lex = norvig_lexicon();
    CHECK(norvig_correct("caféx", lex) == "caféx");
}

TEST_CASE("delete variants") {
    auto ab = DeleteIndex::delete_variants("ab", 1, 7);
    CHECK(std::set<std::string>(ab.begin(), ab.end()) ==
          std::set<std::string>{"ab", "a", "b"});

    auto a = DeleteIndex::delete_variants("a", 2, 7);
    CHECK(std::set<std::string>(a.begin(), a.end()) == std::set<std::string>{"a", ""});

    auto cat = DeleteIndex::delete_variants("cat", 1, 7);
    CHECK(std::set<std::string>(cat.begin(), cat.end()) ==
          std::set<std::string>{"cat", "at", "ct", "ca"});

    // prefix truncation: variants come from the first prefix_length chars
    auto truncated = DeleteIndex::delete_variants("abcdefgh", 1, 4);
    CHECK(std::set<std::string>(truncated.begin(), truncated.end()) ==
          std::set<std::string>{"abcdefgh", "abcd", "bcd", "acd", "abd", "abc"});
}

TEST_CASE("symspell: exact word is suggested first at distance zero") {
    Lexicon lex = norvig_lexicon();
    DeleteIndex index(lex);
    auto suggestions = index.lookup("spelling");
    REQUIRE(!suggestions.empty());
    CHECK(suggestions[0].word == "spelling");
    CHECK(suggestions[0].distance == 0);
}

TEST_CASE("symspell: acress finds across, access, actress ranked by count") {
    Lexicon lex = Lexicon::from_counts({{"across", 50}, {"actress", 20}, {"access", 30}});
    DeleteIndex index(lex, 2, 7);
    auto suggestions = index.lookup("acress");
    REQUIRE(suggestions.size() == 3);
    for (const auto& s : suggestions) CHECK(s.distance == 1);
    CHECK(suggestions[0].word == "across");
    CHECK(suggestions[1].word == "access");
    CHECK(suggestions[2].word == "actress");
}

TEST_CASE("symspell agrees with the brute-force scan (short queries)") {
    SplitMix64 rng(606);
    for (int trial = 0; trial < 40; ++trial) {
        Lexicon lex = random_lexicon(rng, 60);
        DeleteIndex index(lex, 2, 7);
        std::string query;
        std::size_t len = 1 + rng.next_below(6);
        for (std::size_t k = 0; k < len; ++k) query.push_back(char('a' + rng.next_below(4)));

        std::set<std::string> got;
        for (const auto& s : index.lookup(query)) got.insert(s.word);
        CHECK(got == oracles::scan_within(lex, query, 2));
    }
}

TEST_CASE("symspell long queries: subset with the right minimum distance") {
    SplitMix64 rng(1717);
    for (int trial = 0; trial < 25; ++trial) {
        Lexicon lex = random_lexicon(rng, 80, 10);
        DeleteIndex index(lex, 2, 7);
        std::string query;
        for (int k = 0; k < 9; ++k) query.push_back(char('a' + rng.next_below(3)));

        auto brute = oracles::scan_within(lex, query, 2);
        auto got = index.lookup(query);
        for (const auto& s : got) CHECK(brute.contains(s.word));
        if (!got.empty()) {
            std::size_t brute_min = 3;
            for (const auto& w : brute)
                brute_min = std::min(brute_min, oracles::osa_matrix(query, w));
            CHECK(std::size_t(got[0].distance) == brute_min);
        }
    }
}

TEST_CASE("symspell rejects hopeless queries") {
    Lexicon lex = norvig_lexicon();
    DeleteIndex index(lex);
    CHECK(oracles::scan_within(lex, "qqqqq", 2).empty());
    CHECK(index.lookup("qqqqq").empty());
}

TEST_CASE("index parameter validation") {
    Lexicon lex = norvig_lexicon();
    CHECK_THROWS_AS(DeleteIndex(lex, 0, 7), std::invalid_argument);
    CHECK_THROWS_AS(DeleteIndex(lex, 4, 7), std::invalid_argument);
    CHECK_THROWS_AS(DeleteIndex(lex, 2, 2), std::invalid_argument);
}

TEST_CASE("correct_sentence fixes the handwritten-line fixture") {
    Lexicon lex = Lexicon::from_counts({
        {"machine", 60}, {"learning", 55}, {"is", 400}, {"an", 350}, {"idea", 45},
        {"to", 500}, {"learn", 50}, {"from", 300}, {"examples", 25},
    });
    DeleteIndex index(lex);
    CHECK(correct_sentence("Mochint Leorning is on ideo to leorn from exomples",
                           CorrectorKind::SymSpell, lex, &index) ==
          "Machine Learning is an idea to learn from examples");
}

TEST_CASE("correct_sentence preserves punctuation, digits, and spacing") {
    Lexicon lex = norvig_lexicon();
    DeleteIndex index(lex);
    CHECK(correct_sentence("the cat.", CorrectorKind::SymSpell, lex, &index) == "the cat.");
    CHECK(correct_sentence("B17 code", CorrectorKind::SymSpell, lex, &index) == "B17 code");
    CHECK(correct_sentence("(speling)  twice", CorrectorKind::Norvig, lex) ==
          "(spelling)  twice");
}

TEST_CASE("correct_sentence restores casing patterns") {
    Lexicon lex = norvig_lexicon();
    DeleteIndex index(lex);
    CHECK(correct_sentence("SPELING", CorrectorKind::SymSpell, lex, &index) == "SPELLING");
    CHECK(correct_sentence("Speling", CorrectorKind::SymSpell, lex, &index) == "Spelling");
    CHECK(correct_sentence("speling", CorrectorKind::SymSpell, lex, &index) == "spelling");
}

TEST_CASE("correcting a correct sentence is the identity") {
    Lexicon lex = norvig_lexicon();
    DeleteIndex index(lex);
    std::string sentence = "the cat corrected this word";
    CHECK(correct_sentence(sentence, CorrectorKind::SymSpell, lex, &index) == sentence);
    CHECK(correct_sentence(sentence, CorrectorKind::Norvig, lex) == sentence);
}

TEST_CASE("unknown tokens with no suggestions pass through") {
    Lexicon lex = norvig_lexicon();
    DeleteIndex index(lex);
    CHECK(correct_sentence("Zxqwvbn stays", CorrectorKind::SymSpell, lex, &index) ==
          "Zxqwvbn stays");
}

TEST_CASE("benchmark harness runs and reports sane numbers") {
    std::vector<std::pair<std::string, std::int64_t>> counted;
    SplitMix64 rng(3);
    for (int i = 0; i < 400; ++i) {
        std::string w;
        std::size_t len = 4 + rng.next_below(8);
        for (std::size_t k = 0; k < len; ++k) w.push_back(char('a' + rng.next_below(26)));
        counted.emplace_back(std::move(w), i + 1);
    }
    Lexicon lex = Lexicon::from_counts(counted);
    BenchReport report = run_spellfix_benchmark(lex, 5, 2, 42);
    CHECK(report.symspell_median_us > 0.0);
    CHECK(report.norvig_median_us > 0.0);
    CHECK(report.runs == 5);
    CHECK(report.lexicon_words == lex.size());
}
