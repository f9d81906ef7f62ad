#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "stocksent/errors.hpp"
#include "stocksent/lexicon.hpp"
#include "stocksent/rng.hpp"
#include "stocksent/sentiment.hpp"

using namespace stocksent;

namespace {

const char* VADER_PATH = STOCKSENT_DATA_DIR "/vader_lexicon.txt";
const char* AFINN_PATH = STOCKSENT_DATA_DIR "/AFINN-en-165.txt";

const Lexicon& vader() {
    static const Lexicon lex = Lexicon::load(VADER_PATH);
    return lex;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

}  // namespace

TEST_CASE("bundled valence lexicon loads with every line retained") {
    const Lexicon& lex = vader();
    CHECK(lex.name() == "vader_lexicon.txt");
    CHECK(lex.entry_count() == 7517);
    // tokens are case-folded at load, which also merges letter emoticons
    CHECK(lex.distinct_tokens() == 7491);
    CHECK(lex.restated_tokens().size() == 26);
    REQUIRE(lex.contains("good"));
    CHECK(*lex.valence("good") == 1.9);
    CHECK(*lex.valence("no") == -1.2);
    // a token stated twice resolves to its later value
    CHECK(*lex.valence("lol") == 1.8);
    // multiword entries are legitimate keys
    CHECK(lex.contains("fed up"));
    CHECK_FALSE(lex.contains("not"));
    CHECK_FALSE(lex.valence("zzzz-unknown").has_value());
}

TEST_CASE("strict duplicate policy rejects restated tokens") {
    CHECK_THROWS_AS(Lexicon::load(VADER_PATH, DuplicatePolicy::Error), DuplicateError);
}

TEST_CASE("lexicon parse failures carry line numbers") {
    CHECK_THROWS_WITH_AS(Lexicon::parse("good 1.9\n", "x"), doctest::Contains("line 1"),
                         ParseError);
    CHECK_THROWS_AS(Lexicon::parse("\t1.9\n", "x"), ParseError);
    CHECK_THROWS_AS(Lexicon::parse("good\tnot-a-number\n", "x"), ParseError);
    CHECK_THROWS_AS(Lexicon::parse("good\tnan\n", "x"), ParseError);
    CHECK_THROWS_AS(Lexicon::parse("bad\t-2.0 extra\n", "x"), ParseError);
    Lexicon ok = Lexicon::parse("ok\t1.0\nbad\t-2.0\t0.4\t[1, 2]\n", "x");
    CHECK(ok.entry_count() == 2);
    CHECK(*ok.valence("bad") == -2.0);
    Lexicon empty = Lexicon::parse("", "x");
    CHECK(empty.empty());
    CHECK(empty.entry_count() == 0);
}

TEST_CASE("word-list lexicon with integer scores loads") {
    Lexicon lex = Lexicon::load(AFINN_PATH);
    CHECK(lex.entry_count() == 3382);
    CHECK(lex.restated_tokens().empty());
    CHECK(*lex.valence("good") == 3.0);
    CHECK(*lex.valence("abandon") == -2.0);
}

TEST_CASE("tokenizer strips edge punctuation but keeps short remainders whole") {
    CHECK(tokenize("GREAT stock!!") == std::vector<std::string>{"GREAT", "stock"});
    CHECK(tokenize(":) wins") == std::vector<std::string>{":)", "wins"});
    // "ok" would shrink to two chars, so the token survives untouched
    CHECK(tokenize("ok! fine") == std::vector<std::string>{"ok!", "fine"});
    CHECK(tokenize("...well...") == std::vector<std::string>{"well"});
    CHECK(tokenize("!!! wow") == std::vector<std::string>{"!!!", "wow"});
    CHECK(tokenize("don't worry") == std::vector<std::string>{"don't", "worry"});
    CHECK(tokenize("  spaced \t out \n") == std::vector<std::string>{"spaced", "out"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("   ").empty());
}

TEST_CASE("tweet preprocessing drops links and mentions") {
    CHECK(preprocess_tweet("check https://x.co/a?b now @bob ok") == "check now ok");
    CHECK(preprocess_tweet("WWW.EXAMPLE.COM fell") == "fell");
    CHECK(preprocess_tweet("http://a.b") == "");
    CHECK(preprocess_tweet("@") == "");
    CHECK(preprocess_tweet("email a@b.com kept") == "email a@b.com kept");
    CHECK(preprocess_tweet("plain text") == "plain text");
}

namespace {
struct Golden {
    const char* text;
    double pos, neg, neu, compound;
};

// frozen outputs of the reference scoring convention over the bundled lexicon
const Golden GOLDENS[] = {
    {"The product is good", 0.492, 0.000, 0.508, 0.4404},
    {"The product is not good", 0.000, 0.376, 0.624, -0.3412},
    {"The service was really good", 0.444, 0.000, 0.556, 0.4927},
    {"The launch was really very good", 0.410, 0.000, 0.590, 0.5379},
    {"VADER is smart, handsome, and funny.", 0.746, 0.000, 0.254, 0.8316},
    {"VADER is SMART, handsome, and FUNNY.", 0.774, 0.000, 0.226, 0.8825},
    {"The stock is terrible", 0.000, 0.508, 0.492, -0.4767},
    {"The stock is terrible!", 0.000, 0.531, 0.469, -0.5255},
    {"The stock is terrible!!!", 0.000, 0.570, 0.430, -0.6093},
    {"Are you happy??", 0.670, 0.000, 0.330, 0.6199},
    {"The day started badly but ended great", 0.445, 0.161, 0.394, 0.6808},
    {"I do not dislike cheap stocks", 0.304, 0.000, 0.696, 0.2924},
    {"Shares plunged today :(", 0.310, 0.408, 0.282, -0.1779},
    {"buy low sell high volume", 0.000, 0.344, 0.656, -0.2732},
    {"no good", 0.000, 0.706, 0.294, -0.3412},
    {"The results were hardly impressive", 0.429, 0.000, 0.571, 0.4601},
    {"The plan was not very good", 0.000, 0.344, 0.656, -0.3865},
    {"The launch was REALLY great", 0.562, 0.000, 0.438, 0.7291},
    {"terrible horrible awful day", 0.000, 0.906, 0.094, -0.8625},
    {"An okay outcome, nothing special", 0.265, 0.315, 0.419, -0.0920},
    {"profits :)", 1.000, 0.000, 0.000, 0.7096},
    {"LOL that was funny", 0.763, 0.000, 0.237, 0.7531},
    {"It is a catastrophe that nobody expected", 0.000, 0.423, 0.577, -0.6597},
    {"good", 1.000, 0.000, 0.000, 0.4404},
    {"Markets rallied strongly after the upbeat earnings call", 0.231, 0.000, 0.769, 0.2732},
    {"Investors fear a painful crash", 0.000, 0.815, 0.185, -0.8316},
};
}  // namespace

TEST_CASE("scores match frozen reference values") {
    for (const Golden& g : GOLDENS) {
        INFO("text: ", g.text);
        SentimentScore s = score_vader(g.text, vader());
        CHECK(near(s.compound, g.compound, 1e-4));
        CHECK(near(s.pos, g.pos, 1e-3));
        CHECK(near(s.neg, g.neg, 1e-3));
        CHECK(near(s.neu, g.neu, 1e-3));
    }
}

TEST_CASE("empty and unscorable text is fully neutral") {
    for (const char* text : {"", "   ", "\t\n"}) {
        SentimentScore s = score_vader(text, vader());
        CHECK(s.pos == 0.0);
        CHECK(s.neg == 0.0);
        CHECK(s.neu == 1.0);
        CHECK(s.compound == 0.0);
    }
    SentimentScore s = score_vader("the the the", vader());
    CHECK(s.compound == 0.0);
    CHECK(s.neu == 1.0);
}

TEST_CASE("exclamation marks amplify up to a cap of three") {
    std::vector<double> c;
    for (int k = 0; k <= 5; ++k) {
        c.push_back(score_vader("good" + std::string(k, '!'), vader()).compound);
    }
    for (int k = 0; k < 3; ++k) {
        INFO("k = ", k);
        CHECK(c[k] < c[k + 1]);
    }
    CHECK(c[3] == c[4]);
    CHECK(c[4] == c[5]);

    // the same holds in magnitude on the negative side
    double b0 = score_vader("bad", vader()).compound;
    double b2 = score_vader("bad!!", vader()).compound;
    CHECK(std::fabs(b2) > std::fabs(b0));
}

TEST_CASE("a leading negation flips and dampens the valence") {
    for (const char* w : {"good", "great", "happy", "bad", "terrible", "awful"}) {
        INFO("word: ", w);
        double plain = score_vader(w, vader()).compound;
        double negated = score_vader(std::string("not ") + w, vader()).compound;
        REQUIRE(plain != 0.0);
        CHECK(plain * negated < 0.0);
        CHECK(std::fabs(negated) < std::fabs(plain));
    }
}

TEST_CASE("randomized scores stay normalized") {
    const std::vector<std::string> vocab = {
        "good",  "bad",  "not",  "no",    "very",     "really", "so",    "GREAT",
        "TERRIBLE", "stock", "the", "a",  ":)",       ":(",     "!!!",   "??",
        "but",   "nothing", "hardly", "don't",        "never",  "quite", "AWESOME",
        "meh",   "ok!",  "news", "up",   "down",      "happy",  "sad"};
    SeededRng rng(20240822);
    for (int trial = 0; trial < 10000; ++trial) {
        std::string text;
        const std::size_t len = rng.below(9);
        for (std::size_t k = 0; k < len; ++k) {
            if (!text.empty()) text += ' ';
            text += vocab[rng.below(vocab.size())];
        }
        if (rng.below(4) == 0) text += std::string(rng.below(4), '!');
        SentimentScore s = score_vader(text, vader());
        INFO("text: ", text);
        REQUIRE(std::isfinite(s.compound));
        REQUIRE(s.compound >= -1.0);
        REQUIRE(s.compound <= 1.0);
        REQUIRE(s.pos >= 0.0);
        REQUIRE(s.neg >= 0.0);
        REQUIRE(s.neu >= 0.0);
        REQUIRE(near(s.pos + s.neg + s.neu, 1.0, 1e-9));
    }
}

TEST_CASE("additive scoring sums token valences") {
    const Lexicon& lex = vader();
    CHECK(score_additive("good bad", lex) == doctest::Approx(1.9 - 2.5));
    CHECK(score_additive("good GREAT unknownword", lex) == doctest::Approx(1.9 + 3.1));
    CHECK(score_additive("", lex) == 0.0);
    CHECK(score_additive("the of and", lex) == 0.0);

    Lexicon afinn = Lexicon::load(AFINN_PATH);
    CHECK(score_additive("good good", afinn) == doctest::Approx(6.0));

    // order independence and additivity over concatenation
    SeededRng rng(7);
    const std::vector<std::string> vocab = {"good", "bad", "great", "awful", "stock", "up"};
    for (int trial = 0; trial < 200; ++trial) {
        std::string a, b;
        for (std::size_t k = 0; k < rng.below(5); ++k) a += vocab[rng.below(vocab.size())] + " ";
        for (std::size_t k = 0; k < rng.below(5); ++k) b += vocab[rng.below(vocab.size())] + " ";
        double lhs = score_additive(a + " " + b, lex);
        double rhs = score_additive(a, lex) + score_additive(b, lex);
        REQUIRE(near(lhs, rhs, 1e-12));
    }
}

TEST_CASE("labels follow inclusive compound thresholds") {
    CHECK(classify(0.05) == SentimentLabel::Positive);
    CHECK(classify(-0.05) == SentimentLabel::Negative);
    CHECK(classify(0.049999) == SentimentLabel::Neutral);
    CHECK(classify(-0.049999) == SentimentLabel::Neutral);
    CHECK(classify(0.0) == SentimentLabel::Neutral);
    CHECK(classify(0.9) == SentimentLabel::Positive);
    CHECK(classify(-0.9) == SentimentLabel::Negative);
    CHECK(classify(0.2, 0.3, -0.3) == SentimentLabel::Neutral);
    CHECK_THROWS_AS(classify(0.0, -0.05, 0.05), ConfigError);
    CHECK_THROWS_AS(classify(0.0, 0.05, 0.05), ConfigError);
}

TEST_CASE("label names round-trip") {
    CHECK(parse_label("positive") == SentimentLabel::Positive);
    CHECK(parse_label("Negative") == SentimentLabel::Negative);
    CHECK(parse_label("NEUTRAL") == SentimentLabel::Neutral);
    CHECK(std::string(to_string(SentimentLabel::Positive)) == "positive");
    CHECK(std::string(to_string(parse_label("neutral"))) == "neutral");
    CHECK_THROWS_AS(parse_label("meh"), ValidationError);
}
