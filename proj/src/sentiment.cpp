#include "stocksent/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include "stocksent/errors.hpp"

namespace stocksent {

namespace {

// Rule constants of the VADER scoring convention.
constexpr double B_INCR = 0.293;
constexpr double B_DECR = -0.293;
constexpr double C_INCR = 0.733;      // ALL-CAPS emphasis
constexpr double N_SCALAR = -0.74;    // negation flip
constexpr double NORM_ALPHA = 15.0;   // compound normalization
constexpr double EXCLAMATION_INCR = 0.292;
constexpr int EXCLAMATION_CAP = 3;

const char PUNCT[] = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

bool is_punct(char c) { return std::strchr(PUNCT, c) != nullptr && c != '\0'; }

std::string lower_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// True when the token has at least one letter and every letter is uppercase.
bool is_upper_token(const std::string& s) {
    bool has_alpha = false;
    for (char c : s) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            has_alpha = true;
            if (!std::isupper(static_cast<unsigned char>(c))) return false;
        }
    }
    return has_alpha;
}

const std::unordered_set<std::string>& negate_set() {
    static const std::unordered_set<std::string> words{
        "aint",     "arent",    "cannot",   "cant",     "couldnt",  "darent",  "didnt",
        "doesnt",   "ain't",    "aren't",   "can't",    "couldn't", "daren't", "didn't",
        "doesn't",  "dont",     "hadnt",    "hasnt",    "havent",   "isnt",    "mightnt",
        "mustnt",   "neither",  "don't",    "hadn't",   "hasn't",   "haven't", "isn't",
        "mightn't", "mustn't",  "neednt",   "needn't",  "never",    "none",    "nope",
        "nor",      "not",      "nothing",  "nowhere",  "oughtnt",  "shant",   "shouldnt",
        "uhuh",     "wasnt",    "werent",   "oughtn't", "shan't",   "shouldn't",
        "uh-uh",    "wasn't",   "weren't",  "without",  "wont",     "wouldnt", "won't",
        "wouldn't", "rarely",   "seldom",   "despite"};
    return words;
}

const std::unordered_map<std::string, double>& booster_map() {
    static const std::unordered_map<std::string, double> words = [] {
        std::unordered_map<std::string, double> m;
        for (const char* w :
             {"absolutely", "amazingly",  "awfully",      "completely",   "considerable",
              "considerably", "decidedly", "deeply",      "effing",       "enormous",
              "enormously", "entirely",   "especially",   "exceptional",  "exceptionally",
              "extreme",    "extremely",  "fabulously",   "flipping",     "flippin",
              "frackin",    "fracking",   "fricking",     "frickin",      "frigging",
              "friggin",    "fully",      "fuckin",       "fucking",      "fuggin",
              "fugging",    "greatly",    "hella",        "highly",       "hugely",
              "incredible", "incredibly", "intensely",    "major",        "majorly",
              "more",       "most",       "particularly", "purely",       "quite",
              "really",     "remarkably", "so",           "substantially", "thoroughly",
              "total",      "totally",    "tremendous",   "tremendously", "uber",
              "unbelievably", "unusually", "utter",       "utterly",      "very"}) {
            m.emplace(w, B_INCR);
        }
        for (const char* w :
             {"almost",     "barely",     "hardly",   "just enough", "kind of",  "kind-of",
              "kinda",      "kindof",     "less",     "little",      "marginal", "marginally",
              "occasional", "occasionally", "partly", "scarce",      "scarcely", "slight",
              "slightly",   "somewhat",   "sort of",  "sort-of",     "sorta",    "sortof"}) {
            m.emplace(w, B_DECR);
        }
        return m;
    }();
    return words;
}

bool is_negation(const std::string& lower) {
    if (negate_set().count(lower)) return true;
    return lower.find("n't") != std::string::npos;
}

// Booster contribution of the single word preceding a valenced item.
// Sign follows the item's valence; ALL-CAPS boosters gain extra weight when
// the text mixes cases.
double scalar_inc_dec(const std::string& word, const std::string& lower, double valence,
                      bool is_cap_diff) {
    auto it = booster_map().find(lower);
    if (it == booster_map().end()) return 0.0;
    double scalar = it->second;
    if (valence < 0) scalar = -scalar;
    if (is_upper_token(word) && is_cap_diff) {
        scalar += valence > 0 ? C_INCR : -C_INCR;
    }
    return scalar;
}

// Negation flip for the lookback position `start` (0 = previous token).
// The "never so/this" intensifier and "without doubt" exception of richer
// rule sets are recognized only to shield the plain flip; they do not
// rescale here.
double negation_check(double valence, const std::vector<std::string>& lowers, int start,
                      std::size_t i) {
    if (start == 0) {
        if (is_negation(lowers[i - 1])) valence *= N_SCALAR;
    } else if (start == 1) {
        const std::string& two_back = lowers[i - 2];
        if (two_back == "never" && (lowers[i - 1] == "so" || lowers[i - 1] == "this")) {
            // shielded
        } else if (two_back == "without" && lowers[i - 1] == "doubt") {
            // shielded
        } else if (is_negation(two_back)) {
            valence *= N_SCALAR;
        }
    } else {
        const std::string& three_back = lowers[i - 3];
        if (three_back == "never" && (lowers[i - 2] == "so" || lowers[i - 2] == "this" ||
                                      lowers[i - 1] == "so" || lowers[i - 1] == "this")) {
            // shielded
        } else if (three_back == "without" &&
                   (lowers[i - 2] == "doubt" || lowers[i - 1] == "doubt")) {
            // shielded
        } else if (is_negation(three_back)) {
            valence *= N_SCALAR;
        }
    }
    return valence;
}

// Booster and negation context over the three tokens before position i.
// A preceding token that is itself a lexicon entry carries its own valence
// and never acts as context.
double apply_context(double valence, const std::vector<std::string>& tokens,
                     const std::vector<std::string>& lowers, std::size_t i,
                     const Lexicon& lexicon, bool is_cap_diff) {
    for (int start = 0; start < 3; ++start) {
        if (i <= static_cast<std::size_t>(start)) break;
        const std::size_t prev = i - static_cast<std::size_t>(start) - 1;
        if (lexicon.contains(lowers[prev])) continue;
        double s = scalar_inc_dec(tokens[prev], lowers[prev], valence, is_cap_diff);
        if (start == 1 && s != 0.0) s *= 0.95;
        if (start == 2 && s != 0.0) s *= 0.9;
        valence += s;
        valence = negation_check(valence, lowers, start, i);
    }
    return valence;
}

double punctuation_emphasis(const std::string& text) {
    int ep = 0, qm = 0;
    for (char c : text) {
        if (c == '!') ++ep;
        if (c == '?') ++qm;
    }
    double amp = std::min(ep, EXCLAMATION_CAP) * EXCLAMATION_INCR;
    if (qm > 1) amp += qm <= 3 ? qm * 0.18 : 0.96;
    return amp;
}

double normalize_compound(double score) {
    double c = score / std::sqrt(score * score + NORM_ALPHA);
    return std::clamp(c, -1.0, 1.0);
}

}  // namespace

const char* to_string(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::Positive: return "positive";
        case SentimentLabel::Negative: return "negative";
        case SentimentLabel::Neutral: return "neutral";
    }
    return "neutral";
}

SentimentLabel parse_label(const std::string& text) {
    const std::string lower = lower_ascii(text);
    if (lower == "positive") return SentimentLabel::Positive;
    if (lower == "negative") return SentimentLabel::Negative;
    if (lower == "neutral") return SentimentLabel::Neutral;
    throw ValidationError("unknown sentiment label \"" + text + "\"");
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;
        std::string token = text.substr(start, i - start);
        std::size_t b = 0, e = token.size();
        while (b < e && is_punct(token[b])) ++b;
        while (e > b && is_punct(token[e - 1])) --e;
        // A remainder of two or fewer characters keeps the original token,
        // which preserves emoticons and all-punctuation tokens.
        if (e - b > 2) token = token.substr(b, e - b);
        out.push_back(std::move(token));
    }
    return out;
}

std::string preprocess_tweet(const std::string& text) {
    std::string out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) break;
        const std::string token = text.substr(start, i - start);
        const std::string lower = lower_ascii(token);
        const bool is_url = lower.rfind("http://", 0) == 0 || lower.rfind("https://", 0) == 0 ||
                            lower.rfind("www.", 0) == 0;
        const bool is_mention = !token.empty() && token[0] == '@';
        if (is_url || is_mention) continue;
        if (!out.empty()) out += ' ';
        out += token;
    }
    return out;
}

SentimentScore score_vader(const std::string& text, const Lexicon& lexicon) {
    const std::vector<std::string> tokens = tokenize(text);
    const std::size_t n = tokens.size();
    if (n == 0) {
        return SentimentScore{0.0, 0.0, 1.0, 0.0};
    }
    std::vector<std::string> lowers;
    lowers.reserve(n);
    for (const auto& t : tokens) lowers.push_back(lower_ascii(t));

    std::size_t allcap = 0;
    for (const auto& t : tokens) {
        if (is_upper_token(t)) ++allcap;
    }
    const bool is_cap_diff = allcap > 0 && allcap < n;

    std::vector<double> sentiments;
    std::vector<std::size_t> positions;  // starting token index per entry

    std::size_t i = 0;
    while (i < n) {
        // Boosters carry no valence of their own.
        if (booster_map().count(lowers[i])) {
            sentiments.push_back(0.0);
            positions.push_back(i);
            ++i;
            continue;
        }

        // Multiword lexicon phrases, longest first.
        std::size_t phrase_len = 0;
        double phrase_valence = 0.0;
        for (std::size_t len = 3; len >= 2; --len) {
            if (i + len > n) continue;
            std::string joined = lowers[i];
            for (std::size_t k = 1; k < len; ++k) {
                joined += ' ';
                joined += lowers[i + k];
            }
            if (auto v = lexicon.valence(joined)) {
                phrase_len = len;
                phrase_valence = *v;
                break;
            }
        }
        if (phrase_len > 0) {
            double valence = phrase_valence;
            bool all_upper = true;
            for (std::size_t k = 0; k < phrase_len; ++k) {
                all_upper = all_upper && is_upper_token(tokens[i + k]);
            }
            if (all_upper && is_cap_diff) valence += valence > 0 ? C_INCR : -C_INCR;
            valence = apply_context(valence, tokens, lowers, i, lexicon, is_cap_diff);
            sentiments.push_back(valence);
            positions.push_back(i);
            i += phrase_len;
            continue;
        }

        double valence = 0.0;
        if (auto base = lexicon.valence(lowers[i])) {
            valence = *base;
            // "no" before a lexicon item negates it instead of scoring itself.
            if (lowers[i] == "no" && i + 1 < n && lexicon.contains(lowers[i + 1])) {
                valence = 0.0;
            }
            if ((i >= 1 && lowers[i - 1] == "no") || (i >= 2 && lowers[i - 2] == "no") ||
                (i >= 3 && lowers[i - 3] == "no" &&
                 (lowers[i - 1] == "or" || lowers[i - 1] == "nor"))) {
                valence = *base * N_SCALAR;
            }
            if (is_upper_token(tokens[i]) && is_cap_diff) {
                valence += valence > 0 ? C_INCR : -C_INCR;
            }
            valence = apply_context(valence, tokens, lowers, i, lexicon, is_cap_diff);
        }
        sentiments.push_back(valence);
        positions.push_back(i);
        ++i;
    }

    // "but" pivots the clause weights: everything before it matters less,
    // everything after matters more.
    std::size_t but_idx = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (lowers[k] == "but") {
            but_idx = k;
            break;
        }
    }
    if (but_idx < n) {
        for (std::size_t k = 0; k < sentiments.size(); ++k) {
            if (positions[k] < but_idx) sentiments[k] *= 0.5;
            else if (positions[k] > but_idx) sentiments[k] *= 1.5;
        }
    }

    const double punct = punctuation_emphasis(text);

    double sum = 0.0;
    for (double s : sentiments) sum += s;
    if (sum > 0) sum += punct;
    else if (sum < 0) sum -= punct;

    SentimentScore score;
    score.compound = normalize_compound(sum);

    double pos_sum = 0.0, neg_sum = 0.0;
    long neu_count = 0;
    for (double s : sentiments) {
        if (s > 0) pos_sum += s + 1.0;        // +1 compensates the neutral count weight
        else if (s < 0) neg_sum += s - 1.0;
        else ++neu_count;
    }
    if (pos_sum > std::fabs(neg_sum)) pos_sum += punct;
    else if (pos_sum < std::fabs(neg_sum)) neg_sum -= punct;

    const double total = pos_sum + std::fabs(neg_sum) + static_cast<double>(neu_count);
    score.pos = std::fabs(pos_sum / total);
    score.neg = std::fabs(neg_sum / total);
    score.neu = std::fabs(static_cast<double>(neu_count) / total);
    return score;
}

double score_additive(const std::string& text, const Lexicon& lexicon) {
    double sum = 0.0;
    for (const std::string& token : tokenize(text)) {
        if (auto v = lexicon.valence(lower_ascii(token))) sum += *v;
    }
    return sum;
}

SentimentLabel classify(double compound, double pos_threshold, double neg_threshold) {
    if (!(neg_threshold < pos_threshold)) {
        throw ConfigError("classification thresholds inverted: negative " +
                          std::to_string(neg_threshold) + " must be below positive " +
                          std::to_string(pos_threshold));
    }
    if (compound >= pos_threshold) return SentimentLabel::Positive;
    if (compound <= neg_threshold) return SentimentLabel::Negative;
    return SentimentLabel::Neutral;
}

}  // namespace stocksent
