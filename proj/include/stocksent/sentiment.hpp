#pragma once

#include <string>
#include <vector>

#include "stocksent/lexicon.hpp"

namespace stocksent {

// Valence shares over a text. pos + neg + neu = 1 (to 1e-9); compound is
// the normalized total sentiment in [-1, 1].
struct SentimentScore {
    double pos = 0.0;
    double neg = 0.0;
    double neu = 0.0;
    double compound = 0.0;
};

enum class SentimentLabel { Negative, Neutral, Positive };

const char* to_string(SentimentLabel label);

// Parses "positive"/"neutral"/"negative" (case-insensitive); throws
// ValidationError otherwise.
SentimentLabel parse_label(const std::string& text);

// Whitespace-split, then strip surrounding punctuation from each token
// unless the stripped remainder has two or fewer characters, in which case
// the original token survives (keeps emoticons like ":)" intact). Casing is
// preserved because capitalization emphasis needs it.
std::vector<std::string> tokenize(const std::string& text);

// Tweet hygiene applied before scoring: whitespace-tokens that are URLs
// (http://, https://, www.) or @-mentions are removed.
std::string preprocess_tweet(const std::string& text);

// Rule-based scoring: lexicon lookup (case-folded), booster/dampener words
// with distance decay, negation flip over a three-token lookback, ALL-CAPS
// emphasis when the text mixes cases, exclamation/question-mark
// amplification, and "but"-clause reweighting. The summed valence s
// normalizes to compound = s / sqrt(s^2 + 15). A text with no tokens scores
// neutral: compound 0, neu 1.
SentimentScore score_vader(const std::string& text, const Lexicon& lexicon);

// Plain sum of matched token valences, no heuristics (AFINN-style).
double score_additive(const std::string& text, const Lexicon& lexicon);

// Threshold classification; boundaries are inclusive on the non-neutral
// side. Requires neg_threshold < pos_threshold.
SentimentLabel classify(double compound, double pos_threshold = 0.05,
                        double neg_threshold = -0.05);

}  // namespace stocksent
