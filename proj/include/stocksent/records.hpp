#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stocksent/dates.hpp"

namespace stocksent {

// One trading day of price/volume data for one ticker.
// Invariants enforced at load: low <= min(open, close), high >= max(open,
// close), prices > 0, volume >= 0; per ticker, dates strictly increase.
struct OhlcvBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double adj_close = 0.0;
    long long volume = 0;
    std::string ticker;
};

struct TweetRecord {
    Timestamp timestamp;
    std::string text;
    std::string ticker;
    std::string company;
    std::optional<long long> likes;
};

// Aggregated sentiment for one UTC calendar date. Days with zero tweets are
// absent at this layer, never zero-filled.
struct DailySentiment {
    Date date;
    double mean_compound = 0.0;
    long tweet_count = 0;
};

struct FeatureRow {
    Date date;
    double adj_close = 0.0;
    double mean_compound = 0.0;
};

// Per-ticker daily feature table: one row per trading day, strictly
// date-ordered. sentiment_fill counts rows whose sentiment was imputed
// because no tweet covered them.
struct FeatureTable {
    std::string ticker;
    std::vector<FeatureRow> rows;
    long sentiment_fill = 0;
};

}  // namespace stocksent
