#pragma once

#include <string>
#include <vector>

#include "stocksent/records.hpp"

namespace stocksent {

// Loads the eight-column stock CSV (date, open, high, low, close, adj close,
// volume, stock name; header case-insensitive, any order). Output is grouped
// by ticker and date-sorted within each ticker; row count is preserved.
// Throws SchemaError (missing column), ParseError (bad cell, with line),
// DuplicateError (repeated ticker+date), ValidationError (price sanity).
std::vector<OhlcvBar> load_stock_csv(const std::string& path);
std::vector<OhlcvBar> parse_stock_csv(const std::string& content);

// Loads the tweet CSV (date, tweet, stock name, company name; optional
// likes). Rows stay in file order; text is preserved byte-exactly.
std::vector<TweetRecord> load_tweets_csv(const std::string& path);
std::vector<TweetRecord> parse_tweets_csv(const std::string& content);

struct FilterResult {
    std::vector<TweetRecord> records;
    // Set when no record carries a likes value, in which case the filter
    // degraded to the identity.
    bool likes_absent = false;
};

// Keeps records with likes > min_likes. When the likes column is absent on
// every record the input passes through unchanged with the warning flag set.
FilterResult filter_tweets(const std::vector<TweetRecord>& records, long long min_likes);

// Groups scores by UTC calendar date; arithmetic mean per day, one entry per
// day that has at least one tweet, ascending by date.
std::vector<DailySentiment> aggregate_daily(const std::vector<TweetRecord>& records,
                                            const std::vector<double>& compounds);

// Aligns daily sentiment onto trading days for one ticker. Sentiment dated
// between two trading days (weekends, holidays) rolls forward onto the next
// trading day as a tweet-count-weighted mean; trading days with no coverage
// impute 0.0 and count toward sentiment_fill. Sentiment after the final
// trading day has no carrier and is dropped.
FeatureTable merge(const std::vector<OhlcvBar>& bars, const std::vector<DailySentiment>& daily);

// FeatureTable serialization: columns date,adj_close,sentiment.
void write_feature_csv(const std::string& path, const FeatureTable& table);

}  // namespace stocksent
