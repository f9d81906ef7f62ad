#include "stocksent/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "stocksent/csv.hpp"
#include "stocksent/errors.hpp"

namespace stocksent {

namespace {

// Header names compare after lowercasing, trimming, and collapsing runs of
// spaces/underscores, so "Adj Close", "adj_close", and " ADJ  CLOSE " agree.
std::string normalize_header(const std::string& s) {
    std::string out;
    bool pending_space = false;
    for (char raw : s) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
        if (c == '_' || c == ' ' || c == '\t') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += c;
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string upper_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

// Maps required column names to field indices; throws SchemaError naming the
// first missing column.
std::map<std::string, std::size_t> map_header(const CsvRecord& header,
                                              const std::vector<std::string>& required,
                                              const char* what) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        index[normalize_header(header.fields[i])] = i;
    }
    for (const std::string& col : required) {
        if (!index.count(col)) {
            throw SchemaError(std::string(what) + " header is missing column \"" + col + "\"");
        }
    }
    return index;
}

double parse_price(const std::string& raw, const char* col, long line) {
    const std::string s = trim(raw);
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("unparseable number in column \"") + col + "\": \"" + s +
                             "\"",
                         line);
    }
}

long long parse_volume(const std::string& raw, long line) {
    const std::string s = trim(raw);
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v) || v < 0 ||
            std::fabs(v - std::llround(v)) > 1e-9) {
            throw std::invalid_argument(s);
        }
        return std::llround(v);
    } catch (const std::exception&) {
        throw ParseError("unparseable volume \"" + s + "\"", line);
    }
}

Date parse_date_cell(const std::string& raw, long line) {
    try {
        return parse_date(trim(raw));
    } catch (const ParseError& e) {
        throw ParseError(std::string("bad date: ") + e.what(), line);
    }
}

}  // namespace

std::vector<OhlcvBar> parse_stock_csv(const std::string& content) {
    const std::vector<CsvRecord> records = parse_csv(content);
    if (records.empty()) throw SchemaError("stock CSV has no header row");
    static const std::vector<std::string> required{"date",  "open",      "high",   "low",
                                                   "close", "adj close", "volume", "stock name"};
    const auto index = map_header(records.front(), required, "stock CSV");

    std::vector<OhlcvBar> bars;
    bars.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& rec = records[r];
        if (rec.fields.size() < index.size()) {
            throw ParseError("row has " + std::to_string(rec.fields.size()) +
                                 " fields, header has " + std::to_string(index.size()),
                             rec.line);
        }
        auto cell = [&](const char* col) -> const std::string& {
            return rec.fields[index.at(col)];
        };
        OhlcvBar bar;
        bar.date = parse_date_cell(cell("date"), rec.line);
        bar.open = parse_price(cell("open"), "open", rec.line);
        bar.high = parse_price(cell("high"), "high", rec.line);
        bar.low = parse_price(cell("low"), "low", rec.line);
        bar.close = parse_price(cell("close"), "close", rec.line);
        bar.adj_close = parse_price(cell("adj close"), "adj close", rec.line);
        bar.volume = parse_volume(cell("volume"), rec.line);
        bar.ticker = upper_ascii(trim(cell("stock name")));
        if (bar.ticker.empty()) throw ParseError("empty stock name", rec.line);
        if (bar.open <= 0 || bar.high <= 0 || bar.low <= 0 || bar.close <= 0 ||
            bar.adj_close <= 0) {
            throw ValidationError("non-positive price at line " + std::to_string(rec.line));
        }
        if (bar.low > std::min(bar.open, bar.close) + 1e-9 ||
            bar.high < std::max(bar.open, bar.close) - 1e-9) {
            throw ValidationError("OHLC range violation (low/high vs open/close) at line " +
                                  std::to_string(rec.line));
        }
        bars.push_back(std::move(bar));
    }

    std::stable_sort(bars.begin(), bars.end(), [](const OhlcvBar& a, const OhlcvBar& b) {
        if (a.ticker != b.ticker) return a.ticker < b.ticker;
        return a.date < b.date;
    });
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].ticker == bars[i - 1].ticker && bars[i].date == bars[i - 1].date) {
            throw DuplicateError("duplicate (ticker, date): " + bars[i].ticker + " " +
                                 bars[i].date.to_string());
        }
    }
    return bars;
}

std::vector<OhlcvBar> load_stock_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_stock_csv(buf.str());
}

std::vector<TweetRecord> parse_tweets_csv(const std::string& content) {
    const std::vector<CsvRecord> records = parse_csv(content);
    if (records.empty()) throw SchemaError("tweet CSV has no header row");
    static const std::vector<std::string> required{"date", "tweet", "stock name", "company name"};
    const auto index = map_header(records.front(), required, "tweet CSV");
    const bool has_likes = index.count("likes") > 0;

    std::vector<TweetRecord> out;
    out.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& rec = records[r];
        if (rec.fields.size() < index.size()) {
            throw ParseError("row has " + std::to_string(rec.fields.size()) +
                                 " fields, header has " + std::to_string(index.size()),
                             rec.line);
        }
        TweetRecord t;
        try {
            t.timestamp = parse_timestamp(trim(rec.fields[index.at("date")]));
        } catch (const ParseError& e) {
            throw ParseError(std::string("bad timestamp: ") + e.what(), rec.line);
        }
        t.text = rec.fields[index.at("tweet")];
        if (trim(t.text).empty()) throw ParseError("empty tweet text", rec.line);
        t.ticker = trim(rec.fields[index.at("stock name")]);
        t.company = trim(rec.fields[index.at("company name")]);
        if (has_likes) {
            const std::string raw = trim(rec.fields[index.at("likes")]);
            if (!raw.empty()) {
                try {
                    std::size_t pos = 0;
                    long long v = std::stoll(raw, &pos);
                    if (pos != raw.size() || v < 0) throw std::invalid_argument(raw);
                    t.likes = v;
                } catch (const std::exception&) {
                    throw ParseError("unparseable likes \"" + raw + "\"", rec.line);
                }
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<TweetRecord> load_tweets_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tweets_csv(buf.str());
}

FilterResult filter_tweets(const std::vector<TweetRecord>& records, long long min_likes) {
    if (min_likes < 0) throw ConfigError("min_likes must be non-negative");
    FilterResult result;
    bool any_likes = false;
    for (const TweetRecord& t : records) {
        if (t.likes.has_value()) {
            any_likes = true;
            break;
        }
    }
    if (!any_likes) {
        result.records = records;
        result.likes_absent = true;
        return result;
    }
    for (const TweetRecord& t : records) {
        if (t.likes.has_value() && *t.likes > min_likes) result.records.push_back(t);
    }
    return result;
}

std::vector<DailySentiment> aggregate_daily(const std::vector<TweetRecord>& records,
                                            const std::vector<double>& compounds) {
    if (records.size() != compounds.size()) {
        throw ShapeError("aggregate_daily: record and score counts differ");
    }
    std::map<std::int64_t, std::pair<double, long>> by_day;  // day serial -> (sum, count)
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double c = compounds[i];
        if (!(c >= -1.0 && c <= 1.0)) {
            throw ValidationError("compound score outside [-1, 1]: " + std::to_string(c));
        }
        auto& slot = by_day[days_from_civil(records[i].timestamp.utc_date)];
        slot.first += c;
        slot.second += 1;
    }
    std::vector<DailySentiment> out;
    out.reserve(by_day.size());
    for (const auto& [day, sum_count] : by_day) {
        DailySentiment d;
        d.date = civil_from_days(day);
        d.tweet_count = sum_count.second;
        d.mean_compound = sum_count.first / static_cast<double>(sum_count.second);
        out.push_back(d);
    }
    return out;
}

FeatureTable merge(const std::vector<OhlcvBar>& bars, const std::vector<DailySentiment>& daily) {
    if (bars.empty()) throw InsufficientDataError("merge: no trading bars for ticker");
    for (const OhlcvBar& b : bars) {
        if (b.ticker != bars.front().ticker) {
            throw DataError("merge expects bars for a single ticker, got " +
                            bars.front().ticker + " and " + b.ticker);
        }
    }
    std::vector<const OhlcvBar*> sorted;
    sorted.reserve(bars.size());
    for (const OhlcvBar& b : bars) sorted.push_back(&b);
    std::sort(sorted.begin(), sorted.end(),
              [](const OhlcvBar* a, const OhlcvBar* b) { return a->date < b->date; });

    std::vector<DailySentiment> sent = daily;
    std::sort(sent.begin(), sent.end(),
              [](const DailySentiment& a, const DailySentiment& b) { return a.date < b.date; });

    FeatureTable table;
    table.ticker = bars.front().ticker;
    table.rows.reserve(sorted.size());

    std::size_t si = 0;
    for (const OhlcvBar* bar : sorted) {
        double weighted_sum = 0.0;
        long weight = 0;
        // Consume every sentiment day up to and including this trading day;
        // earlier non-trading days roll forward onto it.
        while (si < sent.size() && sent[si].date <= bar->date) {
            weighted_sum += sent[si].mean_compound * static_cast<double>(sent[si].tweet_count);
            weight += sent[si].tweet_count;
            ++si;
        }
        FeatureRow row;
        row.date = bar->date;
        row.adj_close = bar->adj_close;
        if (weight > 0) {
            row.mean_compound = weighted_sum / static_cast<double>(weight);
        } else {
            row.mean_compound = 0.0;
            ++table.sentiment_fill;
        }
        table.rows.push_back(row);
    }
    return table;
}

void write_feature_csv(const std::string& path, const FeatureTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    write_csv_row(out, {"date", "adj_close", "sentiment"});
    for (const FeatureRow& row : table.rows) {
        std::ostringstream price, sent;
        price.precision(17);
        sent.precision(17);
        price << row.adj_close;
        sent << row.mean_compound;
        write_csv_row(out, {row.date.to_string(), price.str(), sent.str()});
    }
}

}  // namespace stocksent
