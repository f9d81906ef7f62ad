#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace stocksent {

// How the loader treats a token that appears on more than one line.
// The bundled VADER-style lexicon restates 15 tokens with updated valences,
// so the default keeps the last statement (matching the reference tool's
// dictionary construction) and records the token as a warning. Strict mode
// raises DuplicateError instead, for curated single-statement lexicons.
enum class DuplicatePolicy { LastWins, Error };

struct LexiconEntry {
    std::string token;
    double valence = 0.0;
};

// Token-to-valence dictionary for rule-based sentiment scoring.
// Every parsed line is retained as an entry (entry_count); lookups resolve
// through a last-wins index whose keys are unique lowercase tokens.
class Lexicon {
public:
    Lexicon() = default;

    // File format: one entry per line, "token<TAB>valence[<TAB>extra...]".
    // Extra fields (rating stddev, raw scores) are ignored. An empty file
    // yields an empty lexicon; callers may warn.
    static Lexicon load(const std::string& path,
                        DuplicatePolicy policy = DuplicatePolicy::LastWins);
    static Lexicon parse(const std::string& content, const std::string& name,
                         DuplicatePolicy policy = DuplicatePolicy::LastWins);

    const std::string& name() const { return name_; }
    bool empty() const { return entries_.empty(); }

    // Number of entries loaded, one per data line (restatements included).
    std::size_t entry_count() const { return entries_.size(); }

    // Number of unique lookup keys.
    std::size_t distinct_tokens() const { return index_.size(); }

    // Tokens that appeared more than once; empty under normal curated input.
    const std::vector<std::string>& restated_tokens() const { return restated_; }

    const std::vector<LexiconEntry>& entries() const { return entries_; }

    // Lookups expect the caller to pass lowercase tokens.
    bool contains(const std::string& lower_token) const {
        return index_.count(lower_token) > 0;
    }
    std::optional<double> valence(const std::string& lower_token) const {
        auto it = index_.find(lower_token);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::string name_;
    std::vector<LexiconEntry> entries_;
    std::unordered_map<std::string, double> index_;
    std::vector<std::string> restated_;
};

}  // namespace stocksent
