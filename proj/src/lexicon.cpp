#include "stocksent/lexicon.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stocksent/errors.hpp"

namespace stocksent {

namespace {

std::string lower_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

Lexicon Lexicon::parse(const std::string& content, const std::string& name,
                       DuplicatePolicy policy) {
    Lexicon lex;
    lex.name_ = name;
    std::istringstream in(content);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw ParseError("lexicon line lacks \"token<TAB>valence\"", line_no);
        }
        std::string token = lower_ascii(line.substr(0, tab));
        std::size_t tab2 = line.find('\t', tab + 1);
        const std::string raw =
            tab2 == std::string::npos ? line.substr(tab + 1) : line.substr(tab + 1, tab2 - tab - 1);
        double valence = 0.0;
        try {
            std::size_t pos = 0;
            valence = std::stod(raw, &pos);
            if (pos != raw.size() || !std::isfinite(valence)) throw std::invalid_argument(raw);
        } catch (const std::exception&) {
            throw ParseError("unparseable valence \"" + raw + "\"", line_no);
        }
        auto [it, inserted] = lex.index_.try_emplace(token, valence);
        if (!inserted) {
            if (policy == DuplicatePolicy::Error) {
                throw DuplicateError("duplicate lexicon token \"" + token + "\" at line " +
                                     std::to_string(line_no));
            }
            it->second = valence;  // last statement wins
            lex.restated_.push_back(token);
        }
        lex.entries_.push_back(LexiconEntry{std::move(token), valence});
    }
    return lex;
}

Lexicon Lexicon::load(const std::string& path, DuplicatePolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open lexicon: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string name = path;
    const std::size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    return parse(buf.str(), name, policy);
}

}  // namespace stocksent
