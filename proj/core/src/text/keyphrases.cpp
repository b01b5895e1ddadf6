#include "raas/text/keyphrases.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace raas::text {

std::vector<std::string> Keyphrase::words() const
{
    std::vector<std::string> out;
    std::istringstream in(phrase);
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

namespace {

struct Candidate {
    int size = 0;
    std::uint32_t tf = 0;
    std::uint32_t df = 0;
};

void collect(const std::vector<RawToken>& tokens, int n, const Index& index, std::map<std::string, Candidate>& out)
{
    if (tokens.size() < static_cast<std::size_t>(n)) {
        return;
    }
    std::vector<TermId> ids;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
        bool ok = true;
        std::string phrase;
        ids.clear();
        bool known = true;
        for (int k = 0; k < n; ++k) {
            const auto& tok = tokens[i + static_cast<std::size_t>(k)];
            if (tok.is_stopword) {
                ok = false;
                break;
            }
            if (k > 0) {
                phrase.push_back(' ');
            }
            phrase += tok.term;
            if (auto id = index.term_id(tok.term)) {
                ids.push_back(*id);
            } else {
                known = false;
            }
        }
        if (!ok) {
            continue;
        }
        auto& c = out[phrase];
        c.size = n;
        ++c.tf;
        c.df = known ? index.gram_df(ids) : 0;
    }
}

}  // namespace

std::vector<Keyphrase> extract_keyphrases(const DocumentRecord& doc, KeyphraseField field, GramSize gram_size,
                                          const Index& index, const Analyzer& analyzer)
{
    std::vector<std::vector<RawToken>> fields;
    if (field == KeyphraseField::Title || field == KeyphraseField::TitleAbstract) {
        fields.push_back(analyzer.raw_tokens(doc.title, doc.language));
    }
    if ((field == KeyphraseField::Abstract || field == KeyphraseField::TitleAbstract) && doc.abstract) {
        fields.push_back(analyzer.raw_tokens(*doc.abstract, doc.language));
    }

    std::vector<int> sizes;
    if (gram_size == GramSize::Mixed) {
        sizes = {1, 2, 3};
    } else {
        sizes = {static_cast<int>(gram_size)};
    }

    std::map<std::string, Candidate> candidates;
    for (const auto& tokens : fields) {
        for (int n : sizes) {
            collect(tokens, n, index, candidates);
        }
    }

    std::vector<Keyphrase> out;
    out.reserve(candidates.size());
    for (auto& [phrase, c] : candidates) {
        double score = static_cast<double>(c.tf) * index.idf(c.df);
        out.push_back({phrase, c.size, field, score});
    }
    std::stable_sort(out.begin(), out.end(), [](const Keyphrase& a, const Keyphrase& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.phrase < b.phrase;
    });
    return out;
}

}  // namespace raas::text
