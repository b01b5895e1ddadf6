#include "raas/sim/corpus_generator.hpp"

#include "raas/errors.hpp"
#include "raas/rng.hpp"
#include "raas/text/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <unordered_set>

namespace raas::sim {

using json = nlohmann::json;

namespace {

constexpr const char* kConsonants = "bcdfgklmnprstvz";
constexpr const char* kVowels = "aeiou";
constexpr std::size_t kSyllables = 15 * 5;

const std::vector<std::string> kGivenInitials = {"A.", "B.", "C.", "D.", "E.", "F.", "G.", "H.", "J.", "K.", "L.", "M."};
const std::vector<std::string> kNoise = {"et al.", "Anonymous", "[Unknown]", "u.a.", "and others", "n.n."};

/// Pseudo-words of two to four consonant-vowel syllables, distinct by construction.
std::vector<std::string> make_vocabulary(std::size_t n)
{
    const text::StopwordList stop;
    std::vector<std::string> words;
    words.reserve(n);
    for (std::size_t code = kSyllables; words.size() < n; ++code) {
        std::string w;
        for (auto c = code; c > 0; c /= kSyllables) {
            auto s = c % kSyllables;
            w += kConsonants[s / 5];
            w += kVowels[s % 5];
        }
        if (!stop.contains(w)) {
            words.push_back(std::move(w));
        }
    }
    return words;
}

class Zipf {
  public:
    Zipf(std::size_t n, double s) : m_cdf(n)
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += 1.0 / std::pow(static_cast<double>(i + 1), s);
            m_cdf[i] = sum;
        }
        for (auto& c : m_cdf) {
            c /= sum;
        }
    }

    std::size_t operator()(Rng& rng) const
    {
        auto u = rng.uniform01();
        auto it = std::upper_bound(m_cdf.begin(), m_cdf.end(), u);
        return std::min(static_cast<std::size_t>(it - m_cdf.begin()), m_cdf.size() - 1);
    }

  private:
    std::vector<double> m_cdf;
};

std::string phrase(Rng& rng, const Zipf& zipf, const std::vector<std::string>& vocab, std::size_t words)
{
    std::string out;
    for (std::size_t i = 0; i < words; ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += vocab[zipf(rng)];
    }
    return out;
}

std::string capitalize(std::string s)
{
    if (!s.empty()) {
        s[0] = static_cast<char>(s[0] - 'a' + 'A');
    }
    return s;
}

/// Same clean title, different surface form.
std::string variant_title(const std::string& title, int year, Rng& rng)
{
    std::string out;
    for (char c : title) {
        out += (c >= 'a' && c <= 'z' && rng.below(4) == 0) ? static_cast<char>(c - 'a' + 'A') : c;
    }
    if (rng.below(3) == 0) {
        return out + " (" + std::to_string(year) + ")";
    }
    static const char* suffixes[] = {"?", "!", ".", " - 2", ":", " [*]"};
    return out + suffixes[rng.below(std::size(suffixes))];
}

/// 'x' never starts a vocabulary syllable, so these never meet a pseudo-word.
std::string serial_word(std::size_t i)
{
    std::string w = "x";
    for (int k = 0; k < 4; ++k, i /= kSyllables) {
        auto s = i % kSyllables;
        w += kConsonants[s / 5];
        w += kVowels[s % 5];
    }
    return w;
}

}  // namespace

std::string sim_external_id(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "sim-%06zu", i + 1);
    return buf;
}

GeneratedCorpus generate_corpus(const CorpusGenConfig& config, std::ostream& out)
{
    if (config.corpus_size < 2) {
        throw ValidationError("corpus_size must be at least 2");
    }
    const auto vocab = make_vocabulary(std::max<std::size_t>(config.vocabulary, 10));
    const Zipf zipf(vocab.size(), config.zipf_exponent);
    Rng rng(derive_seed(config.seed, 0xC0));

    const std::size_t n = config.corpus_size;
    const std::size_t dup_pairs = std::max<std::size_t>(1, n / 100);
    const std::size_t noise_docs = std::max<std::size_t>(1, n / 50);

    // The last dup_pairs records are copies of distinct earlier records.
    const std::size_t originals = n - dup_pairs;
    std::vector<std::size_t> copy_of;
    {
        std::unordered_set<std::size_t> used;
        while (copy_of.size() < dup_pairs) {
            auto j = static_cast<std::size_t>(rng.below(originals));
            if (used.insert(j).second) {
                copy_of.push_back(j);
            }
        }
    }
    std::unordered_set<std::size_t> noisy;
    while (noisy.size() < noise_docs) {
        noisy.insert(static_cast<std::size_t>(rng.below(n)));
    }

    GeneratedCorpus result;
    result.noise_author_docs = noise_docs;
    std::vector<std::string> titles;
    std::vector<int> years;
    titles.reserve(originals);
    years.reserve(originals);

    for (std::size_t i = 0; i < n; ++i) {
        json rec;
        const auto id = sim_external_id(i);
        rec["id"] = id;
        std::string title;
        int year = 0;
        if (i < originals) {
            title = config.pathological ? vocab[zipf(rng)] : capitalize(phrase(rng, zipf, vocab, 4 + rng.below(9)));
            // Append a serial word so independent titles never collide by chance.
            if (!config.pathological) {
                title += " " + serial_word(i);
            }
            year = static_cast<int>(rng.between(1990, 2016));
            titles.push_back(title);
            years.push_back(year);
        } else {
            auto orig = copy_of[i - originals];
            year = years[orig];
            title = variant_title(titles[orig], year, rng);
            result.duplicate_pairs.emplace_back(sim_external_id(orig), id);
        }
        rec["title"] = title;
        if (!config.pathological) {
            rec["abstract"] = capitalize(phrase(rng, zipf, vocab, 30 + rng.below(51))) + ".";
        }
        json authors = json::array();
        const auto n_authors = 1 + rng.below(4);
        for (std::uint64_t a = 0; a < n_authors; ++a) {
            authors.push_back(kGivenInitials[rng.below(kGivenInitials.size())] + " " + capitalize(vocab[zipf(rng)]));
        }
        if (noisy.contains(i)) {
            authors.push_back(kNoise[rng.below(kNoise.size())]);
        }
        rec["authors"] = std::move(authors);
        rec["year"] = year;
        rec["language"] = "en";
        out << rec.dump() << '\n';
        result.external_ids.push_back(id);
    }
    return result;
}

void generate_readership_stub(const std::vector<std::string>& external_ids, std::uint64_t seed, std::ostream& out)
{
    Rng rng(derive_seed(seed, 0xBEAD));
    for (const auto& id : external_ids) {
        // Pareto-like: most documents have few readers, a handful many.
        auto u = std::max(rng.uniform01(), 1e-12);
        auto readers = static_cast<std::uint64_t>(std::floor(std::pow(u, -0.8) - 1.0));
        out << json{{"external_id", id}, {"readers", std::min<std::uint64_t>(readers, 100000)}}.dump() << '\n';
    }
}

void generate_stereotype_list(const std::vector<std::string>& external_ids, std::size_t count, std::uint64_t seed,
                              std::ostream& out)
{
    std::vector<std::string> ids = external_ids;
    Rng rng(derive_seed(seed, 0x57E));
    rng.shuffle(ids.begin(), ids.end());
    ids.resize(std::min(count, ids.size()));
    out << "# curated list\n";
    for (const auto& id : ids) {
        out << id << '\n';
    }
}

}  // namespace raas::sim
