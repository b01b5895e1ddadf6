#pragma once

#include "raas/corpus/document.hpp"
#include "raas/text/analyzer.hpp"
#include "raas/text/index.hpp"

#include <string>
#include <vector>

namespace raas::text {

enum class KeyphraseField { Title, Abstract, TitleAbstract };
enum class GramSize { Uni = 1, Bi = 2, Tri = 3, Mixed = 4 };

struct Keyphrase {
    std::string phrase;  // stemmed grams joined by single spaces
    int gram_size = 1;
    KeyphraseField source_field = KeyphraseField::Title;
    double score = 0.0;  // tf in field * idf over gram document frequency

    /// The constituent stemmed grams.
    [[nodiscard]] std::vector<std::string> words() const;
};

/// Ranks stopword-free contiguous n-grams of the chosen field(s) by
/// tf * ln(1 + (N - df + 0.5) / (df + 0.5)), descending, ties by phrase.
/// N-grams never span the title/abstract boundary. A missing abstract
/// yields no candidates from that field.
std::vector<Keyphrase> extract_keyphrases(const DocumentRecord& doc, KeyphraseField field, GramSize gram_size,
                                          const Index& index, const Analyzer& analyzer);

}  // namespace raas::text
