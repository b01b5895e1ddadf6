#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace raas::sim {

struct CorpusGenConfig {
    std::size_t corpus_size = 1000;  // at least 2
    std::uint64_t seed = 1;
    std::size_t vocabulary = 5000;
    double zipf_exponent = 1.07;
    /// One-word titles and no abstracts: most keyphrase recipes cannot apply.
    bool pathological = false;
};

struct GeneratedCorpus {
    std::vector<std::string> external_ids;
    /// (original, copy) external ids sharing clean title and year.
    std::vector<std::pair<std::string, std::string>> duplicate_pairs;
    std::size_t noise_author_docs = 0;
};

/// External id of the i-th generated record ("sim-000001", ...).
std::string sim_external_id(std::size_t i);

/// Writes corpus_size JSONL records. Titles and abstracts draw pseudo-words
/// from a Zipf distribution; max(1, n / 100) records copy an earlier
/// record's title (with case and punctuation changes) and year; 2% of the
/// records carry a noise author. Output is a pure function of the config.
/// Throws ValidationError when corpus_size < 2.
GeneratedCorpus generate_corpus(const CorpusGenConfig& config, std::ostream& out);

/// Readership stub lines {"external_id","readers"} with heavy-tailed counts.
void generate_readership_stub(const std::vector<std::string>& external_ids, std::uint64_t seed, std::ostream& out);

/// Stereotype list: `count` external ids, one per line.
void generate_stereotype_list(const std::vector<std::string>& external_ids, std::size_t count, std::uint64_t seed,
                              std::ostream& out);

}  // namespace raas::sim
