#pragma once

#include "raas/corpus/cleaning.hpp"
#include "raas/corpus/document.hpp"

#include <atomic>
#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

namespace test_support {

inline raas::DocumentRecord make_doc(raas::DocId id, std::string title, std::optional<std::string> abstract = {},
                                     std::optional<int> year = {}, std::vector<std::string> authors = {})
{
    raas::DocumentRecord d;
    d.doc_id = id;
    d.external_id = "e" + std::to_string(id);
    d.title = std::move(title);
    d.clean_title = raas::clean_title(d.title);
    d.abstract = std::move(abstract);
    d.year = year;
    raas::NoiseList noise;
    for (const auto& a : authors) {
        d.authors.push_back(raas::normalize_author(a, noise));
    }
    d.language = "en";
    return d;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        m_path = std::filesystem::temp_directory_path()
                 / ("raas-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(m_path);
        std::filesystem::create_directories(m_path);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(m_path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return m_path; }

  private:
    std::filesystem::path m_path;
};

}  // namespace test_support
