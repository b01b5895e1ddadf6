#include "raas/errors.hpp"
#include "raas/text/index.hpp"

#include <cstring>
#include <fstream>

namespace raas::text {

namespace {

constexpr char kMagic[8] = {'R', 'A', 'A', 'S', 'I', 'D', 'X', '\0'};
constexpr char kTrailer[8] = {'R', 'A', 'A', 'S', 'E', 'N', 'D', '\0'};

class Writer {
  public:
    explicit Writer(std::ofstream& out) : m_out(out) {}

    template <typename T>
    void pod(const T& v)
    {
        m_out.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }

    template <typename T>
    void vec(const std::vector<T>& v)
    {
        pod(static_cast<std::uint64_t>(v.size()));
        m_out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
    }

    void str(const std::string& s)
    {
        pod(static_cast<std::uint32_t>(s.size()));
        m_out.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

  private:
    std::ofstream& m_out;
};

class Reader {
  public:
    Reader(std::ifstream& in, std::string path) : m_in(in), m_path(std::move(path)) {}

    template <typename T>
    T pod()
    {
        T v{};
        m_in.read(reinterpret_cast<char*>(&v), sizeof(T));
        check();
        return v;
    }

    template <typename T>
    std::vector<T> vec()
    {
        auto n = pod<std::uint64_t>();
        std::vector<T> v(n);
        m_in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
        check();
        return v;
    }

    std::string str()
    {
        auto n = pod<std::uint32_t>();
        std::string s(n, '\0');
        m_in.read(s.data(), n);
        check();
        return s;
    }

  private:
    void check()
    {
        if (!m_in) {
            throw FormatError("truncated index file: " + m_path);
        }
    }

    std::ifstream& m_in;
    std::string m_path;
};

}  // namespace

struct IndexIo {
    static void save(const Index& idx, const std::filesystem::path& path)
    {
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error("cannot write index: " + tmp.string());
            }
            Writer w(out);
            out.write(kMagic, sizeof kMagic);
            w.pod(Index::kFormatVersion);
            w.pod(idx.m_version);
            w.pod(idx.m_params.k1);
            w.pod(idx.m_params.b);
            w.vec(idx.m_doc_ids);
            w.vec(idx.m_doc_len);
            w.pod(idx.m_avg_len);
            w.pod(static_cast<std::uint64_t>(idx.m_terms.size()));
            for (const auto& t : idx.m_terms) {
                w.str(t);
            }
            w.vec(idx.m_offsets);
            w.vec(idx.m_postings);
            w.vec(idx.m_bigrams.keys);
            w.vec(idx.m_bigrams.df);
            w.vec(idx.m_trigrams.keys);
            w.vec(idx.m_trigrams.df);
            out.write(kTrailer, sizeof kTrailer);
            if (!out) {
                throw Error("write failed for index: " + tmp.string());
            }
        }
        std::filesystem::rename(tmp, path);
    }

    static Index load(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error("cannot open index: " + path.string());
        }
        char magic[8];
        in.read(magic, sizeof magic);
        if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) {
            throw FormatError("not an index file: " + path.string());
        }
        Reader r(in, path.string());
        auto format = r.pod<std::uint32_t>();
        if (format != Index::kFormatVersion) {
            throw FormatError("index format version " + std::to_string(format) + " is not supported (expected "
                              + std::to_string(Index::kFormatVersion) + ")");
        }
        Index idx;
        idx.m_version = r.pod<std::uint64_t>();
        idx.m_params.k1 = r.pod<double>();
        idx.m_params.b = r.pod<double>();
        idx.m_doc_ids = r.vec<DocId>();
        idx.m_doc_len = r.vec<std::uint32_t>();
        idx.m_avg_len = r.pod<double>();
        auto n_terms = r.pod<std::uint64_t>();
        idx.m_terms.reserve(n_terms);
        for (std::uint64_t i = 0; i < n_terms; ++i) {
            idx.m_terms.push_back(r.str());
        }
        idx.m_offsets = r.vec<std::uint64_t>();
        idx.m_postings = r.vec<Posting>();
        idx.m_bigrams.keys = r.vec<GramTable<2>::Key>();
        idx.m_bigrams.df = r.vec<std::uint32_t>();
        idx.m_trigrams.keys = r.vec<GramTable<3>::Key>();
        idx.m_trigrams.df = r.vec<std::uint32_t>();
        char trailer[8];
        in.read(trailer, sizeof trailer);
        if (!in || std::memcmp(trailer, kTrailer, sizeof trailer) != 0) {
            throw FormatError("truncated index file: " + path.string());
        }
        if (idx.m_offsets.size() != idx.m_terms.size() + 1 || idx.m_doc_len.size() != idx.m_doc_ids.size()
            || idx.m_offsets.back() != idx.m_postings.size()) {
            throw FormatError("inconsistent index file: " + path.string());
        }
        idx.finalize();
        return idx;
    }
};

void Index::save(const std::filesystem::path& path) const { IndexIo::save(*this, path); }

Index Index::load(const std::filesystem::path& path) { return IndexIo::load(path); }

}  // namespace raas::text
