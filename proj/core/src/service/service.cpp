#include "raas/service/service.hpp"

#include "raas/errors.hpp"
#include "raas/service/dedup.hpp"

#include <algorithm>
#include <random>

#ifndef RAAS_VERSION
#define RAAS_VERSION "0.0.0"
#endif

namespace raas {

const char* library_version() { return RAAS_VERSION; }

namespace {

std::uint64_t hex_word(std::string_view s)
{
    std::uint64_t v = 0;
    for (char c : s) {
        v = (v << 4U) | static_cast<std::uint64_t>(c <= '9' ? c - '0' : c - 'a' + 10);
    }
    return v;
}

bool same_documents(const text::Index& index, const CorpusSnapshot& corpus)
{
    if (index.doc_count() != corpus.size()) {
        return false;
    }
    const auto& docs = corpus.documents();
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (index.doc_id(static_cast<std::uint32_t>(i)) != docs[i].doc_id) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::optional<Service::Token> Service::parse_token(std::string_view s)
{
    if (!is_token(s)) {
        return std::nullopt;
    }
    return Token{hex_word(s.substr(0, 16)), hex_word(s.substr(16))};
}

Service::Service(ServiceOptions options)
    : m_config(std::move(options.config)),
      m_data_dir(std::move(options.data_dir)),
      m_clock(options.clock ? std::move(options.clock) : std::make_shared<SystemClock>()),
      m_started(m_clock->now()),
      m_store(m_data_dir),
      m_provider(std::move(options.provider)),
      m_master_seed(m_config.seed ? *m_config.seed : std::random_device{}()),
      m_ids(m_config.seed ? std::optional<std::uint64_t>(derive_seed(*m_config.seed, 0x1d5)) : std::nullopt)
{
    m_config.validate();
    if (!m_provider && m_config.readership_stub) {
        m_provider = std::make_shared<FileStubProvider>(*m_config.readership_stub);
    }
    m_cache = std::make_unique<ReadershipCache>(
        m_config.cache_ttl, m_data_dir.empty() ? std::filesystem::path{} : m_data_dir / ReadershipCache::kFileName,
        m_config.provider_in_flight);
    m_log = std::make_unique<EventLog>(m_data_dir.empty() ? std::filesystem::path{}
                                                          : m_data_dir / EventLog::kFileName);
    replay_log();
    m_engine = build_engine(m_store.snapshot(), 1, true);
}

Service::~Service() = default;

std::uint64_t Service::readership_of(const DocumentRecord& doc)
{
    if (!m_provider) {
        return 0;
    }
    try {
        return get_readership(*m_provider, doc, *m_cache, m_clock->now()).record.reader_count;
    } catch (const ProviderUnavailable&) {
        return 0;
    }
}

std::shared_ptr<const Engine> Service::build_engine(std::shared_ptr<const CorpusSnapshot> corpus,
                                                    std::uint64_t version, bool try_saved_index)
{
    auto engine = std::make_shared<Engine>();
    engine->corpus = corpus;
    engine->version = version;
    const auto index_path = m_data_dir.empty() ? std::filesystem::path{} : m_data_dir / text::Index::kFileName;

    if (try_saved_index && !index_path.empty() && std::filesystem::exists(index_path)) {
        try {
            auto saved = text::Index::load(index_path);
            if (same_documents(saved, *corpus)) {
                engine->version = saved.version();
                engine->index.emplace(std::move(saved));
            } else {
                engine->version = saved.version() + 1;
            }
        } catch (const FormatError&) {
            // Unreadable index: rebuild below.
        }
    }
    if (!engine->index && !corpus->empty()) {
        engine->index.emplace(text::Index::build(corpus->documents(), m_analyzer, {}, engine->version));
        if (!index_path.empty()) {
            engine->index->save(index_path);
        }
    }

    if (m_config.stereotype_list) {
        engine->stereotypes = StereotypeList::load(*m_config.stereotype_list, *corpus);
    }
    std::unordered_map<DocId, std::uint64_t> readers;
    if (m_provider) {
        readers.reserve(corpus->size());
        for (const auto& doc : corpus->documents()) {
            readers.emplace(doc.doc_id, readership_of(doc));
        }
    }
    engine->popularity = PopularityRanking(*corpus, readers);
    return engine;
}

void Service::replay_log()
{
    std::uint64_t sets = 0;
    std::uint64_t ids = 0;
    for_each_event(m_log->path(), [&](Event&& e) {
        if (const auto* s = std::get_if<RecommendationSet>(&e)) {
            index_set(*s);
            ++sets;
            ids += 1 + s->items.size();
        }
    });
    if (m_log->path().empty()) {
        return;
    }
    m_request_counter.store(sets);
    m_ids.resume(ids);
}

void Service::index_set(const RecommendationSet& set)
{
    auto set_token = parse_token(set.set_id);
    if (!set_token) {
        return;
    }
    std::unique_lock lock(m_index_mutex);
    m_sets.insert(*set_token);
    for (const auto& item : set.items) {
        if (auto t = parse_token(item.rec_id)) {
            m_recs[*t] = {*set_token, to_epoch_ms(set.delivered_at)};
        }
    }
}

std::shared_ptr<const Engine> Service::engine() const
{
    std::lock_guard lock(m_engine_mutex);
    return m_engine;
}

void Service::set_before_delivery(std::function<void(const RecommendationSet&)> hook)
{
    m_before_delivery = std::move(hook);
}

RecommendationSet Service::request_related(std::string_view external_id, std::optional<int> count,
                                           std::optional<std::string> user_token)
{
    const auto received = m_clock->now();
    const int n = count.value_or(kDefaultCount);
    if (n < kMinCount || n > kMaxCount) {
        throw ValidationError("count must be between 1 and 15, got " + std::to_string(n));
    }

    const auto engine = this->engine();
    const auto* source = engine->corpus->find_external(external_id);
    if (source == nullptr) {
        throw NotFoundError("unknown document: " + std::string(external_id));
    }

    Rng rng(derive_seed(m_master_seed, m_request_counter.fetch_add(1)));
    const auto recipe = sample_recipe(rng, m_config.randomizer);

    ExecutionContext ctx;
    ctx.corpus = engine->corpus.get();
    ctx.index = engine->index ? &*engine->index : nullptr;
    ctx.analyzer = &m_analyzer;
    ctx.stereotypes = engine->stereotypes ? &*engine->stereotypes : nullptr;
    ctx.popularity = &engine->popularity;
    ctx.readership = [this](const DocumentRecord& doc) { return readership_of(doc); };
    ctx.ref_year = utc_year(received);

    // Over-fetch so deduplication can still fill the requested count.
    auto result = execute_recipe(recipe, *source, ctx, static_cast<std::size_t>(2 * n));

    std::vector<DeliveredItem> items;
    items.reserve(result.list.items.size());
    for (const auto& c : result.list.items) {
        items.push_back({{}, c.doc_id, 0, c.relevance});
    }
    items = dedup_delivered_list(std::move(items), *source, *engine->corpus);
    if (items.size() > static_cast<std::size_t>(n)) {
        items.resize(static_cast<std::size_t>(n));
    }

    RecommendationSet set;
    set.set_id = m_ids.next();
    for (auto& item : items) {
        item.rec_id = m_ids.next();
    }
    set.source = source->doc_id;
    set.source_external_id = source->external_id;
    set.requested_count = n;
    set.items = std::move(items);
    set.user_token = std::move(user_token);
    set.received_at = received;
    set.sampled_fingerprint = std::move(result.sampled);
    set.executed_fingerprint = std::move(result.executed);
    set.fallback_used = result.fallback_used;

    if (m_before_delivery) {
        m_before_delivery(set);
    }
    set.delivered_at = std::max(m_clock->now(), received);
    set.processing_time_ms = to_epoch_ms(set.delivered_at) - to_epoch_ms(received);

    m_log->append(set);
    index_set(set);
    return set;
}

ClickEvent Service::record_click(std::string_view rec_id)
{
    auto token = parse_token(rec_id);
    RecInfo info{};
    {
        std::shared_lock lock(m_index_mutex);
        auto it = token ? m_recs.find(*token) : m_recs.end();
        if (it == m_recs.end()) {
            throw NotFoundError("unknown recommendation: " + std::string(rec_id));
        }
        info = it->second;
    }
    ClickEvent click;
    click.rec_id = std::string(rec_id);
    click.set_id = hex128(info.set_id[0], info.set_id[1]);
    click.clicked_at = m_clock->now();
    click.delay_ms = std::max<std::int64_t>(0, to_epoch_ms(click.clicked_at) - info.delivered_at_ms);
    m_log->append(click);
    return click;
}

RenderEvent Service::record_render(std::string_view set_id)
{
    auto token = parse_token(set_id);
    {
        std::shared_lock lock(m_index_mutex);
        if (!token || !m_sets.contains(*token)) {
            throw NotFoundError("unknown recommendation set: " + std::string(set_id));
        }
    }
    RenderEvent render{std::string(set_id), m_clock->now()};
    m_log->append(render);
    return render;
}

HealthStatus Service::health() const
{
    const auto engine = this->engine();
    HealthStatus h;
    h.version = library_version();
    h.corpus_size = engine->corpus->size();
    h.index_version = engine->index ? engine->index->version() : 0;
    h.uptime_seconds = static_cast<double>(to_epoch_ms(m_clock->now()) - to_epoch_ms(m_started)) / 1000.0;
    if (h.uptime_seconds < 0) {
        h.uptime_seconds = 0;
    }
    return h;
}

IngestReport Service::ingest(std::istream& input, ExportFormat format)
{
    std::unique_lock lock(m_ingest_mutex, std::try_to_lock);
    if (!lock.owns_lock()) {
        throw IngestInProgress();
    }
    auto report = m_store.ingest(input, format, m_clock->now());
    const auto previous = engine();
    auto next = build_engine(m_store.snapshot(), previous->version + 1, false);
    {
        std::lock_guard guard(m_engine_mutex);
        m_engine = std::move(next);
    }
    return report;
}

}  // namespace raas
