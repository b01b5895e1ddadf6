#include "helpers.hpp"

#include "raas/analytics/reports.hpp"
#include "raas/errors.hpp"
#include "raas/service/config.hpp"
#include "raas/service/dedup.hpp"
#include "raas/service/ids.hpp"
#include "raas/service/service.hpp"

#include <catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>

using namespace raas;
using test_support::make_doc;
using test_support::TempDir;

namespace {

const UtcMillis kStart = from_epoch_ms(1'476'748'800'000);  // 2016-10-18

const char* kCorpus =
    R"({"id":"a","title":"Digital library search systems","abstract":"Search in digital libraries.","year":2010})"
    "\n"
    R"({"id":"b","title":"Digital library evaluation","year":2011})"
    "\n"
    R"({"id":"c","title":"Search engines for digital libraries","year":2012})"
    "\n"
    R"({"id":"d","title":"Library search usability","year":2013})"
    "\n"
    R"({"id":"e","title":"Digital Library Evaluation!","year":2011})"
    "\n";

std::unique_ptr<Service> make_service(const std::filesystem::path& dir, std::shared_ptr<ManualClock> clock,
                                      std::uint64_t seed = 1, bool ingest = true)
{
    ServiceOptions opt;
    opt.data_dir = dir;
    opt.config.seed = seed;
    opt.clock = std::move(clock);
    auto svc = std::make_unique<Service>(std::move(opt));
    if (ingest) {
        std::istringstream in(kCorpus);
        svc->ingest(in, ExportFormat::Jsonl);
    }
    return svc;
}

}  // namespace

TEST_CASE("ids are 128-bit lowercase hex and reproducible", "[service]")
{
    CHECK(hex128(0, 1) == "00000000000000000000000000000001");
    CHECK(is_token("0123456789abcdef0123456789abcdef"));
    CHECK_FALSE(is_token("0123456789ABCDEF0123456789abcdef"));
    CHECK_FALSE(is_token("abc"));
    IdGenerator a(5), b(5);
    std::set<std::string> seen;
    for (int i = 0; i < 1000; ++i) {
        auto x = a.next();
        CHECK(x == b.next());
        CHECK(is_token(x));
        seen.insert(x);
    }
    CHECK(seen.size() == 1000);
    IdGenerator c(5);
    c.resume(999);
    IdGenerator d(5);
    for (int i = 0; i < 999; ++i) {
        (void)d.next();
    }
    CHECK(c.next() == d.next());
}

TEST_CASE("config parsing and validation", "[service]")
{
    auto cfg = ServiceConfig::from_json_text(
        R"({"weights":{"cbf":0.5,"stereotype":0.25,"most_popular":0.25,"random":0},"rerank_probability":0.1,
            "stereotype_list":"s.txt","cache_ttl_hours":2,"seed":9,"threads":4})",
        "/etc/raas");
    CHECK(cfg.randomizer.weights.cbf == 0.5);
    CHECK(cfg.randomizer.rerank_probability == 0.1);
    CHECK(cfg.stereotype_list == std::filesystem::path("/etc/raas/s.txt"));
    CHECK(cfg.cache_ttl == std::chrono::hours(2));
    CHECK(cfg.seed == 9U);
    CHECK(cfg.threads == 4);
    CHECK_THROWS_AS(ServiceConfig::from_json_text(R"({"weights":{"cbf":0.5}})"), ValidationError);
    CHECK_THROWS_AS(ServiceConfig::from_json_text("{bad"), Error);
}

TEST_CASE("dedup drops source duplicates and repeated keys", "[service]")
{
    CorpusSnapshot corpus(
        {
            make_doc(1, "Education digital libraries management", {}, 2008),
            make_doc(2, "Education Digital Libraries Management (2008)", {}, 2008),
            make_doc(3, "Visual search interfaces", {}, 2014),
            make_doc(4, "Visual Search Interfaces?", {}, 2014),
            make_doc(5, "Visual search interfaces", {}, 2013),
            make_doc(6, "Other", {}, 2014),
        },
        7);
    std::vector<DeliveredItem> items = {
        {"", 2, 1, 5.0}, {"", 3, 2, 4.0}, {"", 4, 3, 3.0}, {"", 5, 4, 2.0}, {"", 42, 5, 1.5}, {"", 6, 6, 1.0}};
    auto out = dedup_delivered_list(items, *corpus.find(1), corpus);
    REQUIRE(out.size() == 3);
    CHECK(out[0].doc_id == 3);
    CHECK(out[1].doc_id == 5);
    CHECK(out[2].doc_id == 6);
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].rank == static_cast<int>(i + 1));
    }
}

TEST_CASE("request validation", "[service]")
{
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(kStart);
    auto svc = make_service(dir.path(), clock);
    CHECK_THROWS_AS(svc->request_related("a", 20), ValidationError);
    CHECK_THROWS_AS(svc->request_related("a", 0), ValidationError);
    CHECK_THROWS_AS(svc->request_related("missing"), NotFoundError);
    // Count is checked before the document lookup.
    CHECK_THROWS_AS(svc->request_related("missing", 16), ValidationError);
    CHECK_THROWS_AS(svc->record_click("0123456789abcdef0123456789abcdef"), NotFoundError);
    CHECK_THROWS_AS(svc->record_click("bogus"), NotFoundError);
    CHECK_THROWS_AS(svc->record_render("bogus"), NotFoundError);
}

TEST_CASE("delivered sets respect count, exclude duplicates and are logged", "[service]")
{
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(kStart);
    auto svc = make_service(dir.path(), clock);
    for (int i = 0; i < 200; ++i) {
        auto set = svc->request_related("b", 3, std::string("u1"));
        CHECK(set.items.size() <= 3);
        CHECK(set.requested_count == 3);
        CHECK(is_token(set.set_id));
        CHECK(set.source_external_id == "b");
        std::set<DocId> docs;
        for (const auto& item : set.items) {
            CHECK(item.doc_id != set.source);
            CHECK(item.doc_id != 5);  // same clean title and year as the source
            CHECK(docs.insert(item.doc_id).second);
            CHECK(is_token(item.rec_id));
        }
        CHECK(set.delivered_at >= set.received_at);
        CHECK(set.processing_time_ms == 0);
        CHECK_FALSE(set.sampled_fingerprint.empty());
    }
    auto snap = svc->log_snapshot();
    CHECK(snap.sets.size() == 200);
    CHECK(snap.sets[0].user_token == std::optional<std::string>("u1"));
}

TEST_CASE("click delay and distinct-click CTR", "[service]")
{
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(kStart);
    auto svc = make_service(dir.path(), clock);
    RecommendationSet set;
    do {
        set = svc->request_related("a", 5);
    } while (set.items.empty());
    clock->advance(std::chrono::milliseconds(90'000));
    auto click = svc->record_click(set.items[0].rec_id);
    CHECK(click.delay_ms == 90'000);
    CHECK(click.set_id == set.set_id);
    clock->advance(std::chrono::seconds(1));
    CHECK(svc->record_click(set.items[0].rec_id).delay_ms == 91'000);
    auto render = svc->record_render(set.set_id);
    CHECK(render.rendered_at == clock->now());

    auto snap = svc->log_snapshot();
    CHECK(snap.clicks.size() == 2);
    auto report = analytics::ctr_report(snap, analytics::Dimension::Algorithm);
    CHECK(report.total_clicks() == 1);
    CHECK(report.total_impressions() == set.items.size());
}

TEST_CASE("processing time spans the delivery hook", "[service]")
{
    auto clock = std::make_shared<ManualClock>(kStart);
    ServiceOptions opt;
    opt.config.seed = 3;
    opt.clock = clock;
    Service svc(std::move(opt));
    std::istringstream in(kCorpus);
    svc.ingest(in, ExportFormat::Jsonl);
    svc.set_before_delivery([&](const RecommendationSet&) { clock->advance(std::chrono::milliseconds(1500)); });
    auto set = svc.request_related("a");
    CHECK(set.processing_time_ms == 1500);
    CHECK(to_epoch_ms(set.delivered_at) - to_epoch_ms(set.received_at) == 1500);
}

TEST_CASE("health reports corpus and index state", "[service]")
{
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(kStart);
    auto svc = make_service(dir.path(), clock, 1, false);
    CHECK(svc->health().corpus_size == 0);
    std::istringstream in(kCorpus);
    auto report = svc->ingest(in, ExportFormat::Jsonl);
    CHECK(report.records_accepted == 5);
    CHECK(report.duplicate_groups == 1);
    clock->advance(std::chrono::seconds(3));
    auto h = svc->health();
    CHECK(h.status == "ok");
    CHECK(h.corpus_size == 5);
    CHECK(h.index_version >= 1);
    CHECK(h.uptime_seconds == Catch::Approx(3.0));
    CHECK(h.version == library_version());
}

TEST_CASE("state survives a restart", "[service]")
{
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(kStart);
    std::vector<RecommendationSet> before;
    std::uint64_t index_version = 0;
    {
        auto svc = make_service(dir.path(), clock, 11);
        for (int i = 0; i < 20; ++i) {
            before.push_back(svc->request_related("a", 4, std::string("u")));
        }
        index_version = svc->health().index_version;
    }
    auto svc = make_service(dir.path(), clock, 11, false);
    CHECK(svc->health().corpus_size == 5);
    CHECK(svc->health().index_version == index_version);
    auto snap = svc->log_snapshot();
    REQUIRE(snap.sets.size() == 20);
    CHECK(snap.sets == before);

    // Old ids stay clickable and new ids do not collide with them.
    const auto& old = *std::find_if(before.begin(), before.end(), [](const auto& s) { return !s.items.empty(); });
    CHECK_NOTHROW(svc->record_click(old.items[0].rec_id));
    std::set<std::string> ids;
    for (const auto& s : before) {
        ids.insert(s.set_id);
    }
    auto next = svc->request_related("a", 4);
    CHECK_FALSE(ids.contains(next.set_id));
}

TEST_CASE("a torn final log line is ignored on restart", "[service]")
{
    TempDir dir;
    auto clock = std::make_shared<ManualClock>(kStart);
    {
        auto svc = make_service(dir.path(), clock, 4);
        (void)svc->request_related("a");
        (void)svc->request_related("b");
    }
    {
        std::ofstream out(dir.path() / EventLog::kFileName, std::ios::app);
        out << R"({"type":"set","set_id":"00)";
    }
    auto svc = make_service(dir.path(), clock, 4, false);
    CHECK(svc->log_snapshot().sets.size() == 2);
    (void)svc->request_related("c");
    svc->event_log().sync();
    auto snap = read_log(dir.path() / EventLog::kFileName);
    CHECK(snap.sets.size() == 3);
}

TEST_CASE("event encoding round-trips and rejects garbage", "[service]")
{
    RecommendationSet set;
    set.set_id = hex128(1, 2);
    set.source = 3;
    set.source_external_id = "x";
    set.requested_count = 2;
    set.items = {{hex128(3, 4), 9, 1, 1.25}};
    set.user_token = "u";
    set.received_at = kStart;
    set.delivered_at = kStart + std::chrono::milliseconds(7);
    set.processing_time_ms = 7;
    set.sampled_fingerprint = "stereotype";
    set.executed_fingerprint = "cbf|terms";
    set.fallback_used = true;
    CHECK(std::get<RecommendationSet>(decode_event(encode_event(set))) == set);
    ClickEvent click{hex128(3, 4), hex128(1, 2), kStart, 12};
    CHECK(std::get<ClickEvent>(decode_event(encode_event(click))) == click);
    RenderEvent render{hex128(1, 2), kStart};
    CHECK(std::get<RenderEvent>(decode_event(encode_event(render))) == render);
    CHECK_THROWS_AS(decode_event("{}"), FormatError);
    CHECK_THROWS_AS(decode_event("nope"), FormatError);
}

TEST_CASE("ingest while another ingest runs is refused", "[service]")
{
    auto clock = std::make_shared<ManualClock>(kStart);
    ServiceOptions opt;
    opt.config.seed = 1;
    opt.clock = clock;
    Service svc(std::move(opt));

    // A stream that blocks until released keeps the first ingest busy.
    struct GateBuf : std::streambuf {
        std::mutex m;
        std::condition_variable cv;
        bool open = false;
        bool entered = false;
        std::string data = R"({"id":"z","title":"Zed"})"
                           "\n";
        bool served = false;
        int_type underflow() override
        {
            std::unique_lock lock(m);
            entered = true;
            cv.notify_all();
            cv.wait(lock, [&] { return open; });
            if (served) {
                return traits_type::eof();
            }
            served = true;
            setg(data.data(), data.data(), data.data() + data.size());
            return traits_type::to_int_type(data[0]);
        }
    } gate;
    std::istream slow(&gate);
    std::thread first([&] { svc.ingest(slow, ExportFormat::Jsonl); });
    {
        std::unique_lock lock(gate.m);
        gate.cv.wait(lock, [&] { return gate.entered; });
    }
    std::istringstream other(kCorpus);
    CHECK_THROWS_AS(svc.ingest(other, ExportFormat::Jsonl), IngestInProgress);
    {
        std::lock_guard lock(gate.m);
        gate.open = true;
    }
    gate.cv.notify_all();
    first.join();
    CHECK(svc.health().corpus_size == 1);
}
