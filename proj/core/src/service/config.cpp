#include "raas/service/config.hpp"

#include "raas/errors.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace raas {

using json = nlohmann::json;

void ServiceConfig::validate() const
{
    randomizer.validate();
    if (cache_ttl.count() < 0) {
        throw ValidationError("cache_ttl_hours must be non-negative");
    }
    if (threads < 0) {
        throw ValidationError("threads must be non-negative");
    }
    if (provider_in_flight < 1) {
        throw ValidationError("provider_in_flight must be at least 1");
    }
}

ServiceConfig ServiceConfig::from_json_text(const std::string& text, const std::filesystem::path& base_dir)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ValidationError("config must be a JSON object");
    }

    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };

    ServiceConfig c;
    try {
        if (auto w = j.find("weights"); w != j.end()) {
            c.randomizer.weights.cbf = w->value("cbf", c.randomizer.weights.cbf);
            c.randomizer.weights.stereotype = w->value("stereotype", c.randomizer.weights.stereotype);
            c.randomizer.weights.most_popular = w->value("most_popular", c.randomizer.weights.most_popular);
            c.randomizer.weights.random = w->value("random", c.randomizer.weights.random);
        }
        c.randomizer.rerank_probability = j.value("rerank_probability", c.randomizer.rerank_probability);
        if (j.contains("stereotype_list")) {
            c.stereotype_list = resolve(j.at("stereotype_list").get<std::string>());
        }
        if (j.contains("readership_stub")) {
            c.readership_stub = resolve(j.at("readership_stub").get<std::string>());
        }
        if (j.contains("cache_ttl_hours")) {
            auto hours = j.at("cache_ttl_hours").get<double>();
            c.cache_ttl = std::chrono::milliseconds(static_cast<std::int64_t>(hours * 3600.0 * 1000.0));
        }
        if (j.contains("seed")) {
            c.seed = j.at("seed").get<std::uint64_t>();
        }
        c.threads = j.value("threads", c.threads);
        c.provider_in_flight = j.value("provider_in_flight", c.provider_in_flight);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad config value: ") + e.what());
    }
    c.validate();
    return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config: " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), path.parent_path());
}

}  // namespace raas
