#include "contractcheck/corpus.hpp"

#include <cstdlib>

#include <json.hpp>

#include "contractcheck/errors.hpp"
#include "contractcheck/io.hpp"

#ifndef CONTRACTCHECK_CORPUS_DIR
#define CONTRACTCHECK_CORPUS_DIR "corpus"
#endif

namespace contractcheck {

namespace {

using nlohmann::json;

json read_manifest(const std::filesystem::path& dir) {
    const auto path = dir / "manifest.json";
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw Error("manifest '" + path.string() + "': " + e.what());
    }
}

bool is_reserved(const json& entry) { return entry.value("status", std::string("active")) == "reserved"; }

std::optional<std::size_t> opt_size(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return j.at(key).get<std::size_t>();
}

std::optional<Ratio> opt_ratio(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    const auto& pair = j.at(key);
    if (!pair.is_array() || pair.size() != 2) throw Error(std::string("manifest: '") + key + "' must be [num, den]");
    return Ratio{pair[0].get<std::size_t>(), pair[1].get<std::size_t>()};
}

}  // namespace

std::filesystem::path default_corpus_dir() {
    if (const char* env = std::getenv("CONTRACTCHECK_CORPUS_DIR"); env && *env) return env;
    return CONTRACTCHECK_CORPUS_DIR;
}

std::vector<std::string> list_fixtures(const std::filesystem::path& dir) {
    const auto manifest = read_manifest(dir);
    std::vector<std::string> names;
    for (const auto& entry : manifest.at("fixtures"))
        if (!is_reserved(entry)) names.push_back(entry.at("name").get<std::string>());
    return names;
}

std::vector<std::string> reserved_fixtures(const std::filesystem::path& dir) {
    const auto manifest = read_manifest(dir);
    std::vector<std::string> names;
    for (const auto& entry : manifest.at("fixtures"))
        if (is_reserved(entry)) names.push_back(entry.at("name").get<std::string>());
    return names;
}

Fixture load_fixture(const std::string& name, const std::filesystem::path& dir) {
    const auto manifest = read_manifest(dir);
    const json* found = nullptr;
    for (const auto& entry : manifest.at("fixtures"))
        if (entry.at("name").get<std::string>() == name) found = &entry;
    if (!found) throw UnknownFixture(name);
    const auto& entry = *found;
    if (is_reserved(entry)) throw UnknownFixture(name, "reserved slot, no data shipped");

    Fixture fx;
    fx.name = name;
    fx.provenance = entry.value("provenance", std::string());
    fx.description = entry.value("description", std::string());
    fx.net_path = dir / entry.at("net").get<std::string>();
    fx.net = load_net(fx.net_path);
    fx.lcp_auto = entry.value("lcp_auto", false);
    if (entry.contains("ground")) fx.ground = entry.at("ground").get<std::string>();
    if (entry.contains("align")) {
        fx.alignment_path = dir / entry.at("align").get<std::string>();
        fx.alignment = load_alignment(*fx.alignment_path);
    }
    if (entry.contains("expect")) {
        const auto& e = entry.at("expect");
        fx.expect.behaviors = opt_size(e, "behaviors");
        fx.expect.places = opt_size(e, "places");
        fx.expect.transitions = opt_size(e, "transitions");
        fx.expect.powers = opt_size(e, "powers");
        fx.expect.obligations = opt_size(e, "obligations");
        fx.expect.pruned = opt_size(e, "pruned");
        fx.expect.fitness = opt_ratio(e, "fitness");
        fx.expect.precision = opt_ratio(e, "precision");
        fx.expect.fes = opt_ratio(e, "fes");
        fx.expect.explodes_without_lcp = e.value("explodes_without_lcp", false);
    }

    auto diags = validate_net(fx.net);
    if (has_errors(diags)) throw ValidationFailed("fixture '" + name + "' has an invalid net", std::move(diags));
    return fx;
}

}  // namespace contractcheck
