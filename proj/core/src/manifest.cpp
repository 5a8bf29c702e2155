#include "fastrp/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fastrp/errors.hpp"

namespace fastrp {

using nlohmann::json;

std::string projection_kind_name(ProjectionKind kind) {
    return kind == ProjectionKind::kVerySparse ? "very-sparse" : "gaussian";
}

ProjectionKind projection_kind_from_name(const std::string& name) {
    if (name == "very-sparse") return ProjectionKind::kVerySparse;
    if (name == "gaussian") return ProjectionKind::kGaussian;
    throw std::invalid_argument("unknown projection kind: " + name);
}

FastRpConfig RunManifest::to_config() const {
    FastRpConfig cfg;
    cfg.d = dim;
    cfg.k = max_power;
    cfg.beta = beta;
    cfg.weights = weights;
    cfg.s = sparsity;
    cfg.kind = projection_kind_from_name(projection_kind);
    cfg.seed = seed;
    cfg.l2_normalize_rows = normalize_rows;
    return cfg;
}

void RunManifest::set_config(const FastRpConfig& cfg) {
    dim = cfg.d;
    max_power = cfg.k;
    beta = cfg.beta;
    weights = cfg.weights;
    sparsity = cfg.s;
    projection_kind = projection_kind_name(cfg.kind);
    seed = cfg.seed;
    normalize_rows = cfg.l2_normalize_rows;
}

std::string RunManifest::to_json() const {
    json j;
    j["command"] = command;
    j["graph"] = {{"path", graph_path},
                  {"digest", graph_digest},
                  {"header", graph_header},
                  {"n", n},
                  {"m", m}};
    j["config"] = {{"dim", dim},
                   {"max_power", max_power},
                   {"beta", beta},
                   {"weights", weights},
                   {"sparsity", sparsity},
                   {"projection_kind", projection_kind},
                   {"seed", seed},
                   {"normalize_rows", normalize_rows},
                   {"threads", threads}};
    j["output"] = {{"path", output_path}, {"format", output_format}, {"digest", output_digest}};
    json stages = json::array();
    for (const NamedTiming& t : timings)
        stages.push_back({{"stage", t.stage},
                          {"wall_seconds", t.wall_seconds},
                          {"cpu_seconds", t.cpu_seconds}});
    j["timings"] = stages;
    return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid manifest JSON: ") + e.what());
    }
    try {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        const json& g = j.at("graph");
        m.graph_path = g.at("path").get<std::string>();
        m.graph_digest = g.at("digest").get<std::string>();
        m.graph_header = g.at("header").get<bool>();
        m.n = g.at("n").get<std::uint64_t>();
        m.m = g.at("m").get<std::uint64_t>();
        const json& c = j.at("config");
        m.dim = c.at("dim").get<std::uint32_t>();
        m.max_power = c.at("max_power").get<std::uint32_t>();
        m.beta = c.at("beta").get<double>();
        m.weights = c.at("weights").get<std::vector<double>>();
        m.sparsity = c.at("sparsity").get<double>();
        m.projection_kind = c.at("projection_kind").get<std::string>();
        m.seed = c.at("seed").get<std::uint64_t>();
        m.normalize_rows = c.at("normalize_rows").get<bool>();
        m.threads = c.at("threads").get<unsigned>();
        const json& o = j.at("output");
        m.output_path = o.at("path").get<std::string>();
        m.output_format = o.at("format").get<std::string>();
        m.output_digest = o.at("digest").get<std::string>();
        for (const json& t : j.at("timings"))
            m.timings.push_back({t.at("stage").get<std::string>(),
                                 t.at("wall_seconds").get<double>(),
                                 t.at("cpu_seconds").get<double>()});
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest missing fields: ") + e.what());
    }
}

void RunManifest::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << to_json() << '\n';
    if (!out) throw IoError("failed writing " + path);
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

}  // namespace fastrp
