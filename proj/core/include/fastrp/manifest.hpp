#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fastrp/engine.hpp"

namespace fastrp {

/// Full record of one embedding run: resolved configuration, input
/// digests and per-stage timings. Written next to every embedding
/// output; re-running from a manifest reproduces the output bit-exactly
/// because the resolved sparsity value is stored, not recomputed.
struct RunManifest {
    std::string command = "embed";
    std::string graph_path;
    std::string graph_digest;
    bool graph_header = false;
    std::uint64_t n = 0;
    std::uint64_t m = 0;

    std::uint32_t dim = 0;
    std::uint32_t max_power = 0;
    double beta = 0.0;
    std::vector<double> weights;
    double sparsity = 0.0;
    std::string projection_kind;  // "very-sparse" | "gaussian"
    std::uint64_t seed = 0;
    bool normalize_rows = false;
    unsigned threads = 0;

    std::string output_path;
    std::string output_format;  // "binary" | "text"
    std::string output_digest;

    struct NamedTiming {
        std::string stage;
        double wall_seconds = 0.0;
        double cpu_seconds = 0.0;
    };
    std::vector<NamedTiming> timings;

    FastRpConfig to_config() const;
    void set_config(const FastRpConfig& cfg);

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);

    void save(const std::string& path) const;
    static RunManifest load(const std::string& path);
};

std::string projection_kind_name(ProjectionKind kind);
ProjectionKind projection_kind_from_name(const std::string& name);

}  // namespace fastrp
