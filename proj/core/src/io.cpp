#include "fastrp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "fastrp/errors.hpp"

namespace fastrp {

namespace {

constexpr char kGraphMagic[4] = {'F', 'R', 'P', 'G'};
constexpr char kEmbeddingMagic[4] = {'F', 'R', 'P', 'E'};
constexpr std::uint8_t kFormatVersion = 1;

void store_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, 8);
}

void store_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf, 4);
}

std::uint64_t load_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

std::uint32_t load_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

void store_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    store_u32(out, bits);
}

float load_f32(std::istream& in) {
    const std::uint32_t bits = load_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

bool file_starts_with(const std::string& path, const char magic[4]) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    char buf[4] = {};
    in.read(buf, 4);
    return in.gcount() == 4 && std::memcmp(buf, magic, 4) == 0;
}

}  // namespace

LoadedEdgeList load_edge_list_file(const std::string& path, bool expect_header) {
    std::ifstream in = open_input(path);
    LoadedEdgeList out;
    std::size_t consumed = 0;
    if (expect_header) {
        std::string line;
        while (std::getline(in, line)) {
            ++consumed;
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#' || line[b] == '%') continue;
            std::istringstream hs(line);
            std::uint64_t n = 0, m = 0;
            std::string extra;
            if (!(hs >> n >> m) || (hs >> extra))
                throw ParseError("expected 'n m' header", consumed);
            if (n == 0 || n > std::numeric_limits<NodeId>::max())
                throw ParseError("header node count out of range", consumed);
            out.has_header = true;
            out.header_n = static_cast<NodeId>(n);
            out.header_m = m;
            break;
        }
        if (!out.has_header) throw ParseError("missing 'n m' header in " + path);
    }
    out.edges = parse_edge_list(in, consumed);
    return out;
}

void write_csr_binary(const CsrGraph& g, const std::string& path) {
    std::ofstream out = open_output(path, std::ios::binary);
    out.write(kGraphMagic, 4);
    out.put(static_cast<char>(kFormatVersion));
    store_u64(out, g.num_nodes());
    store_u64(out, g.num_edges());
    for (const std::uint64_t v : g.offsets()) store_u64(out, v);
    for (const NodeId v : g.targets()) store_u32(out, v);
    if (!out) throw IoError("failed writing " + path);
}

CsrGraph read_csr_binary(const std::string& path) {
    std::ifstream in = open_input(path, std::ios::binary);
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kGraphMagic, 4) != 0)
        throw ParseError("not a CSR cache file: " + path);
    const int version = in.get();
    if (version != kFormatVersion)
        throw ParseError("unsupported CSR cache version in " + path);
    const std::uint64_t n = load_u64(in);
    const std::uint64_t m = load_u64(in);
    if (!in || n == 0 || n > std::numeric_limits<NodeId>::max())
        throw ParseError("corrupt CSR cache header in " + path);
    std::vector<std::uint64_t> offsets(n + 1);
    for (auto& v : offsets) v = load_u64(in);
    std::vector<NodeId> targets(2 * m);
    for (auto& v : targets) v = load_u32(in);
    if (!in) throw ParseError("truncated CSR cache: " + path);
    try {
        return CsrGraph::from_csr_arrays(static_cast<NodeId>(n), m, std::move(offsets),
                                         std::move(targets));
    } catch (const std::invalid_argument& e) {
        throw ParseError("invalid CSR cache " + path + ": " + e.what());
    }
}

bool is_csr_binary(const std::string& path) { return file_starts_with(path, kGraphMagic); }

CsrGraph load_graph(const std::string& path, bool expect_header) {
    if (is_csr_binary(path)) return read_csr_binary(path);
    const LoadedEdgeList loaded = load_edge_list_file(path, expect_header);
    NodeId n = loaded.header_n;
    if (!loaded.has_header) {
        NodeId max_id = 0;
        for (const Edge& e : loaded.edges) max_id = std::max({max_id, e.u, e.v});
        if (loaded.edges.empty()) throw ParseError("edge list " + path + " is empty");
        n = max_id + 1;
    }
    return CsrGraph::from_edges(loaded.edges, n);
}

void write_embedding_text(const EmbeddingMatrix& emb, std::ostream& out) {
    out << emb.rows() << ' ' << emb.cols() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < emb.rows(); ++i) {
        out << i;
        for (const float v : emb.row(i)) {
            std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
            out << ' ' << buf;
        }
        out << '\n';
    }
}

void write_embedding_text(const EmbeddingMatrix& emb, const std::string& path) {
    std::ofstream out = open_output(path);
    write_embedding_text(emb, out);
    if (!out) throw IoError("failed writing " + path);
}

EmbeddingMatrix read_embedding_text(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty embedding file", 1);
    std::istringstream header(line);
    std::uint64_t n = 0, d = 0;
    if (!(header >> n >> d) || n == 0 || d == 0)
        throw ParseError("expected 'n d' header", 1);

    EmbeddingMatrix emb(n, d);
    std::vector<bool> seen(n, false);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const char* p = line.data() + b;
        const char* end = line.data() + line.size();
        std::uint64_t id = 0;
        auto [next, ec] = std::from_chars(p, end, id);
        if (ec != std::errc{} || id >= n) throw ParseError("invalid node id", lineno);
        if (seen[id]) throw ParseError("duplicate node id", lineno);
        seen[id] = true;
        p = next;
        auto row = emb.row(id);
        for (std::uint64_t c = 0; c < d; ++c) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            float v = 0.0f;
            auto [vnext, vec] = std::from_chars(p, end, v);
            if (vec != std::errc{}) throw ParseError("invalid value", lineno);
            row[c] = v;
            p = vnext;
        }
        while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
        if (p != end) throw ParseError("trailing tokens", lineno);
    }
    for (std::uint64_t i = 0; i < n; ++i)
        if (!seen[i])
            throw ParseError("missing row for node " + std::to_string(i));
    return emb;
}

void write_embedding_binary(const EmbeddingMatrix& emb, const std::string& path) {
    std::ofstream out = open_output(path, std::ios::binary);
    out.write(kEmbeddingMagic, 4);
    out.put(static_cast<char>(kFormatVersion));
    store_u64(out, emb.rows());
    store_u32(out, static_cast<std::uint32_t>(emb.cols()));
    for (const float v : emb.values()) store_f32(out, v);
    if (!out) throw IoError("failed writing " + path);
}

EmbeddingMatrix read_embedding_binary(const std::string& path) {
    std::ifstream in = open_input(path, std::ios::binary);
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kEmbeddingMagic, 4) != 0)
        throw ParseError("not a binary embedding file: " + path);
    const int version = in.get();
    if (version != kFormatVersion)
        throw ParseError("unsupported embedding format version in " + path);
    const std::uint64_t n = load_u64(in);
    const std::uint32_t d = load_u32(in);
    if (!in || n == 0 || d == 0) throw ParseError("corrupt embedding header in " + path);
    EmbeddingMatrix emb(n, d);
    for (float& v : emb.values()) v = load_f32(in);
    if (!in) throw ParseError("truncated embedding file: " + path);
    return emb;
}

EmbeddingMatrix read_embedding_file(const std::string& path) {
    if (file_starts_with(path, kEmbeddingMagic)) return read_embedding_binary(path);
    std::ifstream in = open_input(path);
    return read_embedding_text(in);
}

LabelSet read_labels_file(const std::string& path, NodeId n) {
    std::ifstream in = open_input(path);
    LabelSet set;
    set.n = n;
    set.labels.resize(n);
    std::string line;
    std::size_t lineno = 0;
    std::uint32_t max_class = 0;
    bool any = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#' || line[b] == '%') continue;
        std::istringstream ls(line);
        std::uint64_t node = 0;
        if (!(ls >> node)) throw ParseError("invalid node id", lineno);
        if (node >= n)
            throw ParseError("node id " + std::to_string(node) + " out of range", lineno);
        std::uint32_t cls = 0;
        std::vector<std::uint32_t>& out = set.labels[node];
        bool got = false;
        while (ls >> cls) {
            out.push_back(cls);
            max_class = std::max(max_class, cls);
            got = true;
            any = true;
        }
        if (!ls.eof()) throw ParseError("invalid class id", lineno);
        if (!got) throw ParseError("labeled node needs at least one class", lineno);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    set.num_classes = any ? max_class + 1 : 0;
    return set;
}

std::string file_digest(const std::string& path) {
    std::ifstream in = open_input(path, std::ios::binary);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

}  // namespace fastrp
