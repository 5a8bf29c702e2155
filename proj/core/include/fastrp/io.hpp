#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "fastrp/eval.hpp"
#include "fastrp/graph.hpp"
#include "fastrp/matrix.hpp"

namespace fastrp {

struct LoadedEdgeList {
    EdgeList edges;
    bool has_header = false;
    NodeId header_n = 0;
    std::uint64_t header_m = 0;
};

/// Text edge list, optionally with a leading "n m" header line.
LoadedEdgeList load_edge_list_file(const std::string& path, bool expect_header);

/// Binary CSR cache: magic "FRPG", version byte, little-endian u64 n,
/// u64 m, u64 offsets[n+1], u32 targets[2m].
void write_csr_binary(const CsrGraph& g, const std::string& path);
CsrGraph read_csr_binary(const std::string& path);

/// True when the file starts with the binary CSR magic.
bool is_csr_binary(const std::string& path);

/// Loads a graph from either format (binary cache sniffed by magic).
/// expect_header applies to the text format only. When the text file
/// has no header, n is the maximum node id + 1.
CsrGraph load_graph(const std::string& path, bool expect_header = false);

/// Text embeddings: first line "n d", then one "node_id v1 ... v_d"
/// line per node at full float precision (%.9g round-trips exactly).
void write_embedding_text(const EmbeddingMatrix& emb, std::ostream& out);
void write_embedding_text(const EmbeddingMatrix& emb, const std::string& path);
EmbeddingMatrix read_embedding_text(std::istream& in);

/// Binary embeddings: magic "FRPE", version byte, little-endian u64 n,
/// u32 d, row-major float32 values.
void write_embedding_binary(const EmbeddingMatrix& emb, const std::string& path);
EmbeddingMatrix read_embedding_binary(const std::string& path);

/// Loads either format, sniffed by magic.
EmbeddingMatrix read_embedding_file(const std::string& path);

/// Label file: one "node_id class_id [class_id ...]" line per labeled
/// node; '#'/'%' comments allowed. Nodes not mentioned are unlabeled.
LabelSet read_labels_file(const std::string& path, NodeId n);

/// FNV-1a 64-bit digest of the file contents, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace fastrp
