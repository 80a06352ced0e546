/// @file instances.hpp
/// @brief Benchmark-format ingestion, random instance generation and the
/// max-cut reduction.
///
/// Three text formats are supported:
///   sparse-min    "n m" then m triplets "i j v" (1-indexed). A diagonal
///                 triplet sets Q_ii; an off-diagonal one sets Q_ij = Q_ji = v
///                 (stored once per unordered pair, not halved). Lines
///                 starting with '#' are directives or comments; "# sense max"
///                 switches the instance to maximize.
///   orlib-max     A problem count P, then per problem "n nnz" and nnz
///                 triplets. Maximize by convention; canonicalized to
///                 minimize on parse.
///   graph-maxcut  "n m" then m edges "i j w"; reduced to UBQP through the
///                 graph Laplacian.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vpsdp/types.hpp"

namespace vpsdp {

struct WeightedGraph {
  struct Edge {
    int u, v;  // 1-based, u < v
    double w;
  };
  int n = 0;
  std::vector<Edge> edges;
  int merged_duplicates = 0;  ///< Repeated pairs are summed, and counted here.
};

enum class InstanceFormat { SparseMin, OrlibMax, GraphMaxcut };

/// Maps "sparse-min" / "orlib-max" / "graph-maxcut" to the enum.
/// @throws std::invalid_argument for an unknown tag.
InstanceFormat parse_format_tag(std::string_view tag);
std::string to_string(InstanceFormat format);

/// Parses the sparse-min format. With diag_to_linear, diagonal triplets fill
/// b_i instead of Q_ii (equivalent on binaries since x_i^2 = x_i).
/// @throws ParseError with the offending line number.
QuadraticInstance parse_sparse(std::string_view text,
                               bool diag_to_linear = false);

/// Parses an OR-Library style multi-problem file. Instances arrive maximize-
/// sense and are stored canonically negated; reports flip the sign back.
std::vector<QuadraticInstance> parse_orlib(std::string_view text);

/// Parses an edge list. Self-loops and out-of-range endpoints are errors;
/// duplicate pairs are summed.
WeightedGraph parse_graph(std::string_view text);

/// Laplacian reduction: with L = Diag(W 1) - W, the cut weight of the
/// bipartition indicated by y in {0,1}^n is y' L y. Returns the canonical
/// minimize instance Q = -L, b = 0 with native sense maximize, so the
/// reported objective is the cut value.
QuadraticInstance maxcut_to_ubqp(const WeightedGraph& g);

/// Random integer instance: diagonal uniform in diag_range, each off-diagonal
/// pair present with probability `density` and uniform in offdiag_range,
/// b = 0. Deterministic for a fixed seed.
QuadraticInstance gen_random(int n, std::uint64_t seed,
                             std::pair<int, int> diag_range = {-100, 100},
                             std::pair<int, int> offdiag_range = {-50, 50},
                             double density = 1.0);

/// Emits the sparse-min format (with a "# sense" directive); parsing the
/// result reproduces the instance exactly.
std::string serialize_sparse(const QuadraticInstance& inst);

/// Reads and parses a file; dispatch is total over the format tags. For
/// orlib-max files all contained problems are returned.
std::vector<QuadraticInstance> load_file(const std::string& path,
                                         InstanceFormat format,
                                         bool diag_to_linear = false);

}  // namespace vpsdp
