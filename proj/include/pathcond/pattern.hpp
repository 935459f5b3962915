#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pathcond/errors.hpp"

namespace pathcond {

enum class EdgeDir : std::uint8_t { Forward, Backward };
enum class EdgeStyle : std::uint8_t { Solid, Dashed };

struct PathEdge {
    EdgeDir dir;
    EdgeStyle style;

    bool operator==(const PathEdge&) const = default;
};

/// An oriented path of solid/dashed edges between vertices 0..n; vertex 0 is
/// initial, vertex n terminal. Edge i joins vertices i-1 and i, pointing
/// right when forward.
struct PatternPath {
    std::vector<PathEdge> edges;

    int length() const noexcept { return static_cast<int>(edges.size()); }
    int solid_count() const noexcept {
        int k = 0;
        for (const auto& e : edges)
            if (e.style == EdgeStyle::Solid) ++k;
        return k;
    }

    bool operator==(const PatternPath&) const = default;

    std::string to_dsl() const {
        std::string out;
        for (const auto& e : edges) {
            if (!out.empty()) out += ' ';
            out += (e.dir == EdgeDir::Forward) ? 'F' : 'B';
            out += (e.style == EdgeStyle::Solid) ? 's' : 'd';
        }
        return out;
    }
};

/// Token DSL: whitespace-separated Fs | Fd | Bs | Bd.
inline PatternPath parse_path(const std::string& dsl) {
    PatternPath p;
    std::istringstream in(dsl);
    std::string tok;
    while (in >> tok) {
        if (tok.size() != 2 || (tok[0] != 'F' && tok[0] != 'B') || (tok[1] != 's' && tok[1] != 'd'))
            fail(ErrorKind::BadToken, "bad path token '" + tok + "' (want Fs, Fd, Bs or Bd)");
        p.edges.push_back({tok[0] == 'F' ? EdgeDir::Forward : EdgeDir::Backward,
                           tok[1] == 's' ? EdgeStyle::Solid : EdgeStyle::Dashed});
    }
    if (p.edges.empty()) fail(ErrorKind::EmptyPath, "a pattern path needs at least one edge");
    return p;
}

/// A forward dashed edge makes the associated condition hold in every
/// algebra (projections witness it), so deciders short-circuit on it.
inline bool is_trivial(const PatternPath& p) {
    for (const auto& e : p.edges)
        if (e.dir == EdgeDir::Forward && e.style == EdgeStyle::Dashed) return true;
    return false;
}

namespace gallery_names {
inline constexpr const char* maltsev = "maltsev";
inline constexpr const char* majority = "majority";
inline constexpr const char* jonsson = "jonsson";
inline constexpr const char* dir_jonsson = "dir-jonsson";
inline constexpr const char* gumm = "gumm";
inline constexpr const char* dir_gumm = "dir-gumm";
inline constexpr const char* hm = "hm";
} // namespace gallery_names

/// Named condition paths:
///   maltsev        = Bd
///   majority       = Fs
///   jonsson(n)     = alternating solid fence starting forward
///   dir-jonsson(n) = n forward solid edges
///   gumm(n)        = jonsson(n) fence followed by Bd
///   dir-gumm(n)    = n forward solid edges followed by Bd
///   hm(n)          = n backward dashed edges
inline PatternPath gallery(const std::string& name, std::optional<int> n = std::nullopt) {
    auto need_n = [&]() -> int {
        if (!n) fail(ErrorKind::BadSize, "condition '" + name + "' needs a size, e.g. " + name + ":2");
        if (*n < 1) fail(ErrorKind::BadSize, "condition size must be >= 1");
        return *n;
    };
    auto no_n = [&] {
        if (n) fail(ErrorKind::BadSize, "condition '" + name + "' does not take a size");
    };
    PatternPath p;
    if (name == gallery_names::maltsev) {
        no_n();
        p.edges.push_back({EdgeDir::Backward, EdgeStyle::Dashed});
    } else if (name == gallery_names::majority) {
        no_n();
        p.edges.push_back({EdgeDir::Forward, EdgeStyle::Solid});
    } else if (name == gallery_names::jonsson) {
        int k = need_n();
        for (int i = 0; i < k; ++i)
            p.edges.push_back({i % 2 == 0 ? EdgeDir::Forward : EdgeDir::Backward, EdgeStyle::Solid});
    } else if (name == gallery_names::dir_jonsson) {
        int k = need_n();
        for (int i = 0; i < k; ++i) p.edges.push_back({EdgeDir::Forward, EdgeStyle::Solid});
    } else if (name == gallery_names::gumm) {
        int k = need_n();
        for (int i = 0; i < k; ++i)
            p.edges.push_back({i % 2 == 0 ? EdgeDir::Forward : EdgeDir::Backward, EdgeStyle::Solid});
        p.edges.push_back({EdgeDir::Backward, EdgeStyle::Dashed});
    } else if (name == gallery_names::dir_gumm) {
        int k = need_n();
        for (int i = 0; i < k; ++i) p.edges.push_back({EdgeDir::Forward, EdgeStyle::Solid});
        p.edges.push_back({EdgeDir::Backward, EdgeStyle::Dashed});
    } else if (name == gallery_names::hm) {
        int k = need_n();
        for (int i = 0; i < k; ++i) p.edges.push_back({EdgeDir::Backward, EdgeStyle::Dashed});
    } else {
        fail(ErrorKind::UnknownName, "unknown condition name '" + name + "'");
    }
    return p;
}

/// Condition spec grammar: <name> | <name>:<n> | path:<DSL>.
struct ConditionSpec {
    PatternPath path;
    std::string display;
};

inline ConditionSpec parse_condition_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon != std::string::npos && spec.substr(0, colon) == "path") {
        PatternPath p = parse_path(spec.substr(colon + 1));
        return {p, "path:" + p.to_dsl()};
    }
    if (colon != std::string::npos) {
        std::string name = spec.substr(0, colon);
        std::string num = spec.substr(colon + 1);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            fail(ErrorKind::BadSize, "bad condition size '" + num + "'");
        long n = std::stol(num);
        if (n < 1 || n > 1000000) fail(ErrorKind::BadSize, "condition size out of range");
        return {gallery(name, static_cast<int>(n)), name + ":" + num};
    }
    return {gallery(spec), spec};
}

/// A digraph with solid/dashed edges and distinguished initial/terminal
/// vertices. Parallel edges collapse to the strongest style per ordered
/// pair (solid beats dashed), which is all any search here can observe.
class PatternDigraph {
public:
    using Vertex = std::uint32_t;

    PatternDigraph(std::size_t vertex_count, Vertex initial, Vertex terminal)
        : vertex_count_(vertex_count), initial_(initial), terminal_(terminal) {
        if (initial >= vertex_count || terminal >= vertex_count)
            fail(ErrorKind::ElementOutOfRange, "initial/terminal vertex out of range");
    }

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    Vertex initial() const noexcept { return initial_; }
    Vertex terminal() const noexcept { return terminal_; }

    void add_edge(Vertex from, Vertex to, EdgeStyle style) {
        if (from >= vertex_count_ || to >= vertex_count_)
            fail(ErrorKind::ElementOutOfRange, "edge endpoint out of range");
        auto [it, inserted] = edges_.emplace(std::make_pair(from, to), style);
        if (!inserted && style == EdgeStyle::Solid) it->second = EdgeStyle::Solid;
    }

    bool has_edge(Vertex from, Vertex to) const { return edges_.count({from, to}) != 0; }
    bool has_solid_edge(Vertex from, Vertex to) const {
        auto it = edges_.find({from, to});
        return it != edges_.end() && it->second == EdgeStyle::Solid;
    }

    const std::map<std::pair<Vertex, Vertex>, EdgeStyle>& edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Graphviz form; solid/dashed edge styles, doublecircle endpoints.
    std::string to_dot(const std::vector<std::string>& labels = {}) const {
        std::ostringstream out;
        out << "digraph pattern {\n";
        for (Vertex v = 0; v < vertex_count_; ++v) {
            out << "  v" << v;
            std::string label = v < labels.size() ? labels[v] : std::to_string(v);
            out << " [label=\"" << label << "\"";
            if (v == initial_ || v == terminal_) out << ", shape=doublecircle";
            out << "];\n";
        }
        for (const auto& [pair, style] : edges_) {
            out << "  v" << pair.first << " -> v" << pair.second;
            if (style == EdgeStyle::Dashed) out << " [style=dashed]";
            out << ";\n";
        }
        out << "}\n";
        return out.str();
    }

private:
    std::size_t vertex_count_;
    Vertex initial_;
    Vertex terminal_;
    std::map<std::pair<Vertex, Vertex>, EdgeStyle> edges_;
};

/// The two-vertex digraph recording the generators of K(A): solid loops at
/// both endpoints and one dashed edge from initial to terminal.
inline PatternDigraph j_digraph() {
    PatternDigraph j(2, 0, 1);
    j.add_edge(0, 0, EdgeStyle::Solid);
    j.add_edge(1, 1, EdgeStyle::Solid);
    j.add_edge(0, 1, EdgeStyle::Dashed);
    return j;
}

/// A pattern path viewed as a pattern digraph on vertices 0..n.
inline PatternDigraph path_digraph(const PatternPath& p) {
    PatternDigraph g(static_cast<std::size_t>(p.length()) + 1, 0,
                     static_cast<PatternDigraph::Vertex>(p.length()));
    for (int i = 0; i < p.length(); ++i) {
        auto u = static_cast<PatternDigraph::Vertex>(i);
        auto v = static_cast<PatternDigraph::Vertex>(i + 1);
        if (p.edges[static_cast<std::size_t>(i)].dir == EdgeDir::Forward)
            g.add_edge(u, v, p.edges[static_cast<std::size_t>(i)].style);
        else
            g.add_edge(v, u, p.edges[static_cast<std::size_t>(i)].style);
    }
    return g;
}

/// Product digraph: vertices V(g) x V(h); an edge between component-wise
/// edges, solid exactly when both components are solid. Vertex (u,v) is
/// coded u * |V(h)| + v.
inline PatternDigraph product(const PatternDigraph& g, const PatternDigraph& h) {
    auto code = [&](PatternDigraph::Vertex u, PatternDigraph::Vertex v) {
        return static_cast<PatternDigraph::Vertex>(u * h.vertex_count() + v);
    };
    PatternDigraph prod(g.vertex_count() * h.vertex_count(),
                        code(g.initial(), h.initial()), code(g.terminal(), h.terminal()));
    for (const auto& [ge, gstyle] : g.edges())
        for (const auto& [he, hstyle] : h.edges()) {
            EdgeStyle style = (gstyle == EdgeStyle::Solid && hstyle == EdgeStyle::Solid)
                                  ? EdgeStyle::Solid
                                  : EdgeStyle::Dashed;
            prod.add_edge(code(ge.first, he.first), code(ge.second, he.second), style);
        }
    return prod;
}

/// A digraph whose vertices are partitioned into layers 0..n with edges only
/// between consecutive layers, oriented to match a pattern path. Gap i holds
/// the edges between layers i-1 and i; `from` indexes the source layer of
/// the oriented edge (layer i-1 for forward path edges, layer i for
/// backward ones).
struct LayeredDigraph {
    struct Edge {
        std::uint32_t from;
        std::uint32_t to;
        EdgeStyle style;
    };

    std::vector<std::size_t> layer_sizes;       // n+1 entries
    std::vector<std::vector<Edge>> gap_edges;   // n entries
    std::uint32_t initial = 0;                  // index in layer 0
    std::uint32_t terminal = 0;                 // index in layer n
};

/// Views a general pattern digraph as layered, given the vertex partition.
/// Every vertex must appear in exactly one layer, the initial/terminal
/// vertices in layers 0/n, and every edge must join consecutive layers in
/// the orientation prescribed by the path; otherwise NotLayered.
inline LayeredDigraph layer_digraph(const PatternDigraph& g,
                                    const std::vector<std::vector<PatternDigraph::Vertex>>& layers,
                                    const PatternPath& p) {
    const int n = p.length();
    if (static_cast<int>(layers.size()) != n + 1)
        fail(ErrorKind::NotLayered, "expected " + std::to_string(n + 1) + " layers");
    std::vector<std::pair<int, std::uint32_t>> where(g.vertex_count(), {-1, 0});
    LayeredDigraph out;
    out.layer_sizes.resize(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        out.layer_sizes[i] = layers[i].size();
        for (std::size_t j = 0; j < layers[i].size(); ++j) {
            PatternDigraph::Vertex v = layers[i][j];
            if (v >= g.vertex_count() || where[v].first >= 0)
                fail(ErrorKind::NotLayered, "vertex missing from or repeated in the partition");
            where[v] = {static_cast<int>(i), static_cast<std::uint32_t>(j)};
        }
    }
    for (PatternDigraph::Vertex v = 0; v < g.vertex_count(); ++v)
        if (where[v].first < 0) fail(ErrorKind::NotLayered, "vertex not assigned to any layer");
    if (where[g.initial()].first != 0 || where[g.terminal()].first != n)
        fail(ErrorKind::NotLayered, "initial/terminal vertex not in its boundary layer");
    out.initial = where[g.initial()].second;
    out.terminal = where[g.terminal()].second;
    out.gap_edges.resize(static_cast<std::size_t>(n));
    for (const auto& [pair, style] : g.edges()) {
        auto [fl, fi] = where[pair.first];
        auto [tl, ti] = where[pair.second];
        int gap;
        if (tl == fl + 1)
            gap = tl;  // edge oriented rightward: path edge must be forward
        else if (fl == tl + 1)
            gap = fl;  // leftward: path edge must be backward
        else
            fail(ErrorKind::NotLayered, "edge does not join consecutive layers");
        EdgeDir dir = (tl == fl + 1) ? EdgeDir::Forward : EdgeDir::Backward;
        if (p.edges[static_cast<std::size_t>(gap - 1)].dir != dir)
            fail(ErrorKind::NotLayered, "edge orientation disagrees with the path");
        out.gap_edges[static_cast<std::size_t>(gap - 1)].push_back({fi, ti, style});
    }
    return out;
}

/// Walk positions: one vertex index per layer.
using Walk = std::vector<std::uint32_t>;

/// Layered reachability sweep. A solid path edge must ride a solid digraph
/// edge; a dashed path edge rides any edge. Returns the vertex images
/// w_0..w_n or nullopt. Walks need not be injective.
inline std::optional<Walk> find_walk(const PatternPath& p, const LayeredDigraph& g) {
    const int n = p.length();
    if (static_cast<int>(g.layer_sizes.size()) != n + 1 ||
        static_cast<int>(g.gap_edges.size()) != n)
        fail(ErrorKind::NotLayered, "layer/gap counts do not match the path");
    if (g.initial >= g.layer_sizes[0] || g.terminal >= g.layer_sizes[static_cast<std::size_t>(n)])
        fail(ErrorKind::NotLayered, "initial/terminal vertex outside its layer");

    // reach[i][v]: predecessor choice at layer i-1, or -1 if unreachable.
    std::vector<std::vector<std::int64_t>> pred(static_cast<std::size_t>(n) + 1);
    pred[0].assign(g.layer_sizes[0], -1);
    pred[0][g.initial] = static_cast<std::int64_t>(g.initial);
    for (int i = 1; i <= n; ++i) {
        const auto& edge_list = g.gap_edges[static_cast<std::size_t>(i - 1)];
        const PathEdge pe = p.edges[static_cast<std::size_t>(i - 1)];
        pred[static_cast<std::size_t>(i)].assign(g.layer_sizes[static_cast<std::size_t>(i)], -1);
        for (const auto& e : edge_list) {
            if (pe.style == EdgeStyle::Solid && e.style != EdgeStyle::Solid) continue;
            std::uint32_t prev_vertex, next_vertex;
            if (pe.dir == EdgeDir::Forward) {
                prev_vertex = e.from;  // layer i-1
                next_vertex = e.to;    // layer i
            } else {
                prev_vertex = e.to;    // layer i-1
                next_vertex = e.from;  // layer i
            }
            if (prev_vertex >= g.layer_sizes[static_cast<std::size_t>(i - 1)] ||
                next_vertex >= g.layer_sizes[static_cast<std::size_t>(i)])
                fail(ErrorKind::NotLayered, "edge endpoint outside its layer");
            if (pred[static_cast<std::size_t>(i - 1)][prev_vertex] >= 0 &&
                pred[static_cast<std::size_t>(i)][next_vertex] < 0)
                pred[static_cast<std::size_t>(i)][next_vertex] = prev_vertex;
        }
    }
    if (pred[static_cast<std::size_t>(n)][g.terminal] < 0) return std::nullopt;
    Walk walk(static_cast<std::size_t>(n) + 1);
    walk[static_cast<std::size_t>(n)] = g.terminal;
    for (int i = n; i >= 1; --i)
        walk[static_cast<std::size_t>(i - 1)] =
            static_cast<std::uint32_t>(pred[static_cast<std::size_t>(i)][walk[static_cast<std::size_t>(i)]]);
    return walk;
}

} // namespace pathcond
