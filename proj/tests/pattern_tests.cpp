#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pathcond/pattern.hpp"
#include "support/corpus.hpp"

using namespace pathcond;

namespace {

const PathEdge Fs{EdgeDir::Forward, EdgeStyle::Solid};
const PathEdge Fd{EdgeDir::Forward, EdgeStyle::Dashed};
const PathEdge Bs{EdgeDir::Backward, EdgeStyle::Solid};
const PathEdge Bd{EdgeDir::Backward, EdgeStyle::Dashed};

} // namespace

TEST_CASE("parse_path") {
    PatternPath maltsev = parse_path("Bd");
    CHECK(maltsev.edges == std::vector<PathEdge>{Bd});
    PatternPath majority = parse_path("Fs");
    CHECK(majority.edges == std::vector<PathEdge>{Fs});
    CHECK(parse_path(" Fs  Bd ").edges == std::vector<PathEdge>{Fs, Bd});

    CHECK_THROWS_AS(parse_path(""), Error);
    CHECK_THROWS_AS(parse_path("Fx"), Error);
    CHECK_THROWS_AS(parse_path("Fs Q"), Error);
}

TEST_CASE("gallery shapes") {
    CHECK(gallery("maltsev").edges == std::vector<PathEdge>{Bd});
    CHECK(gallery("majority").edges == std::vector<PathEdge>{Fs});
    CHECK(gallery("jonsson", 3).edges == std::vector<PathEdge>{Fs, Bs, Fs});
    CHECK(gallery("jonsson", 4).edges == std::vector<PathEdge>{Fs, Bs, Fs, Bs});
    CHECK(gallery("dir-jonsson", 3).edges == std::vector<PathEdge>{Fs, Fs, Fs});
    CHECK(gallery("hm", 3).edges == std::vector<PathEdge>{Bd, Bd, Bd});

    // jonsson(1) is the majority path; hm(1) is the maltsev path.
    CHECK(gallery("jonsson", 1) == gallery("majority"));
    CHECK(gallery("hm", 1) == gallery("maltsev"));

    // gumm appends one backward dashed edge to the fence.
    for (int n = 1; n <= 4; ++n) {
        PatternPath fence = gallery("jonsson", n);
        fence.edges.push_back(Bd);
        CHECK(gallery("gumm", n) == fence);
        PatternPath directed = gallery("dir-jonsson", n);
        directed.edges.push_back(Bd);
        CHECK(gallery("dir-gumm", n) == directed);
    }

    CHECK_THROWS_AS(gallery("unknown"), Error);
    CHECK_THROWS_AS(gallery("jonsson"), Error);     // missing n
    CHECK_THROWS_AS(gallery("jonsson", 0), Error);  // bad n
    CHECK_THROWS_AS(gallery("maltsev", 2), Error);  // size not accepted
}

TEST_CASE("condition specs") {
    CHECK(parse_condition_spec("maltsev").path == gallery("maltsev"));
    CHECK(parse_condition_spec("hm:2").path == gallery("hm", 2));
    CHECK(parse_condition_spec("path:Fs Bd").path == parse_path("Fs Bd"));
    CHECK_THROWS_AS(parse_condition_spec("hm:x"), Error);
    CHECK_THROWS_AS(parse_condition_spec("nope"), Error);
}

TEST_CASE("is_trivial spots forward dashed edges") {
    CHECK(is_trivial(PatternPath{{Fs, Fd, Bs}}));
    CHECK_FALSE(is_trivial(gallery("maltsev")));
    CHECK_FALSE(is_trivial(gallery("hm", 3)));
}

TEST_CASE("product: J x majority path") {
    PatternDigraph prod = product(j_digraph(), path_digraph(gallery("majority")));
    // Vertices (x,0)=0, (x,1)=1, (y,0)=2, (y,1)=3.
    CHECK(prod.vertex_count() == 4);
    CHECK(prod.initial() == 0);
    CHECK(prod.terminal() == 3);
    CHECK(prod.edge_count() == 3);
    CHECK(prod.has_solid_edge(0, 1));  // (x,0) -> (x,1)
    CHECK(prod.has_solid_edge(2, 3));  // (y,0) -> (y,1)
    CHECK(prod.has_edge(0, 3));        // (x,0) -> (y,1) dashed
    CHECK_FALSE(prod.has_solid_edge(0, 3));
}

TEST_CASE("product with an edgeless digraph is edgeless") {
    PatternDigraph single(1, 0, 0);
    PatternDigraph prod = product(j_digraph(), single);
    CHECK(prod.vertex_count() == 2);
    CHECK(prod.edge_count() == 0);
}

TEST_CASE("product: J x directed-gumm(2) path") {
    // Three path edges Fs Fs Bd over 4 path vertices: 8 product vertices,
    // one J-copy (3 edges) per path edge.
    PatternPath p = gallery("dir-gumm", 2);
    PatternDigraph prod = product(j_digraph(), path_digraph(p));
    CHECK(prod.vertex_count() == 8);
    CHECK(prod.edge_count() == 9);
    auto v = [&](int j_vertex, int path_vertex) {
        return static_cast<PatternDigraph::Vertex>(j_vertex * 4 + path_vertex);
    };
    for (int i = 0; i < 2; ++i) {  // the two solid forward path edges
        CHECK(prod.has_solid_edge(v(0, i), v(0, i + 1)));
        CHECK(prod.has_solid_edge(v(1, i), v(1, i + 1)));
        CHECK(prod.has_edge(v(0, i), v(1, i + 1)));
        CHECK_FALSE(prod.has_solid_edge(v(0, i), v(1, i + 1)));
    }
    // Backward dashed path edge (3 -> 2): every product edge dashed.
    CHECK(prod.has_edge(v(0, 3), v(0, 2)));
    CHECK(prod.has_edge(v(1, 3), v(1, 2)));
    CHECK(prod.has_edge(v(0, 3), v(1, 2)));
    CHECK_FALSE(prod.has_solid_edge(v(0, 3), v(0, 2)));
}

TEST_CASE("product of J with a path has 2(n+1) vertices and 3n edges") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + static_cast<int>(rng() % 5);
        PatternPath p;
        for (int i = 0; i < n; ++i)
            p.edges.push_back({rng() % 2 ? EdgeDir::Forward : EdgeDir::Backward,
                               rng() % 2 ? EdgeStyle::Solid : EdgeStyle::Dashed});
        PatternDigraph prod = product(j_digraph(), path_digraph(p));
        CHECK(prod.vertex_count() == 2 * static_cast<std::size_t>(n + 1));
        CHECK(prod.edge_count() == 3 * static_cast<std::size_t>(n));
    }
}

TEST_CASE("parallel edges keep the strongest style") {
    PatternDigraph g(2, 0, 1);
    g.add_edge(0, 1, EdgeStyle::Dashed);
    g.add_edge(0, 1, EdgeStyle::Solid);
    g.add_edge(0, 1, EdgeStyle::Dashed);
    CHECK(g.edge_count() == 1);
    CHECK(g.has_solid_edge(0, 1));
}

TEST_CASE("find_walk on forced single edges") {
    PatternPath p = gallery("majority");  // Fs
    LayeredDigraph g;
    g.layer_sizes = {1, 1};
    g.initial = 0;
    g.terminal = 0;
    g.gap_edges = {{{0, 0, EdgeStyle::Solid}}};
    auto walk = find_walk(p, g);
    REQUIRE(walk.has_value());
    CHECK(*walk == Walk{0, 0});

    // The same digraph with a dashed edge cannot carry a solid path edge.
    g.gap_edges = {{{0, 0, EdgeStyle::Dashed}}};
    CHECK_FALSE(find_walk(p, g).has_value());

    // A dashed backward path edge rides any edge from layer 1 to layer 0.
    PatternPath maltsev = gallery("maltsev");
    LayeredDigraph h;
    h.layer_sizes = {1, 1};
    h.initial = 0;
    h.terminal = 0;
    h.gap_edges = {{{0, 0, EdgeStyle::Dashed}}};  // from layer 1 to layer 0
    CHECK(find_walk(maltsev, h).has_value());
    h.gap_edges = {{}};
    CHECK_FALSE(find_walk(maltsev, h).has_value());
}

TEST_CASE("find_walk agrees with brute force on random layered digraphs") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 1 + static_cast<int>(rng() % 4);
        PatternPath p;
        for (int i = 0; i < n; ++i)
            p.edges.push_back({rng() % 2 ? EdgeDir::Forward : EdgeDir::Backward,
                               rng() % 2 ? EdgeStyle::Solid : EdgeStyle::Dashed});
        LayeredDigraph g;
        for (int i = 0; i <= n; ++i) g.layer_sizes.push_back(1 + rng() % 5);
        g.initial = static_cast<std::uint32_t>(rng() % g.layer_sizes[0]);
        g.terminal = static_cast<std::uint32_t>(rng() % g.layer_sizes.back());
        g.gap_edges.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::size_t from_layer = p.edges[static_cast<std::size_t>(i)].dir == EdgeDir::Forward
                                         ? static_cast<std::size_t>(i)
                                         : static_cast<std::size_t>(i) + 1;
            std::size_t to_layer = p.edges[static_cast<std::size_t>(i)].dir == EdgeDir::Forward
                                       ? static_cast<std::size_t>(i) + 1
                                       : static_cast<std::size_t>(i);
            int count = static_cast<int>(rng() % 6);
            for (int e = 0; e < count; ++e)
                g.gap_edges[static_cast<std::size_t>(i)].push_back(
                    {static_cast<std::uint32_t>(rng() % g.layer_sizes[from_layer]),
                     static_cast<std::uint32_t>(rng() % g.layer_sizes[to_layer]),
                     rng() % 2 ? EdgeStyle::Solid : EdgeStyle::Dashed});
        }
        auto fast = find_walk(p, g);
        auto slow = corpus::brute_force_walk(p, g);
        CHECK(fast.has_value() == slow.has_value());
        if (fast) {
            // Returned walks must actually be walks.
            CHECK((*fast)[0] == g.initial);
            CHECK((*fast)[static_cast<std::size_t>(n)] == g.terminal);
        }
    }
}

TEST_CASE("layer_digraph validates the layering") {
    PatternPath p = parse_path("Fs Fs");
    PatternDigraph g(3, 0, 2);
    g.add_edge(0, 1, EdgeStyle::Solid);
    g.add_edge(1, 2, EdgeStyle::Solid);
    auto layered = layer_digraph(g, {{0}, {1}, {2}}, p);
    CHECK(find_walk(p, layered).has_value());

    PatternDigraph skip(3, 0, 2);
    skip.add_edge(0, 2, EdgeStyle::Solid);  // jumps a layer
    CHECK_THROWS_AS(layer_digraph(skip, {{0}, {1}, {2}}, p), Error);

    PatternDigraph wrong_dir(3, 0, 2);
    wrong_dir.add_edge(1, 0, EdgeStyle::Solid);  // backward under a forward path edge
    CHECK_THROWS_AS(layer_digraph(wrong_dir, {{0}, {1}, {2}}, p), Error);
}

TEST_CASE("dot export marks styles and endpoints") {
    std::string dot = j_digraph().to_dot({"x", "y"});
    CHECK(dot.find("style=dashed") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot.find("label=\"x\"") != std::string::npos);
}
