#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathcond/algebra.hpp"
#include "pathcond/errors.hpp"
#include "pathcond/pattern.hpp"
#include "pathcond/subpower.hpp"

namespace pathcond {

/// One choice of generators for a testing pattern digraph: tuples a_i, b_i
/// (arity m_i) per vertex and labels c_i, d_i (arity p_i) per edge. Labels
/// only matter on solid edges; dashed edges keep empty label vectors and
/// their edge relations are generated without the label block.
struct TestingInstance {
    PatternPath path;
    std::vector<int> m;                     // n+1 potato arities
    std::vector<int> p;                     // n label arities
    std::vector<std::vector<Element>> a;    // n+1 tuples
    std::vector<std::vector<Element>> b;    // n+1 tuples
    std::vector<std::vector<Element>> c;    // n entries; empty on dashed edges
    std::vector<std::vector<Element>> d;    // n entries; empty on dashed edges

    static TestingInstance all_ones(const PatternPath& path, const std::vector<Element>& a,
                                    const std::vector<Element>& b, const std::vector<Element>& c,
                                    const std::vector<Element>& d) {
        const int n = path.length();
        TestingInstance inst;
        inst.path = path;
        inst.m.assign(static_cast<std::size_t>(n) + 1, 1);
        inst.p.assign(static_cast<std::size_t>(n), 1);
        for (int i = 0; i <= n; ++i) {
            inst.a.push_back({a.at(static_cast<std::size_t>(i))});
            inst.b.push_back({b.at(static_cast<std::size_t>(i))});
        }
        for (int i = 0; i < n; ++i) {
            if (path.edges[static_cast<std::size_t>(i)].style == EdgeStyle::Solid) {
                inst.c.push_back({c.at(static_cast<std::size_t>(i))});
                inst.d.push_back({d.at(static_cast<std::size_t>(i))});
            } else {
                inst.c.push_back({});
                inst.d.push_back({});
            }
        }
        return inst;
    }

    void check_well_formed() const {
        const int n = path.length();
        if (static_cast<int>(m.size()) != n + 1 || static_cast<int>(p.size()) != n ||
            static_cast<int>(a.size()) != n + 1 || static_cast<int>(b.size()) != n + 1 ||
            static_cast<int>(c.size()) != n || static_cast<int>(d.size()) != n)
            fail(ErrorKind::ArityMismatch, "testing instance shape does not match the path");
        for (int i = 0; i <= n; ++i) {
            if (m[static_cast<std::size_t>(i)] < 1)
                fail(ErrorKind::ArityMismatch, "potato arity must be positive");
            if (static_cast<int>(a[static_cast<std::size_t>(i)].size()) != m[static_cast<std::size_t>(i)] ||
                static_cast<int>(b[static_cast<std::size_t>(i)].size()) != m[static_cast<std::size_t>(i)])
                fail(ErrorKind::ArityMismatch, "generator tuple does not match its declared arity");
        }
        for (int i = 0; i < n; ++i) {
            bool solid = path.edges[static_cast<std::size_t>(i)].style == EdgeStyle::Solid;
            if (p[static_cast<std::size_t>(i)] < 1)
                fail(ErrorKind::ArityMismatch, "label arity must be positive");
            if (solid) {
                if (static_cast<int>(c[static_cast<std::size_t>(i)].size()) != p[static_cast<std::size_t>(i)] ||
                    static_cast<int>(d[static_cast<std::size_t>(i)].size()) != p[static_cast<std::size_t>(i)])
                    fail(ErrorKind::ArityMismatch, "label tuple does not match its declared arity");
            } else {
                if (!c[static_cast<std::size_t>(i)].empty() || !d[static_cast<std::size_t>(i)].empty())
                    fail(ErrorKind::ArityMismatch, "dashed edges carry no labels");
            }
        }
    }
};

/// The layered digraph of a testing instance: potatoes B_i = Sg({a_i, b_i})
/// and edge relations E_i generated from the three per-edge generator
/// columns (source block first; backward edges swap the potato blocks). An
/// E_i element yields a solid edge exactly when the path edge is solid and
/// its label block equals c_i.
struct TestingDigraph {
    TestingInstance instance;
    std::vector<Subpower> potatoes;        // B_0..B_n
    std::vector<Subpower> edge_relations;  // E_1..E_n (dashed: labels elided)
    LayeredDigraph layered;                // derived edges, styles applied, strongest kept
};

inline TestingDigraph build_testing_digraph(const Algebra& alg, const TestingInstance& inst,
                                            const ClosureLimits& limits = {}) {
    inst.check_well_formed();
    if (!is_idempotent(alg).idempotent)
        fail(ErrorKind::NotIdempotent, "testing digraphs are built for idempotent algebras");
    const int n = inst.path.length();
    TestingDigraph out{inst, {}, {}, {}};

    for (int i = 0; i <= n; ++i)
        out.potatoes.push_back(generate(alg, inst.m[static_cast<std::size_t>(i)],
                                        {inst.a[static_cast<std::size_t>(i)], inst.b[static_cast<std::size_t>(i)]},
                                        limits));

    out.layered.layer_sizes.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        out.layered.layer_sizes[static_cast<std::size_t>(i)] = out.potatoes[static_cast<std::size_t>(i)].size();
    out.layered.initial = out.potatoes[0].index_of(
        out.potatoes[0].codec().encode(inst.a[0]));
    out.layered.terminal = out.potatoes[static_cast<std::size_t>(n)].index_of(
        out.potatoes[static_cast<std::size_t>(n)].codec().encode(inst.b[static_cast<std::size_t>(n)]));
    out.layered.gap_edges.resize(static_cast<std::size_t>(n));

    auto concat = [](const std::vector<Element>& u, const std::vector<Element>& v,
                     const std::vector<Element>& w) {
        std::vector<Element> out = u;
        out.insert(out.end(), v.begin(), v.end());
        out.insert(out.end(), w.begin(), w.end());
        return out;
    };

    for (int i = 1; i <= n; ++i) {
        const PathEdge e = inst.path.edges[static_cast<std::size_t>(i - 1)];
        const bool fwd = e.dir == EdgeDir::Forward;
        const bool solid = e.style == EdgeStyle::Solid;
        // Source block of the oriented edge: B_{i-1} for forward, B_i for backward.
        const auto& src_a = fwd ? inst.a[static_cast<std::size_t>(i - 1)] : inst.a[static_cast<std::size_t>(i)];
        const auto& src_b = fwd ? inst.b[static_cast<std::size_t>(i - 1)] : inst.b[static_cast<std::size_t>(i)];
        const auto& dst_a = fwd ? inst.a[static_cast<std::size_t>(i)] : inst.a[static_cast<std::size_t>(i - 1)];
        const auto& dst_b = fwd ? inst.b[static_cast<std::size_t>(i)] : inst.b[static_cast<std::size_t>(i - 1)];
        const Subpower& src_potato = out.potatoes[static_cast<std::size_t>(fwd ? i - 1 : i)];
        const Subpower& dst_potato = out.potatoes[static_cast<std::size_t>(fwd ? i : i - 1)];

        std::vector<std::vector<Element>> gens;
        int label_arity = 0;
        if (solid) {
            label_arity = inst.p[static_cast<std::size_t>(i - 1)];
            const auto& ci = inst.c[static_cast<std::size_t>(i - 1)];
            const auto& di = inst.d[static_cast<std::size_t>(i - 1)];
            gens = {concat(ci, src_a, dst_a), concat(di, src_a, dst_b), concat(ci, src_b, dst_b)};
        } else {
            std::vector<Element> none;
            gens = {concat(none, src_a, dst_a), concat(none, src_a, dst_b), concat(none, src_b, dst_b)};
        }
        int rel_arity = label_arity + static_cast<int>(src_a.size()) + static_cast<int>(dst_a.size());
        Subpower rel = generate(alg, rel_arity, gens, limits);

        const TupleCode dst_space = dst_potato.codec().space();
        const TupleCode src_space = src_potato.codec().space();
        TupleCode label_code_c = 0;
        if (solid) {
            TupleCodec label_codec(alg.size(), label_arity);
            label_code_c = label_codec.encode(inst.c[static_cast<std::size_t>(i - 1)]);
        }
        // Collapse to the strongest style per ordered (from, to) pair.
        std::map<std::pair<std::uint32_t, std::uint32_t>, EdgeStyle> best;
        for (TupleCode code : rel.elements()) {
            TupleCode dst_code = code % dst_space;
            TupleCode src_code = (code / dst_space) % src_space;
            TupleCode label = code / (dst_space * src_space);
            std::uint32_t from = src_potato.index_of(src_code);
            std::uint32_t to = dst_potato.index_of(dst_code);
            EdgeStyle style = (solid && label == label_code_c) ? EdgeStyle::Solid : EdgeStyle::Dashed;
            auto [it, inserted] = best.emplace(std::make_pair(from, to), style);
            if (!inserted && style == EdgeStyle::Solid) it->second = EdgeStyle::Solid;
        }
        for (const auto& [pair, style] : best)
            out.layered.gap_edges[static_cast<std::size_t>(i - 1)].push_back({pair.first, pair.second, style});
        out.edge_relations.push_back(std::move(rel));
    }
    return out;
}

/// Rebuilds the digraph of a claimed counterexample (or any instance) and
/// reruns the walk search, for third-party re-verification of certificates.
inline std::optional<Walk> check_instance(const Algebra& alg, const PatternPath& p,
                                          const TestingInstance& inst,
                                          const ClosureLimits& limits = {}) {
    if (!(p == inst.path)) fail(ErrorKind::ArityMismatch, "instance was built for a different path");
    TestingDigraph g = build_testing_digraph(alg, inst, limits);
    return find_walk(p, g.layered);
}

} // namespace pathcond
