#pragma once

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pathcond/algebra.hpp"
#include "pathcond/errors.hpp"
#include "pathcond/pattern.hpp"
#include "pathcond/testing.hpp"

namespace pathcond {

enum class Verdict { Satisfied, Refuted, TriviallySatisfied };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied: return "satisfied";
        case Verdict::Refuted: return "refuted";
        case Verdict::TriviallySatisfied: return "trivially-satisfied";
    }
    return "?";
}

struct DecideStats {
    std::uint64_t instances_checked = 0;
    std::uint64_t theoretical_instances = 0;
    std::uint64_t closures_computed = 0;
    std::uint64_t cache_hits = 0;
    double wall_ms = 0.0;
    int workers = 1;
};

struct DecisionReport {
    std::string condition;
    Verdict verdict = Verdict::Satisfied;
    std::optional<TestingInstance> counterexample;
    DecideStats stats;
    bool canonical = false;
};

struct DecideOptions {
    /// Lexicographically least counterexample and worker-count-independent
    /// output; omits scheduling-dependent statistics.
    bool canonical = false;
    /// Scan the whole instance space even after a failure (bench mode).
    bool exhaustive = false;
    int workers = 1;
    /// Instances per scheduling block. Results never depend on it.
    std::uint64_t block_size = 1 << 12;
    std::string condition_name;
};

namespace detail {

/// Dense-bitset closure over A^m for the small relations the scan memoizes
/// (m <= 3, so the universe is at most |A|^3). No provenance.
inline std::vector<std::uint32_t> close_small(const Algebra& a, int m,
                                              std::vector<std::uint32_t> gens,
                                              const ClosureLimits& limits,
                                              std::uint64_t* steps_out = nullptr) {
    const int s = a.size();
    std::uint32_t space = 1;
    for (int i = 0; i < m; ++i) space *= static_cast<std::uint32_t>(s);
    std::vector<bool> member(space, false);
    std::vector<std::uint32_t> elems;
    // Per-coordinate digit cache keeps the inner loop to table lookups.
    std::vector<std::uint8_t> digits;  // elems x m, first coordinate first
    std::vector<std::uint32_t> place(static_cast<std::size_t>(m), 1);
    for (int c = m - 2; c >= 0; --c)
        place[static_cast<std::size_t>(c)] =
            place[static_cast<std::size_t>(c + 1)] * static_cast<std::uint32_t>(s);
    auto add = [&](std::uint32_t code) {
        if (member[code]) return;
        member[code] = true;
        if (elems.size() >= limits.max_elements)
            fail(ErrorKind::CapExceeded, "closure exceeded the element cap");
        elems.push_back(code);
        for (int c = 0; c < m; ++c)
            digits.push_back(static_cast<std::uint8_t>(
                (code / place[static_cast<std::size_t>(c)]) % static_cast<std::uint32_t>(s)));
    };
    for (std::uint32_t g : gens) add(g);

    std::uint64_t steps = 0;
    std::vector<std::uint32_t> args;
    for (std::uint32_t q = 0; q < elems.size(); ++q) {
        for (int op = 0; op < a.operation_count(); ++op) {
            const OperationTable& table = a.operation(op);
            const int r = table.arity;
            // Same constrained-lexicographic walk as the general engine.
            args.assign(static_cast<std::size_t>(r), 0);
            args[static_cast<std::size_t>(r - 1)] = q;
            int q_count = (q == 0) ? r : 1;
            while (true) {
                if (++steps > limits.max_steps)
                    fail(ErrorKind::CapExceeded, "closure exceeded the step budget");
                std::uint32_t code = 0;
                for (int c = 0; c < m; ++c) {
                    std::size_t idx = 0;
                    for (int i = 0; i < r; ++i)
                        idx = idx * static_cast<std::size_t>(s) +
                              digits[static_cast<std::size_t>(args[static_cast<std::size_t>(i)]) *
                                         static_cast<std::size_t>(m) +
                                     static_cast<std::size_t>(c)];
                    code = code * static_cast<std::uint32_t>(s) +
                           static_cast<std::uint32_t>(table.table[idx]);
                }
                add(code);
                int i = r - 1;
                for (; i >= 0; --i) {
                    if (args[static_cast<std::size_t>(i)] < q) {
                        if (++args[static_cast<std::size_t>(i)] == q) ++q_count;
                        for (int j = i + 1; j < r; ++j) {
                            if (args[static_cast<std::size_t>(j)] == q) --q_count;
                            args[static_cast<std::size_t>(j)] = 0;
                        }
                        break;
                    }
                }
                if (i < 0) break;
                if (q_count == 0) {
                    args[static_cast<std::size_t>(r - 1)] = q;
                    q_count = 1;
                }
            }
        }
    }
    if (steps_out) *steps_out += steps;
    return elems;
}

} // namespace detail

/// Decides HasPath conditions for one algebra via the all-ones instance
/// scan. Potato closures and edge-relation closures are memoized across
/// calls: they depend only on generator scalars, not on the condition, so
/// one table serves every path. Memo slots fill lazily and lock-free
/// (compute, CAS install; losers discard), keeping the scan partitionable
/// across workers.
class Decider {
public:
    using Mask = std::uint32_t;

    explicit Decider(Algebra a, ClosureLimits limits = {})
        : algebra_(std::move(a)), limits_(limits) {
        auto idem = is_idempotent(algebra_);
        if (!idem.idempotent)
            fail(ErrorKind::NotIdempotent,
                 "local decision needs an idempotent algebra (" +
                     std::to_string(idem.violations.size()) + " violations)");
        const int s = algebra_.size();
        if (s > 16)
            fail(ErrorKind::CapExceeded, "the instance scan supports |A| <= 16");
        // Potatoes: Sg({alpha, beta}) as subsets of A, all |A|^2 pairs.
        potato_masks_.resize(static_cast<std::size_t>(s) * static_cast<std::size_t>(s));
        for (Element alpha = 0; alpha < s; ++alpha)
            for (Element beta = 0; beta < s; ++beta) {
                auto elems = detail::close_small(
                    algebra_, 1,
                    {static_cast<std::uint32_t>(alpha), static_cast<std::uint32_t>(beta)}, limits_);
                Mask mask = 0;
                for (std::uint32_t e : elems) mask |= Mask{1} << e;
                potato_masks_[static_cast<std::size_t>(alpha * s + beta)] = mask;
            }
        dashed_slots_ = std::make_unique<std::atomic<Rel*>[]>(pow_int(s, 4));
        solid_slots_ = std::make_unique<std::atomic<Rel*>[]>(pow_int(s, 6));
    }

    ~Decider() {
        const int s = algebra_.size();
        for (std::size_t i = 0; i < pow_int(s, 4); ++i) delete dashed_slots_[i].load();
        for (std::size_t i = 0; i < pow_int(s, 6); ++i) delete solid_slots_[i].load();
    }

    Decider(const Decider&) = delete;
    Decider& operator=(const Decider&) = delete;

    const Algebra& algebra() const noexcept { return algebra_; }

    /// Sg({alpha, beta}) as a subset of A.
    Mask potato_mask(Element alpha, Element beta) const {
        return potato_masks_[static_cast<std::size_t>(alpha * algebra_.size() + beta)];
    }

    std::uint64_t theoretical_instances(const PatternPath& p) const {
        const int n = p.length();
        const int k = p.solid_count();
        bool overflow = false;
        std::uint64_t total = detail_pow_checked(static_cast<std::uint64_t>(algebra_.size()),
                                                 2 * n + 2 * k + 2, &overflow);
        if (overflow) fail(ErrorKind::CapExceeded, "instance space exceeds 2^62");
        return total;
    }

    DecisionReport decide(const PatternPath& p, const DecideOptions& opt = {}) {
        auto start = std::chrono::steady_clock::now();
        DecisionReport report;
        report.condition = opt.condition_name.empty() ? "path:" + p.to_dsl() : opt.condition_name;
        report.canonical = opt.canonical;
        report.stats.workers = std::max(1, opt.workers);
        if (is_trivial(p)) {
            report.verdict = Verdict::TriviallySatisfied;
            report.stats.theoretical_instances = theoretical_instances(p);
            report.stats.wall_ms = elapsed_ms(start);
            return report;
        }
        const std::uint64_t total = theoretical_instances(p);
        report.stats.theoretical_instances = total;

        Scan scan(*this, p, opt, total);
        scan.run();

        report.stats.closures_computed = scan.closures.load();
        report.stats.cache_hits = scan.cache_hits.load();
        report.stats.instances_checked = scan.physical_count.load();
        std::uint64_t best = scan.best_fail.load();
        if (best == NO_FAIL) {
            report.verdict = Verdict::Satisfied;
            if (opt.canonical) report.stats.instances_checked = total;
        } else {
            report.verdict = Verdict::Refuted;
            report.counterexample = decode_instance(p, best);
            if (opt.canonical)
                report.stats.instances_checked = opt.exhaustive ? total : best + 1;
        }
        report.stats.wall_ms = elapsed_ms(start);
        return report;
    }

    /// Decodes a scan index into its testing instance (lexicographic over
    /// the a-digits, then b, then c, then d; first digit most significant).
    TestingInstance decode_instance(const PatternPath& p, std::uint64_t index) const {
        const int n = p.length();
        const int s = algebra_.size();
        const int digit_count = digit_count_for(p);
        std::vector<Element> digits(static_cast<std::size_t>(digit_count));
        for (int i = digit_count - 1; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = static_cast<Element>(index % static_cast<std::uint64_t>(s));
            index /= static_cast<std::uint64_t>(s);
        }
        std::vector<Element> a(digits.begin(), digits.begin() + (n + 1));
        std::vector<Element> b(digits.begin() + (n + 1), digits.begin() + 2 * (n + 1));
        std::vector<Element> c(static_cast<std::size_t>(n), 0), d(static_cast<std::size_t>(n), 0);
        int pos = 2 * (n + 1);
        for (int i = 0; i < n; ++i)
            if (p.edges[static_cast<std::size_t>(i)].style == EdgeStyle::Solid)
                c[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(pos++)];
        for (int i = 0; i < n; ++i)
            if (p.edges[static_cast<std::size_t>(i)].style == EdgeStyle::Solid)
                d[static_cast<std::size_t>(i)] = digits[static_cast<std::size_t>(pos++)];
        return TestingInstance::all_ones(p, a, b, c, d);
    }

private:
    static constexpr std::uint64_t NO_FAIL = ~std::uint64_t{0};

    struct Rel {
        // Image masks per source element, both directions.
        std::vector<Mask> fwd;  // fwd[u] = { v : (u,v) in R }
        std::vector<Mask> rev;  // rev[v] = { u : (u,v) in R }
    };

    static std::size_t pow_int(int base, int exp) {
        std::size_t r = 1;
        for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
        return r;
    }

    static std::uint64_t detail_pow_checked(std::uint64_t base, int exp, bool* overflow) {
        return pathcond::detail::checked_pow(base, exp, overflow);
    }

    static double elapsed_ms(std::chrono::steady_clock::time_point start) {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }

    int digit_count_for(const PatternPath& p) const {
        return 2 * (p.length() + 1) + 2 * p.solid_count();
    }

    /// R = Sg({ (alpha,gamma), (alpha,delta), (beta,delta) }) <= A^2; every
    /// element is an edge (any style) between the potatoes generated by
    /// (alpha,beta) and (gamma,delta).
    const Rel* dashed_rel(Element alpha, Element beta, Element gamma, Element delta,
                          std::atomic<std::uint64_t>& closures, std::atomic<std::uint64_t>& hits) {
        const int s = algebra_.size();
        std::size_t key = static_cast<std::size_t>(((alpha * s + beta) * s + gamma) * s + delta);
        Rel* existing = dashed_slots_[key].load(std::memory_order_acquire);
        if (existing) {
            hits.fetch_add(1, std::memory_order_relaxed);
            return existing;
        }
        auto su = static_cast<std::uint32_t>(s);
        std::vector<std::uint32_t> gens{
            static_cast<std::uint32_t>(alpha) * su + static_cast<std::uint32_t>(gamma),
            static_cast<std::uint32_t>(alpha) * su + static_cast<std::uint32_t>(delta),
            static_cast<std::uint32_t>(beta) * su + static_cast<std::uint32_t>(delta)};
        auto elems = detail::close_small(algebra_, 2, std::move(gens), limits_);
        auto rel = std::make_unique<Rel>();
        rel->fwd.assign(static_cast<std::size_t>(s), 0);
        rel->rev.assign(static_cast<std::size_t>(s), 0);
        for (std::uint32_t e : elems) {
            std::uint32_t u = e / su, v = e % su;
            rel->fwd[u] |= Mask{1} << v;
            rel->rev[v] |= Mask{1} << u;
        }
        closures.fetch_add(1, std::memory_order_relaxed);
        Rel* raw = rel.get();
        Rel* expected = nullptr;
        if (dashed_slots_[key].compare_exchange_strong(expected, raw, std::memory_order_acq_rel)) {
            rel.release();
            return raw;
        }
        return expected;  // another worker won the race
    }

    /// Solid edges between the same potatoes: the label-c fiber of
    /// Sg({ (c,alpha,gamma), (d,alpha,delta), (c,beta,delta) }) <= A^3.
    const Rel* solid_rel(Element c, Element d, Element alpha, Element beta, Element gamma,
                         Element delta, std::atomic<std::uint64_t>& closures,
                         std::atomic<std::uint64_t>& hits) {
        const int s = algebra_.size();
        std::size_t key = static_cast<std::size_t>(
            ((((c * s + d) * s + alpha) * s + beta) * s + gamma) * s + delta);
        Rel* existing = solid_slots_[key].load(std::memory_order_acquire);
        if (existing) {
            hits.fetch_add(1, std::memory_order_relaxed);
            return existing;
        }
        auto su = static_cast<std::uint32_t>(s);
        auto code3 = [su](Element a, Element b, Element e) {
            return (static_cast<std::uint32_t>(a) * su + static_cast<std::uint32_t>(b)) * su +
                   static_cast<std::uint32_t>(e);
        };
        std::vector<std::uint32_t> gens{code3(c, alpha, gamma), code3(d, alpha, delta),
                                        code3(c, beta, delta)};
        auto elems = detail::close_small(algebra_, 3, std::move(gens), limits_);
        auto rel = std::make_unique<Rel>();
        rel->fwd.assign(static_cast<std::size_t>(s), 0);
        rel->rev.assign(static_cast<std::size_t>(s), 0);
        for (std::uint32_t e : elems) {
            if (e / (su * su) != static_cast<std::uint32_t>(c)) continue;
            std::uint32_t u = (e / su) % su, v = e % su;
            rel->fwd[u] |= Mask{1} << v;
            rel->rev[v] |= Mask{1} << u;
        }
        closures.fetch_add(1, std::memory_order_relaxed);
        Rel* raw = rel.get();
        Rel* expected = nullptr;
        if (solid_slots_[key].compare_exchange_strong(expected, raw, std::memory_order_acq_rel)) {
            rel.release();
            return raw;
        }
        return expected;
    }

    struct Scan {
        // Per-gap digit positions resolved once.
        struct Gap {
            bool forward;
            bool solid;
            int a_src, b_src, a_dst, b_dst;  // digit indices
            int c_pos = -1, d_pos = -1;      // digit indices (solid only)
        };

        Decider& dec;
        const PatternPath& path;
        const DecideOptions& opt;
        std::uint64_t total;
        std::uint64_t block_size;
        std::vector<Gap> gaps;
        int digit_count;
        std::atomic<std::uint64_t> next_block{0};
        std::atomic<std::uint64_t> best_fail{NO_FAIL};
        std::atomic<std::uint64_t> physical_count{0};
        std::atomic<std::uint64_t> closures{0};
        std::atomic<std::uint64_t> cache_hits{0};
        std::atomic<bool> stop{false};
        std::mutex error_mutex;
        std::exception_ptr error;

        Scan(Decider& d, const PatternPath& p, const DecideOptions& o, std::uint64_t tot)
            : dec(d), path(p), opt(o), total(tot), block_size(std::max<std::uint64_t>(1, o.block_size)) {
            const int n = path.length();
            digit_count = d.digit_count_for(path);
            int cpos = 2 * (n + 1);
            int dpos = cpos + path.solid_count();
            for (int i = 1; i <= n; ++i) {
                const PathEdge e = path.edges[static_cast<std::size_t>(i - 1)];
                Gap g;
                g.forward = e.dir == EdgeDir::Forward;
                g.solid = e.style == EdgeStyle::Solid;
                int src = g.forward ? i - 1 : i;
                int dst = g.forward ? i : i - 1;
                g.a_src = src;
                g.b_src = (n + 1) + src;
                g.a_dst = dst;
                g.b_dst = (n + 1) + dst;
                if (g.solid) {
                    g.c_pos = cpos++;
                    g.d_pos = dpos++;
                }
                gaps.push_back(g);
            }
        }

        void run() {
            int workers = std::max(1, opt.workers);
            if (workers == 1) {
                worker();
            } else {
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(workers));
                for (int i = 0; i < workers; ++i) pool.emplace_back([this] { worker(); });
                for (auto& t : pool) t.join();
            }
            if (error) std::rethrow_exception(error);
        }

        void worker() {
            try {
                std::vector<Element> digits(static_cast<std::size_t>(digit_count));
                while (true) {
                    std::uint64_t block = next_block.fetch_add(1, std::memory_order_relaxed);
                    std::uint64_t base = block * block_size;
                    if (base >= total) break;
                    if (stop.load(std::memory_order_relaxed)) break;
                    if (opt.canonical && !opt.exhaustive &&
                        base > best_fail.load(std::memory_order_relaxed))
                        break;
                    scan_block(base, std::min(base + block_size, total), digits);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
            }
        }

        void scan_block(std::uint64_t base, std::uint64_t end, std::vector<Element>& digits) {
            const int s = dec.algebra_.size();
            std::uint64_t idx = base;
            for (int i = digit_count - 1; i >= 0; --i) {
                digits[static_cast<std::size_t>(i)] = static_cast<Element>(idx % static_cast<std::uint64_t>(s));
                idx /= static_cast<std::uint64_t>(s);
            }
            std::uint64_t checked = 0;
            for (std::uint64_t cur = base; cur < end; ++cur) {
                ++checked;
                if (!instance_has_walk(digits)) {
                    // Within a block the scan is ascending, so the first
                    // failure is the block minimum.
                    std::uint64_t prev = best_fail.load(std::memory_order_relaxed);
                    while (cur < prev &&
                           !best_fail.compare_exchange_weak(prev, cur, std::memory_order_relaxed)) {
                    }
                    if (!opt.exhaustive) {
                        if (!opt.canonical) stop.store(true, std::memory_order_relaxed);
                        break;
                    }
                }
                // Odometer step.
                for (int i = digit_count - 1; i >= 0; --i) {
                    if (++digits[static_cast<std::size_t>(i)] < s) break;
                    digits[static_cast<std::size_t>(i)] = 0;
                }
            }
            physical_count.fetch_add(checked, std::memory_order_relaxed);
        }

        bool instance_has_walk(const std::vector<Element>& digits) {
            const int n = path.length();
            Mask cur = Mask{1} << digits[0];  // a_0
            for (int i = 0; i < n; ++i) {
                const Gap& g = gaps[static_cast<std::size_t>(i)];
                const Rel* rel;
                if (g.solid)
                    rel = dec.solid_rel(digits[static_cast<std::size_t>(g.c_pos)],
                                        digits[static_cast<std::size_t>(g.d_pos)],
                                        digits[static_cast<std::size_t>(g.a_src)],
                                        digits[static_cast<std::size_t>(g.b_src)],
                                        digits[static_cast<std::size_t>(g.a_dst)],
                                        digits[static_cast<std::size_t>(g.b_dst)], closures,
                                        cache_hits);
                else
                    rel = dec.dashed_rel(digits[static_cast<std::size_t>(g.a_src)],
                                         digits[static_cast<std::size_t>(g.b_src)],
                                         digits[static_cast<std::size_t>(g.a_dst)],
                                         digits[static_cast<std::size_t>(g.b_dst)], closures,
                                         cache_hits);
                const std::vector<Mask>& image = g.forward ? rel->fwd : rel->rev;
                Mask next = 0;
                Mask mm = cur;
                while (mm) {
                    int u = std::countr_zero(mm);
                    mm &= mm - 1;
                    next |= image[static_cast<std::size_t>(u)];
                }
                cur = next;
                if (!cur) return false;
            }
            const int n1 = path.length();
            Mask goal = Mask{1} << digits[static_cast<std::size_t>(n1) + static_cast<std::size_t>(n1) + 1];
            return (cur & goal) != 0;
        }
    };

    friend struct Scan;

    Algebra algebra_;
    ClosureLimits limits_;
    std::vector<Mask> potato_masks_;
    std::unique_ptr<std::atomic<Rel*>[]> dashed_slots_;
    std::unique_ptr<std::atomic<Rel*>[]> solid_slots_;
};

/// One-shot form; constructs the memo tables for a single call.
inline DecisionReport decide(const Algebra& a, const PatternPath& p, const DecideOptions& opt = {},
                             const ClosureLimits& limits = {}) {
    Decider d(a, limits);
    return d.decide(p, opt);
}

} // namespace pathcond
