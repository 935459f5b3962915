#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pathcond/algebra.hpp"
#include "support/corpus.hpp"

using namespace pathcond;

namespace {

bool fails_with(ErrorKind kind, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

} // namespace

TEST_CASE("validate accepts a 2-element semilattice") {
    Algebra a = Algebra::validate(2, {{"meet", 2, {0, 0, 0, 1}}});
    CHECK(a.size() == 2);
    CHECK(a.operation_count() == 1);
    CHECK(a.operation(0).arity == 2);
}

TEST_CASE("validate rejects malformed input") {
    CHECK(fails_with(ErrorKind::MalformedTable,
                     [] { Algebra::validate(2, {{"f", 2, {0, 0, 0}}}); }));  // length 3 != 4
    CHECK(fails_with(ErrorKind::EmptySignature, [] { Algebra::validate(2, {}); }));
    CHECK(fails_with(ErrorKind::MalformedTable,
                     [] { Algebra::validate(2, {{"f", 2, {0, 0, 0, 2}}}); }));  // entry out of range
    CHECK(fails_with(ErrorKind::MalformedTable,
                     [] { Algebra::validate(2, {{"f", 1, {0, 1}}, {"f", 1, {1, 0}}}); }));  // dup name
    CHECK(fails_with(ErrorKind::MalformedTable,
                     [] { Algebra::validate(2, {{"bad name", 1, {0, 1}}}); }));
}

TEST_CASE("nullary operations") {
    // A sole nullary operation leaves no positive-arity operation.
    CHECK(fails_with(ErrorKind::NoPositiveArityOperation,
                     [] { Algebra::validate(2, {{"c", 0, {0}}}); }));
    // Next to other operations a nullary op is an idempotence failure.
    CHECK(fails_with(ErrorKind::IdempotenceError,
                     [] { Algebra::validate(2, {{"meet", 2, {0, 0, 0, 1}}, {"c", 0, {0}}}); }));
}

TEST_CASE("is_idempotent") {
    CHECK(is_idempotent(corpus::semilattice2()).idempotent);
    CHECK(is_idempotent(corpus::z2_maltsev()).idempotent);

    Algebra const0 = Algebra::validate(2, {{"f", 2, {0, 0, 0, 0}}});
    auto report = is_idempotent(const0);
    CHECK_FALSE(report.idempotent);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].op_index == 0);
    CHECK(report.violations[0].element == 1);
}

TEST_CASE("size_measure") {
    CHECK(size_measure(corpus::z2_maltsev()).value == 8);  // 1 * 2^3
    CHECK(size_measure(corpus::z2_maltsev()).max_arity == 3);
    CHECK(size_measure(corpus::lattice2()).value == 8);  // 2 * 2^2
    Algebra id3 = Algebra::validate(3, {{"id", 1, {0, 1, 2}}});
    CHECK(size_measure(id3).value == 3);  // 1 * 3^1
}

TEST_CASE("size_measure dominates the universe") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        int size = 2 + static_cast<int>(rng() % 4);
        Algebra a = corpus::random_idempotent_algebra(size, rng, "r");
        CHECK(size_measure(a).value >= static_cast<std::uint64_t>(a.size()));
    }
}

TEST_CASE("apply looks up the lexicographic table") {
    Algebra sl = corpus::semilattice2();
    CHECK(sl.apply(0, {0, 1}) == 0);
    Algebra z2 = corpus::z2_maltsev();
    CHECK(z2.apply(0, {1, 1, 0}) == 0);
    CHECK(z2.apply(0, {1, 0, 0}) == 1);

    CHECK(fails_with(ErrorKind::ArityMismatch, [&] { sl.apply(0, {0}); }));
    CHECK(fails_with(ErrorKind::ElementOutOfRange, [&] { sl.apply(0, {0, 2}); }));
}

TEST_CASE("apply agrees with the nested-loop interpreter") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        int size = 2 + static_cast<int>(rng() % 2);  // |A| <= 3
        Algebra a = corpus::random_idempotent_algebra(size, rng, "r");
        for (int op = 0; op < a.operation_count(); ++op) {
            int r = a.operation(op).arity;
            std::vector<Element> args(static_cast<std::size_t>(r), 0);
            while (true) {
                CHECK(a.apply(op, args) == corpus::naive_apply(a, op, args));
                int i = r - 1;
                for (; i >= 0; --i) {
                    if (++args[static_cast<std::size_t>(i)] < size) break;
                    args[static_cast<std::size_t>(i)] = 0;
                }
                if (i < 0) break;
            }
        }
    }
}

TEST_CASE("tuple codec round-trips") {
    TupleCodec codec(2, 2);
    CHECK(codec.encode({1, 0}) == 2);  // first coordinate most significant
    CHECK(codec.encode({0, 1}) == 1);

    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        int size = 2 + static_cast<int>(rng() % 4);
        int cap = max_codable_arity(size);
        int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(cap, 12)));
        TupleCodec c(size, m);
        TupleCode code = rng() % c.space();
        CHECK(c.encode(c.decode(code)) == code);
    }
}

TEST_CASE("tuple codec guards the code space") {
    CHECK_THROWS_AS(TupleCodec(4, 48), Error);  // 4^48 needs 96 bits
}
