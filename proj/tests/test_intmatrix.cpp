#include "subtile/intmatrix.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace subtile;

namespace {

intmatrix fib() { return intmatrix::from_rows({{1, 1}, {1, 0}}); }
intmatrix table_m() { return intmatrix::from_rows({{2, 2}, {2, 2}}); }

}  // namespace

TEST_CASE("construction and element access", "[intmatrix]") {
    intmatrix m(3);
    CHECK(m.size() == 3);
    CHECK(m.at(1, 2) == 0);
    m.at(1, 2) = 7;
    CHECK(m.at(1, 2) == 7);
    intmatrix id = intmatrix::identity(3);
    CHECK(id.at(0, 0) == 1);
    CHECK(id.at(0, 1) == 0);
    CHECK(fib().at(0, 0) == 1);
    CHECK(fib().at(1, 1) == 0);
}

TEST_CASE("multiplication and powers", "[intmatrix]") {
    intmatrix m = fib();
    intmatrix m2 = m * m;
    CHECK(m2.at(0, 0) == 2);
    CHECK(m2.at(0, 1) == 1);
    CHECK(m2.at(1, 0) == 1);
    CHECK(m2.at(1, 1) == 1);
    CHECK(m.pow(0) == intmatrix::identity(2));
    CHECK(m.pow(1) == m);
    CHECK(m.pow(5) == m * m * m * m * m);
    // Fibonacci entries: top left of M^k is F(k+1)
    CHECK(m.pow(10).at(0, 0) == 89);
    CHECK(m.pow(10).at(0, 1) == 55);
}

TEST_CASE("powers never overflow", "[intmatrix]") {
    // 4^59 alone overflows int64; an exact bigint power must not care
    intmatrix big = table_m().pow(60);
    bigint expected = bigint(2) * pow(bigint(4), 59);
    CHECK(big.at(0, 0) == expected);
    CHECK(big.column_sum(0) == pow(bigint(4), 60));
}

TEST_CASE("columns, sums, norms", "[intmatrix]") {
    intmatrix m = intmatrix::from_rows({{2, 1, 0}, {1, 0, 3}, {0, 1, 1}});
    std::vector<bigint> c = m.column(2);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 0);
    CHECK(c[1] == 3);
    CHECK(c[2] == 1);
    CHECK(m.column_sum(0) == 3);
    CHECK(m.column_sum(2) == 4);
    CHECK(m.one_norm() == 4);
}

TEST_CASE("power_column matches full powers", "[intmatrix]") {
    intmatrix m = intmatrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 1}});
    for (unsigned l = 0; l <= 12; ++l) {
        for (int j = 0; j < 3; ++j) {
            CHECK(power_column(m, l, j) == m.pow(l).column(j));
        }
    }
    CHECK(power_column(table_m(), 40, 1) == table_m().pow(40).column(1));
    CHECK_THROWS_AS(power_column(m, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(power_column(m, 2, -1), std::invalid_argument);
}

TEST_CASE("primitivity via the Wielandt bound", "[intmatrix]") {
    CHECK(fib().is_primitive());
    CHECK(table_m().is_primitive());
    CHECK_FALSE(intmatrix::from_rows({{0, 1}, {1, 0}}).is_primitive());   // period two
    CHECK_FALSE(intmatrix::from_rows({{2, 1}, {0, 2}}).is_primitive());   // reducible
    CHECK_FALSE(intmatrix::identity(3).is_primitive());
    // primitive but needs a high power: positive only at (n-1)^2 + 1 = 5
    intmatrix slow = intmatrix::from_rows({{0, 1, 1}, {1, 0, 0}, {0, 1, 0}});
    CHECK(slow.pow(4).at(2, 2) == 0);
    CHECK(slow.is_primitive());
}

TEST_CASE("text round trip", "[intmatrix]") {
    intmatrix m = intmatrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 1}});
    std::istringstream in(m.to_text());
    CHECK(intmatrix::parse(in) == m);

    std::istringstream manual("2\n0 1\n2 3\n");
    intmatrix p = intmatrix::parse(manual);
    CHECK(p.at(1, 0) == 2);

    std::istringstream bad_count("2\n1 2\n3\n");
    CHECK_THROWS(intmatrix::parse(bad_count));
    std::istringstream negative("2\n1 -2\n3 4\n");
    CHECK_THROWS(intmatrix::parse(negative));
    std::istringstream empty("");
    CHECK_THROWS(intmatrix::parse(empty));
}

TEST_CASE("exact rank is immune to cancellation", "[intmatrix]") {
    using row = std::vector<bigint>;
    bigint big = pow(bigint(10), 40);
    std::vector<row> nearly = {
        {big, big + 1, 1},
        {2 * big, 2 * big + 1, 2},
        {0, 1, 1},
    };
    // row1 differs from 2*row0 by one unit at the 40th digit; doubles
    // cannot see it, fraction-free elimination must
    CHECK(exact_rank(nearly) == 3);
    std::vector<row> dependent = {
        {big, big + 1, 1},
        {2 * big, 2 * (big + 1), 2},
        {3 * big, 3 * (big + 1), 3},
    };
    CHECK(exact_rank(dependent) == 1);
    std::vector<row> zero = {{0, 0}, {0, 0}};
    CHECK(exact_rank(zero) == 0);
    CHECK(exact_rank({{5}}) == 1);
}

TEST_CASE("polynomial evaluation annihilates the right matrices", "[intmatrix]") {
    // x^2 - x - 1 is the characteristic polynomial of the fibonacci matrix
    intmatrix zero = poly_eval(fib(), {-1, -1, 1});
    CHECK(zero == intmatrix(2));
    // (x-1)(x-2) = 2 - 3x + x^2 kills diag(1,2)
    intmatrix d = intmatrix::from_rows({{1, 0}, {0, 2}});
    CHECK(poly_eval(d, {2, -3, 1}) == intmatrix(2));
    // constant polynomial
    CHECK(poly_eval(d, {7}) == intmatrix::from_rows({{7, 0}, {0, 7}}));
    // x^3 - x^2 - 1 kills its companion-like matrix
    intmatrix r = intmatrix::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 1}});
    CHECK(poly_eval(r, {-1, 0, -1, 1}) == intmatrix(3));
}
