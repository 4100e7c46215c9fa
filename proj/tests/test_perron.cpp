#include "subtile/perron.hpp"
#include "subtile/rule.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace subtile;
using Catch::Matchers::WithinAbs;

namespace {

// independent root finder for cubic oracles, no linear algebra involved
double bisect_root(double (*f)(double), double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((f(lo) < 0) == (f(mid) < 0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double plastic_like(double x) { return x * x * x - x * x - 1.0; }

const double golden = (1.0 + std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_CASE("pinwheel matrix spectrum is {5, -1}", "[perron]") {
    perron_data pd = analyze_matrix(builtin_matrix("pinwheel"));
    CHECK_THAT(pd.mu, WithinAbs(5.0, 1e-12));
    CHECK_THAT(pd.second_modulus, WithinAbs(1.0, 1e-12));
    CHECK_THAT(pd.nu[0], WithinAbs(0.5, 1e-12));
    CHECK_THAT(pd.nu[1], WithinAbs(0.5, 1e-12));
    REQUIRE(pd.spectrum.size() == 2);
    CHECK_THAT(pd.spectrum[1].value.real(), WithinAbs(-1.0, 1e-9));
    CHECK(pd.spectrum[1].multiplicity == 1);
}

TEST_CASE("table matrix collapses to rank one", "[perron]") {
    perron_data pd = analyze_matrix(builtin_matrix("table"));
    CHECK_THAT(pd.mu, WithinAbs(4.0, 1e-12));
    CHECK_THAT(pd.second_modulus, WithinAbs(0.0, 1e-9));
    CHECK_THAT(pd.nu[0], WithinAbs(0.5, 1e-12));
}

TEST_CASE("square matrix has the circulant spectrum {4, 2, 2, 0}", "[perron]") {
    perron_data pd = analyze_matrix(builtin_matrix("square"));
    CHECK_THAT(pd.mu, WithinAbs(4.0, 1e-10));
    CHECK_THAT(pd.second_modulus, WithinAbs(2.0, 1e-10));
    for (double f : pd.nu) CHECK_THAT(f, WithinAbs(0.25, 1e-10));
    int mult_two = 0;
    for (const eigen_cluster& c : pd.spectrum)
        if (std::abs(c.value - std::complex<double>(2.0, 0.0)) < 1e-6) mult_two += c.multiplicity;
    CHECK(mult_two == 2);
}

TEST_CASE("penrose2 matrix has golden spectrum", "[perron]") {
    perron_data pd = analyze_matrix(builtin_matrix("penrose2"));
    CHECK_THAT(pd.mu, WithinAbs(golden * golden, 1e-10));
    CHECK_THAT(pd.second_modulus, WithinAbs((3.0 - std::sqrt(5.0)) / 2.0, 1e-10));
    CHECK_THAT(pd.nu[0], WithinAbs(1.0 / golden, 1e-10));
    CHECK_THAT(pd.nu[1], WithinAbs(1.0 - 1.0 / golden, 1e-10));
}

TEST_CASE("rauzy matrix agrees with a bisection oracle", "[perron]") {
    double root = bisect_root(plastic_like, 1.0, 2.0);
    CHECK_THAT(root * root * root - root * root - 1.0, WithinAbs(0.0, 1e-12));
    perron_data pd = analyze_matrix(builtin_matrix("rauzy"));
    CHECK_THAT(pd.mu, WithinAbs(root, 1e-9));
    // determinant 1 forces the complex pair onto the circle of radius 1/sqrt(mu)
    CHECK_THAT(pd.second_modulus, WithinAbs(1.0 / std::sqrt(root), 1e-9));
    CHECK(pd.second_modulus < 1.0);
    // right eigenvector is proportional to (mu, 1, mu^2)
    double s = pd.right[1];
    CHECK_THAT(pd.right[0] / s, WithinAbs(root, 1e-8));
    CHECK_THAT(pd.right[2] / s, WithinAbs(root * root, 1e-8));
}

TEST_CASE("eigenvector residuals are tiny for every builtin matrix", "[perron]") {
    for (const std::string& name : builtin_matrix_names()) {
        INFO(name);
        intmatrix m = builtin_matrix(name);
        perron_data pd = analyze_matrix(m);
        int n = m.size();
        std::vector<double> d = m.to_doubles();
        double dot = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i) {
            double rv = 0.0, lv = 0.0;
            for (int j = 0; j < n; ++j) {
                rv += d[static_cast<size_t>(i) * n + j] * pd.right[j];
                lv += d[static_cast<size_t>(j) * n + i] * pd.left[j];
            }
            CHECK_THAT(rv - pd.mu * pd.right[i], WithinAbs(0.0, 1e-9 * pd.mu));
            CHECK_THAT(lv - pd.mu * pd.left[i], WithinAbs(0.0, 1e-9 * pd.mu));
            CHECK(pd.right[i] > 0.0);
            CHECK(pd.left[i] > 0.0);
            dot += pd.right[i] * pd.left[i];
            scale += pd.right[i];
        }
        CHECK_THAT(dot, WithinAbs(1.0, 1e-9));
        double nu_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK_THAT(pd.nu[i], WithinAbs(pd.right[i] / scale, 1e-12));
            nu_sum += pd.nu[i];
        }
        CHECK_THAT(nu_sum, WithinAbs(1.0, 1e-12));
        // cluster multiplicities account for the whole spectrum
        int total = 0;
        for (const eigen_cluster& c : pd.spectrum) total += c.multiplicity;
        CHECK(total == n);
    }
}

TEST_CASE("analyze_matrix rejects non-primitive input", "[perron]") {
    CHECK_THROWS_AS(analyze_matrix(intmatrix::from_rows({{0, 1}, {1, 0}})), std::domain_error);
    CHECK_THROWS_AS(analyze_matrix(intmatrix::from_rows({{2, 1}, {0, 2}})), std::domain_error);
    CHECK_THROWS_AS(analyze_matrix(intmatrix::identity(2)), std::domain_error);
}

TEST_CASE("semisimplicity judged numerically and exactly", "[perron]") {
    intmatrix sym = builtin_matrix("square");
    CHECK(semisimple_at_modulus(sym, 2.0));
    CHECK(semisimple_by_polynomial(sym, {-2, 1}));  // x - 2

    intmatrix defective = intmatrix::from_rows({{1, 1}, {0, 1}});
    CHECK_FALSE(semisimple_at_modulus(defective, 1.0));
    CHECK_FALSE(semisimple_by_polynomial(defective, {-1, 1}));  // x - 1

    CHECK(semisimple_by_polynomial(intmatrix::identity(3), {-1, 1}));
}

TEST_CASE("regime classification", "[perron]") {
    regime_report pin = classify_regime(builtin_matrix("pinwheel"), std::sqrt(5.0));
    CHECK(pin.kind == regime::linear);
    CHECK_THAT(pin.second_modulus, WithinAbs(1.0, 1e-9));

    regime_report tab = classify_regime(builtin_matrix("table"), 2.0);
    CHECK(tab.kind == regime::linear);

    regime_report sq = classify_regime(builtin_matrix("square"), 2.0);
    CHECK(sq.kind == regime::linear_log);
    CHECK(sq.semisimple);

    regime_report pen = classify_regime(builtin_matrix("penrose2"), golden);
    CHECK(pen.kind == regime::linear);

    regime_report rz = classify_regime(builtin_matrix("rauzy"),
                                       std::sqrt(analyze_matrix(builtin_matrix("rauzy")).mu));
    CHECK(rz.kind == regime::linear);

    regime_report bad = classify_regime(intmatrix::from_rows({{2, 1}, {0, 2}}), 2.0);
    CHECK(bad.kind == regime::unsupported);
    CHECK_FALSE(bad.witness.empty());

    CHECK(std::string(regime_name(regime::linear)) == "Linear");
    CHECK(std::string(regime_name(regime::linear_log)) == "LinearLog");
    CHECK(std::string(regime_name(regime::unsupported)) == "Unsupported");
}

TEST_CASE("frequency deviation tracks the second eigenvalue", "[perron]") {
    // pinwheel: M^l = 5^l P + (-1)^l Q with Q = [[.5,-.5],[-.5,.5]], so the
    // deviation is exactly 1/2 at every level
    for (unsigned l : {1u, 3u, 6u, 10u}) {
        CHECK_THAT(frequency_deviation(builtin_matrix("pinwheel"), l), WithinAbs(0.5, 1e-6));
    }
    // table: M^l is exactly nu_i * colsum from level 1 on
    CHECK_THAT(frequency_deviation(builtin_matrix("table"), 6), WithinAbs(0.0, 1e-6));
    // square: deviation grows like 2^l, the second eigenvalue
    double d4 = frequency_deviation(builtin_matrix("square"), 4);
    double d8 = frequency_deviation(builtin_matrix("square"), 8);
    CHECK(d8 > 8.0 * d4);
    CHECK(d8 < 32.0 * d4);
    // rauzy: second modulus below 1, deviation must vanish with level
    CHECK(frequency_deviation(builtin_matrix("rauzy"), 30) < 1e-2);
    CHECK(frequency_deviation(builtin_matrix("rauzy"), 30) <
          frequency_deviation(builtin_matrix("rauzy"), 5));
}
