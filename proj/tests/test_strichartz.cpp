#include "doctest.h"

#include <cmath>
#include <sstream>

#include "wbd/dyadic.hpp"
#include "wbd/error.hpp"
#include "wbd/strichartz.hpp"

using namespace wbd;

TEST_SUITE("strichartz") {

TEST_CASE("exponent arithmetic") {
    CHECK(Exponent::parse("8/3").to_string() == "8/3");
    CHECK(Exponent::parse("6/3").to_string() == "2");
    CHECK(Exponent::parse("inf").is_infinite());
    CHECK_THROWS_AS(Exponent::parse("x"), DomainError);
    CHECK_THROWS_AS(Exponent(0), DomainError);
    CHECK(paired_space_exponent(2, Exponent(4)) == Exponent(4));
    CHECK(paired_space_exponent(1, Exponent(8)) == Exponent(4));
    CHECK(paired_space_exponent(2, Exponent(3)) == Exponent(6));
    CHECK_THROWS_AS(paired_space_exponent(1, Exponent(4)), DomainError);
}

TEST_CASE("admissibility") {
    CHECK(admissible(2, Exponent(4), Exponent(4)));
    CHECK(admissible(1, Exponent(8), Exponent(4)));
    CHECK_FALSE(admissible(2, Exponent(2), Exponent::infinity()));
    CHECK(admissible(1, Exponent(4), Exponent::infinity()));
    CHECK(admissible(3, Exponent(5, 2), Exponent(30, 7)));
    CHECK_FALSE(admissible(2, Exponent(4), Exponent(5)));
    CHECK_FALSE(admissible(1, Exponent(8), Exponent(3, 2)));
    for (int d : {1, 2, 3})
        for (int q = 5; q < 40; ++q) CHECK(admissible(d, Exponent(q), paired_space_exponent(d, Exponent(q))));
}

TEST_CASE("beta = 0 prefactor identity") {
    for (int j = -3; j <= 3; ++j) {
        const DyadicScale lam(j);
        const double l = lam.value();
        CHECK(std::abs(beta0_prefactor_ratio(2, lam, Exponent(4)) - 1.0) <= 1e-12);
        CHECK(std::abs(std::pow(c_coeff(SymbolParams(0), 2, lam), 0.25) - std::pow(bracket(l), 0.375)) <= 1e-12);
        for (int d : {1, 3}) {
            const double expect = std::pow(l / bracket(l), (d - 2.0) / (8.0 * d));
            CHECK(beta0_prefactor_ratio(d, lam, Exponent(8)) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("single exact-annulus mode has the closed-form ratio") {
    const DyadicScale lam(0);
    const GridSpec g = strichartz_grid(1, lam);
    SpectralField f(g);
    const int k = static_cast<int>(std::lround(lam.value() / g.fundamental()));
    f.at({k, 0}) = cplx(0.3, -0.4);
    StrichartzSetup s;
    s.d = 1;
    s.lambda = lam;
    s.q = Exponent(8);
    s.r = Exponent(4);
    s.T = 3.0;
    const double L = g.length();
    const double expect = std::pow(s.T, 1.0 / 8) * std::pow(L, 0.25 - 0.5) /
                          strichartz_prefactor(SymbolParams(0), 1, lam, s.q);
    CHECK(strichartz_ratio_one(s, f) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("ratio invariances and monotonicity in T") {
    const DyadicScale lam(1);
    const GridSpec g = strichartz_grid(2, lam);
    const auto samples = random_localized_samples(g, lam, 3, 99);
    StrichartzSetup s;
    s.lambda = lam;
    const double base = strichartz_ratio_one(s, samples[0]);
    CHECK(strichartz_ratio_one(s, std::polar(1.0, 0.8) * samples[0]) == doctest::Approx(base).epsilon(1e-12));
    CHECK(strichartz_ratio_one(s, cplx(7.5) * samples[0]) == doctest::Approx(base).epsilon(1e-12));
    double prev = 0.0;
    for (double T : {0.5, 1.0, 2.0, 4.0}) {
        s.T = T;
        const double r = strichartz_ratio_one(s, samples[1]);
        CHECK(r >= prev);
        prev = r;
    }
    CHECK(strichartz_ratio(s, samples) >= strichartz_ratio_one(s, samples[2]));
    s.r = Exponent(5);
    CHECK_THROWS_AS(strichartz_ratio(s, samples), DomainError);
    s.r = Exponent(4);
    CHECK_THROWS_AS(strichartz_ratio(s, std::span<const SpectralField>{}), DomainError);
}

TEST_CASE("random samples are deterministic and localized") {
    const DyadicScale lam(0);
    const GridSpec g = strichartz_grid(2, lam);
    const auto a = random_localized_samples(g, lam, 4, 5);
    const auto b = random_localized_samples(g, lam, 2, 5);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(a[1].coeffs()[i] == b[1].coeffs()[i]);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.xi_norm(i) <= 0.5 || g.xi_norm(i) >= 2.0) CHECK(a[0].coeffs()[i] == cplx(0.0));
}

TEST_CASE("Lambda membership") {
    CHECK(in_Lambda(DyadicScale(0), DyadicScale(0), DyadicScale(0)));
    CHECK(in_Lambda(DyadicScale(-4), DyadicScale(0), DyadicScale(0)));
    CHECK(in_Lambda(DyadicScale(2), DyadicScale(0), DyadicScale(2)));
    CHECK(in_Lambda(DyadicScale(-5), DyadicScale(0), DyadicScale(2)));
    CHECK_FALSE(in_Lambda(DyadicScale(3), DyadicScale(0), DyadicScale(0)));
    CHECK_FALSE(in_Lambda(DyadicScale(-4), DyadicScale(0), DyadicScale(3)));
}

TEST_CASE("projected product vanishes outside Lambda") {
    const DyadicScale l0(3), l1(0), l2(0);
    const GridSpec g = bilinear_grid(2, l0, l1, l2);
    const auto u = random_localized_samples(g, l1, 1, 1)[0];
    const auto v = random_localized_samples(g, l2, 1, 2)[0];
    for (int variant : {1, 2}) {
        const double full = unprojected_product(variant, u, v).l2_norm();
        CHECK(full > 0.0);
        CHECK(projected_product(variant, l0, u, v).l2_norm() <= 1e-10 * full);
    }
    BilinearSetup s;
    s.l0 = l0;
    s.l1 = l1;
    s.l2 = l2;
    std::vector<SpectralField> us{u}, vs{v};
    CHECK_THROWS_AS(bilinear_ratio(s, us, vs), DomainError);
}

TEST_CASE("two-mode product matches hand convolution") {
    const DyadicScale l0(0), l1(0), l2(0);
    const GridSpec g = bilinear_grid(2, l0, l1, l2);
    const double f = g.fundamental();
    const std::array<int, 2> k1{3, 1}, k2{1, 3};
    const std::array<int, 2> k{k1[0] + k2[0], k1[1] + k2[1]};
    SpectralField u(g), v(g);
    const cplx a(0.7, 0.2), b(-0.3, 0.5);
    u.at(k1) = a;
    v.at(k2) = b;
    const double n2 = f * std::hypot(k2[0], k2[1]);
    const double n = f * std::hypot(k[0], k[1]);
    const double dot = f * f * (k[0] * k2[0] + k[1] * k2[1]);
    const double n1 = f * std::hypot(k1[0], k1[1]);
    const double dot12 = f * f * (k1[0] * k2[0] + k1[1] * k2[1]);
    const double bump = rho(CutoffSpec{}, n / l0.value());
    const double K = std::tanh(n) / n, sqrtK2 = std::sqrt(std::tanh(n2) / n2), sqrtK1 = std::sqrt(std::tanh(n1) / n1);

    // R.(u R sqrt(K) v): (i xi/|xi|).(i xi2/|xi2|) = -xi.xi2 / (|xi||xi2|).
    const cplx one = n * K * bump * (-dot / (n * n2)) * sqrtK2 * a * b;
    // (R sqrt(K) u).(R sqrt(K) v) = -xi1.xi2 / (|xi1||xi2|) sqrt(K1 K2) a b.
    const cplx two = n * std::sqrt(K) * bump * (-dot12 / (n1 * n2)) * sqrtK1 * sqrtK2 * a * b;

    const auto p1 = projected_product(1, l0, u, v);
    const auto p2 = projected_product(2, l0, u, v);
    CHECK(std::abs(p1.at(k) - one) <= 1e-12);
    CHECK(std::abs(p2.at(k) - two) <= 1e-12);
    double rest = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (i != g.flat_index(k)) rest = std::max({rest, std::abs(p1.coeffs()[i]), std::abs(p2.coeffs()[i])});
    CHECK(rest <= 1e-14);
}

TEST_CASE("bilinear ratio is stable under sample doubling") {
    const DyadicScale l0(0), l1(0), l2(1);
    const GridSpec g = bilinear_grid(2, l0, l1, l2);
    const auto us = random_localized_samples(g, l1, 24, 10);
    const auto vs = random_localized_samples(g, l2, 24, 20);
    for (int variant : {1, 2}) {
        BilinearSetup s;
        s.variant = variant;
        s.l0 = l0;
        s.l1 = l1;
        s.l2 = l2;
        s.n_t = 17;
        const double half = bilinear_ratio(s, std::span(us).first(12), std::span(vs).first(12));
        const double full = bilinear_ratio(s, us, vs);
        CHECK(std::isfinite(full));
        CHECK(full > 0.0);
        CHECK(std::abs(full - half) <= 0.2 * half);
    }
}

TEST_CASE("d = 1 bilinear probe needs q > 4") {
    const DyadicScale l(0);
    const GridSpec g = bilinear_grid(1, l, l, l);
    const auto us = random_localized_samples(g, l, 2, 1);
    BilinearSetup s;
    s.d = 1;
    s.q = Exponent(4);
    CHECK_THROWS_AS(bilinear_ratio(s, us, us), DomainError);
    s.q = Exponent(8);
    CHECK(bilinear_ratio(s, us, us) > 0.0);
}

TEST_CASE("ratio CSV") {
    std::ostringstream out;
    std::vector<RatioRow> rows{{2, 0, {1.0, 0.5, 2.0}, Exponent(4), Exponent(4), 1.0, 0.125, 200}};
    write_ratio_csv(out, rows);
    CHECK(out.str() == "d,beta,lambda,q,r,T,ratio,n_samples\n2,0,1;0.5;2,4,4,1,0.125,200\n");
}

}
