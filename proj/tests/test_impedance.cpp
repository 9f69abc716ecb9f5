#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ris/impedance.hpp"

using namespace ris;
using ris::test::kFrequency;
using ris::test::kK;
using ris::test::kLambda;

TEST_CASE("notable_integral: empty interval") {
    CHECK(notable_integral({1, 0.3, 0.1, 0.2, 0.2}, kK) == Complex{0.0, 0.0});
}

TEST_CASE("notable_integral matches its defining integral") {
    const KernelIntegralArgs args{1, 0.5 * kLambda, 0.0, -kLambda / 4.0, kLambda / 4.0};
    const Complex closed = notable_integral(args, kK);
    const Complex quad = oracle::notable_integral_quadrature(args, kK);
    CHECK(relative_difference(closed, quad) <= 1e-9);
}

TEST_CASE("notable_integral reflection identity") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> d(0.01, 3.0), z(-2.0, 2.0), len(0.01, 1.0);
    for (int i = 0; i < 20; ++i) {
        const int s0 = i % 2 == 0 ? 1 : -1;
        const double lo = z(rng) * kLambda;
        const KernelIntegralArgs args{s0, d(rng) * kLambda, z(rng) * kLambda, lo, lo + len(rng) * kLambda};
        const KernelIntegralArgs mirrored{-s0, args.d0, -args.z0, -args.upper, -args.lower};
        const Complex a = notable_integral(args, kK);
        const Complex b = notable_integral(mirrored, kK);
        CHECK(relative_difference(a, b) <= 1e-12);
        CHECK(relative_difference(a, oracle::notable_integral_quadrature(args, kK)) <= 1e-9);
    }
}

TEST_CASE("notable_integral: close to the axis, far along it") {
    // s0 (t - z0) << 0 is where the naive L0 form cancels catastrophically.
    const KernelIntegralArgs args{1, 1e-3 * kLambda, 5.0 * kLambda, 0.0, 0.25 * kLambda};
    CHECK(relative_difference(notable_integral(args, kK), oracle::notable_integral_quadrature(args, kK)) <= 1e-9);
}

TEST_CASE("notable_integral degenerate and invalid arguments") {
    CHECK_THROWS_AS(notable_integral({1, 0.0, 0.0, 0.0, 0.1}, kK), DegenerateGeometry);
    CHECK_THROWS_AS(notable_integral({1, 0.5e-6 * kLambda, 0.0, 0.0, 0.1}, kK), DegenerateGeometry);
    CHECK_THROWS_AS(notable_integral({0, 0.1, 0.0, 0.0, 0.1}, kK), InputError);
    CHECK_THROWS_AS(notable_integral({1, 0.1, 0.0, 0.2, 0.1}, kK), InputError);
    CHECK_THROWS_AS(notable_integral({1, 0.1, 0.0, 0.0, 0.1}, -1.0), InputError);
}

TEST_CASE("kernel_integral matches quadrature of the two-piece integral") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> h(0.1, 0.45), rho(0.0002, 3.0), dz(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const PairGeometry g{rho(rng) * kLambda, dz(rng) * kLambda, h(rng) * kLambda, h(rng) * kLambda};
        const double xi = std::array{-g.h_p, 0.0, g.h_p}[i % 3];
        const int s0 = (i / 3) % 2 == 0 ? 1 : -1;
        CAPTURE(i);
        CHECK(relative_difference(kernel_integral(xi, s0, g, kK),
                                  oracle::kernel_integral_quadrature(xi, s0, g, kK)) <= 1e-9);
    }
}

TEST_CASE("kernel_integral vanishes with the observing wire") {
    const PairGeometry g{0.3 * kLambda, 0.1 * kLambda, 0.25 * kLambda, 1e-12 * kLambda};
    const Complex v = kernel_integral(0.0, 1, g, kK);
    // |I| <= 2 h_q / rho for a vanishing interval.
    CHECK(std::abs(v) <= 2.0 * g.h_q / g.rho * 1.0001);
}

TEST_CASE("kernel_integral halves coincide at dz = 0, xi = 0") {
    // z -> -z maps the lower half-wire term onto the upper one.
    for (double rho : {0.001, 0.1, 1.7}) {
        const PairGeometry g{rho * kLambda, 0.0, 0.3 * kLambda, 0.2 * kLambda};
        for (int s0 : {-1, 1}) {
            const Complex lower = notable_integral({-s0, g.rho, 0.0, -g.h_q, 0.0}, kK);
            const Complex upper = notable_integral({s0, g.rho, 0.0, 0.0, g.h_q}, kK);
            CHECK(relative_difference(lower, upper) <= 1e-12);
            CHECK(relative_difference(kernel_integral(0.0, s0, g, kK), 2.0 * upper) <= 1e-12);
            CHECK(relative_difference(kernel_integral(0.0, s0, g, kK),
                                      oracle::kernel_integral_quadrature(0.0, s0, g, kK)) <= 1e-9);
        }
    }
}

TEST_CASE("closed_field matches finite differences of the potential integral") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> h(0.1, 0.45), rho(0.1, 2.0), dz(-1.0, 1.0), zr(-1.0, 1.0);
    for (int i = 0; i < 8; ++i) {
        const PairGeometry g{rho(rng) * kLambda, dz(rng) * kLambda, h(rng) * kLambda, 0.25 * kLambda};
        const double z = zr(rng) * g.h_q;
        const Complex fd = oracle::field_finite_difference(z, g, kK, 1e-4 * kLambda);
        CAPTURE(i);
        CHECK(relative_difference(closed_field(z, g, kK), fd) <= 1e-4);
    }
}

TEST_CASE("closed_field: half-wave source drops the centre term") {
    const PairGeometry g{0.2 * kLambda, 0.0, kLambda / 4.0, kLambda / 4.0};
    const double z = 0.05 * kLambda;
    auto wave = [&](double r) { return std::exp(Complex{0.0, -kK * r}) / r; };
    const Complex two_terms =
        kK * (wave(std::hypot(g.rho, z - g.h_p)) + wave(std::hypot(g.rho, z + g.h_p)));
    CHECK(relative_difference(closed_field(z, g, kK), two_terms) <= 1e-14);
}

TEST_CASE("closed_field: spherical spreading far away") {
    const PairGeometry near{10.0 * kLambda, 0.0, 0.3 * kLambda, 0.25 * kLambda};
    PairGeometry far = near;
    far.rho = 100.0 * kLambda;
    const double ratio = std::abs(closed_field(0.0, near, kK)) / std::abs(closed_field(0.0, far, kK));
    CHECK(std::abs(ratio - 10.0) <= 1.5);
}

TEST_CASE("closed_field guards") {
    const PairGeometry g{0.2, 0.0, kLambda / 2.0, 0.25};
    CHECK_THROWS_AS(closed_field(0.0, g, kK), ResonantLength);
    const PairGeometry axial{0.0, 0.0, 0.25, 0.25};
    CHECK_THROWS_AS(closed_field(0.0, axial, kK), DegenerateGeometry);
}

TEST_CASE("half-wave self impedance") {
    const Dipole d = test::half_wave({});
    const Complex closed = mutual_impedance(d, d, true, kK);
    const Complex ref = mutual_impedance_oracle(d, d, true, kK, 1e-9);
    CHECK(relative_difference(closed, ref) <= 1e-6);
    CHECK(closed.real() > 60.0);
    CHECK(closed.real() < 90.0);
    CHECK(closed.imag() > 20.0);
    CHECK(closed.imag() < 60.0);
}

TEST_CASE("side-by-side half-wave pair at lambda/2") {
    const Dipole p = test::half_wave({});
    const Dipole q = test::half_wave({kLambda / 2.0, 0.0, 0.0});
    const Complex closed = mutual_impedance(p, q, false, kK);
    CHECK(relative_difference(closed, mutual_impedance_oracle(p, q, false, kK, 1e-9)) <= 1e-6);
    // Classical corridor for this spacing: about -12.5 - j29.9 ohms.
    CHECK(closed.real() == doctest::Approx(-12.5).epsilon(0.05));
    CHECK(closed.imag() == doctest::Approx(-29.9).epsilon(0.05));
}

TEST_CASE("mutual impedance reciprocity") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        const auto draw = test::random_pair(rng, kFrequency);
        const Complex pq = mutual_impedance(draw.p, draw.q, false, kK);
        const Complex qp = mutual_impedance(draw.q, draw.p, false, kK);
        CHECK(relative_difference(pq, qp) <= 1e-8);
    }
}

TEST_CASE("mutual impedance resonant-length guard") {
    const Dipole p = make_dipole({}, kLambda / 2.0, kLambda / 2000.0);
    const Dipole q = test::half_wave({0.3, 0.0, 0.0});
    CHECK_THROWS_AS(mutual_impedance(p, q, false, kK), ResonantLength);
    CHECK_THROWS_AS(mutual_impedance(q, p, false, kK), ResonantLength);
    CHECK_THROWS_AS(mutual_impedance_oracle(p, q, false, kK), ResonantLength);
}

TEST_CASE("collinear pair uses the quadrature path") {
    const Dipole p = test::half_wave({});
    const Dipole q = test::half_wave({0.0, 0.0, kLambda});
    CHECK_THROWS_AS(mutual_impedance_closed(pair_geometry(p, q, false), kK), DegenerateGeometry);
    const Complex z = mutual_impedance(p, q, false, kK);
    CHECK(is_finite(z));
    CHECK(z == mutual_impedance_oracle(p, q, false, kK));
    // A hair off the axis the closed form is back and must agree.
    const Dipole q_off = test::half_wave({1e-4 * kLambda, 0.0, kLambda});
    CHECK(relative_difference(mutual_impedance(p, q_off, false, kK), z) <= 1e-5);
}

TEST_CASE("oracle tolerance monotonicity") {
    const Dipole p = test::half_wave({});
    const Dipole q = make_dipole({0.3 * kLambda, 0.1, 0.2}, 0.2 * kLambda, 0.001);
    const Complex loose = mutual_impedance_oracle(p, q, false, kK, 1e-3);
    const Complex tight = mutual_impedance_oracle(p, q, false, kK, 1e-9);
    CHECK(relative_difference(loose, tight) <= 1e-3);
}

TEST_CASE("assemble: single element") {
    const Scene s = test::grid_scene(1, 1, 0.5);
    const ImpedanceSet imps = assemble_impedances(s);
    REQUIRE(imps.size() == 1);
    CHECK(imps.z_ss(0, 0).real() > 0.0);
    CHECK(imps.z_ss(0, 0) == mutual_impedance(s.surface[0], s.surface[0], true, s.wavenumber()));
    CHECK(imps.z_rs(0) == mutual_impedance(s.surface[0], s.receiver, false, s.wavenumber()));
    CHECK(imps.z_st(0) == mutual_impedance(s.transmitter, s.surface[0], false, s.wavenumber()));
    CHECK(imps.z_rt == mutual_impedance(s.transmitter, s.receiver, false, s.wavenumber()));
}

TEST_CASE("assemble: 2x2 grid symmetric with equal diagonal") {
    const ImpedanceSet imps = assemble_impedances(test::grid_scene(2, 2, 0.125));
    for (Eigen::Index q = 0; q < 4; ++q) {
        CHECK(imps.z_ss(q, q) == imps.z_ss(0, 0));
        CHECK(imps.z_ss(q, q).real() > 0.0);
        for (Eigen::Index p = 0; p < 4; ++p) {
            CHECK(std::abs(imps.z_ss(q, p) - imps.z_ss(p, q)) <= 1e-8 * std::max(1.0, std::abs(imps.z_ss(q, p))));
        }
    }
}

TEST_CASE("assemble: mirror and translation invariance") {
    const Scene s = test::grid_scene(3, 2, 0.15);
    const ImpedanceSet base = assemble_impedances(s);

    Scene mirrored = s;
    for (Dipole* d : {&mirrored.transmitter, &mirrored.receiver}) d->center.x = -d->center.x;
    for (Dipole& d : mirrored.surface) d.center.x = -d.center.x;
    const ImpedanceSet m = assemble_impedances(mirrored);
    CHECK((m.z_ss - base.z_ss).cwiseAbs().maxCoeff() <= 1e-12 * base.z_ss.cwiseAbs().maxCoeff());

    Scene shifted = s;
    const Vec3 offset{1.3, -0.7, 2.1};
    for (Dipole* d : {&shifted.transmitter, &shifted.receiver}) d->center = d->center + offset;
    for (Dipole& d : shifted.surface) d.center = d.center + offset;
    const ImpedanceSet t = assemble_impedances(shifted);
    CHECK(relative_difference(t.z_rt, base.z_rt) <= 1e-10);
    CHECK((t.z_ss - base.z_ss).cwiseAbs().maxCoeff() <= 1e-10 * base.z_ss.cwiseAbs().maxCoeff());
    CHECK((t.z_rs - base.z_rs).cwiseAbs().maxCoeff() <= 1e-10 * base.z_rs.cwiseAbs().maxCoeff());
    CHECK((t.z_st - base.z_st).cwiseAbs().maxCoeff() <= 1e-10 * base.z_st.cwiseAbs().maxCoeff());
}

TEST_CASE("assemble: threaded result identical to sequential") {
    const Scene s = test::grid_scene(4, 4, 0.125);
    const ImpedanceSet one = assemble_impedances(s, {kDefaultOracleTolerance, 1});
    const ImpedanceSet many = assemble_impedances(s, {kDefaultOracleTolerance, 8});
    CHECK(one.z_ss == many.z_ss);
    CHECK(one.z_rs == many.z_rs);
    CHECK(one.z_st == many.z_st);
    CHECK(one.z_rt == many.z_rt);
}

TEST_CASE("assemble: self terms dominate at spacings >= lambda/10") {
    for (double spacing : {0.1, 0.25, 0.5}) {
        const ImpedanceSet imps = assemble_impedances(test::grid_scene(3, 3, spacing));
        for (Eigen::Index q = 0; q < 9; ++q) {
            for (Eigen::Index p = 0; p < 9; ++p) {
                if (p != q) CHECK(std::abs(imps.z_ss(q, q)) >= std::abs(imps.z_ss(q, p)));
            }
        }
    }
}

TEST_CASE("self impedance has positive resistance across lengths") {
    for (double kh : {0.3, 0.8, 1.2, kPi / 2.0, 2.0, 2.6, 3.0}) {
        const double h = kh / kK;
        const Dipole d = make_dipole({}, h, h / 200.0);
        CAPTURE(kh);
        CHECK(mutual_impedance(d, d, true, kK).real() > 0.0);
    }
}

TEST_CASE("assemble propagates the resonant-length error") {
    Scene s = test::grid_scene(1, 2, 0.5);
    s.surface[1].half_length = kLambda / 2.0;
    s.surface[1].radius = kLambda / 2000.0;
    CHECK_THROWS_AS(assemble_impedances(s), ResonantLength);
}
