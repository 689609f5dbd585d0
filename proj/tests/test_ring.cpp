#include "test_util.hpp"

#include <doctest.h>

#include <numbers>

using namespace turnplate;
using namespace turnplate::testutil;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("ring") {

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(RingSpec::uniform(4, 1.0, 0.0), InvalidSpec);
    CHECK_THROWS_AS(RingSpec::uniform(1, 1.0, 0.0), InvalidSpec);
    CHECK_THROWS_AS(RingSpec(3, {{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}), InvalidSpec);
    CHECK_THROWS_AS(RingSpec(3, {{1.0, 0.0}, {-1.0, 0.0}, {1.0, 0.0}}), InvalidSpec);
    CHECK_THROWS_AS(RingSpec(3, {{1.0, 0.0}, {1.0, 0.0}}), InvalidSpec);
}

TEST_CASE("triangle adjacency matrix") {
    const auto h = build_hamiltonian(RingSpec::uniform(3, 1.0, 0.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(h(i, j) == (i == j ? 0.0 : Complex(1.0)));
}

TEST_CASE("hamiltonian layout for uniform phase pi/6") {
    const auto h = build_hamiltonian(RingSpec::uniform(3, 1.0, pi / 2));
    CHECK(std::abs(h(0, 1) - std::polar(1.0, pi / 6)) < 1e-15);
    CHECK(std::abs(h(0, 2) - std::polar(1.0, -pi / 6)) < 1e-15);
    CHECK(std::abs(h(2, 0) - std::polar(1.0, pi / 6)) < 1e-15);
}

TEST_CASE("construction is exactly hermitian") {
    auto rng = make_rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = build_hamiltonian(random_spec(rng, 9));
        CHECK(max_abs_diff(h, adjoint(h)) == 0.0);
    }
}

TEST_CASE("total phase") {
    CHECK(total_phase(RingSpec::uniform(5, 1.0, 0.0)) == 0.0);
    CHECK(total_phase(RingSpec::uniform(3, 1.0, pi / 2)) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(total_phase(RingSpec::uniform(9, 2.0, pi / 2)) == doctest::Approx(pi / 2).epsilon(1e-14));
    // reduction into (-pi, pi]
    std::vector<Link> links(9, Link{1.0, 2.0});
    CHECK(total_phase(RingSpec(9, links)) ==
          doctest::Approx(normalize_phase(18.0)).epsilon(1e-14));
}

TEST_CASE("gauge normalize: already uniform gives the identity gauge") {
    const auto [spec, gauge] = gauge_normalize(RingSpec::uniform(5, 1.0, 1.0));
    for (const double chi : gauge.site_phases) CHECK(chi == 0.0);
    CHECK(gauge.phase_sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gauge normalize spreads a concentrated phase") {
    const RingSpec skew(3, {{1.0, pi / 2}, {1.0, 0.0}, {1.0, 0.0}});
    const auto [spec, gauge] = gauge_normalize(skew);
    for (const auto& link : spec.links()) {
        CHECK(link.mag == 1.0);
        CHECK(link.phase == doctest::Approx(pi / 6).epsilon(1e-14));
    }
    const auto d = gauge_matrix(gauge);
    const auto transformed = matmul(matmul(d, build_hamiltonian(skew)), adjoint(d));
    CHECK(max_abs_diff(build_hamiltonian(spec), transformed) < 1e-12);
}

TEST_CASE("gauge normalize on random specs") {
    auto rng = make_rng(11);
    for (const int n : {3, 7, 15}) {
        const auto spec = random_spec(rng, n);
        const auto [normalized, gauge] = gauge_normalize(spec);
        const auto d = gauge_matrix(gauge);
        const auto transformed = matmul(matmul(d, build_hamiltonian(spec)), adjoint(d));
        CHECK(max_abs_diff(build_hamiltonian(normalized), transformed) < 1e-12);
    }
}

TEST_CASE("uniform ring spectrum oracle values") {
    const auto s = uniform_ring_spectrum(3, 1.0, pi / 2);
    CHECK(std::abs(s[0] + std::sqrt(3.0)) < 1e-14);
    CHECK(std::abs(s[1]) < 1e-14);
    CHECK(std::abs(s[2] - std::sqrt(3.0)) < 1e-14);
    const auto t = uniform_ring_spectrum(3, 1.0, 0.0);
    CHECK(t[0] == doctest::Approx(-1.0));
    CHECK(t[1] == doctest::Approx(-1.0));
    CHECK(t[2] == doctest::Approx(2.0));
}

TEST_CASE("uniform ring spectrum agrees with the eigensolver") {
    auto rng = make_rng(12);
    std::uniform_real_distribution<double> phase(-pi, pi);
    for (const int n : {3, 5, 7, 9, 11, 13, 15}) {
        const double phi = phase(rng);
        const auto analytic = uniform_ring_spectrum(n, 1.0, phi);
        const auto eig = hermitian_eig(build_hamiltonian(RingSpec::uniform(n, 1.0, phi)));
        for (int k = 0; k < n; ++k) CHECK(std::abs(analytic[k] - eig.values[k]) < 1e-10);
    }
}

TEST_CASE("dynamics are gauge invariant") {
    auto rng = make_rng(13);
    std::uniform_real_distribution<double> ph(-pi, pi);
    const auto spec = random_spec(rng, 7);
    const auto h = build_hamiltonian(spec);
    // arbitrary site-local phases
    ComplexMatrix d(7);
    for (int i = 0; i < 7; ++i) d(i, i) = std::polar(1.0, ph(rng));
    const auto h2 = matmul(matmul(d, h), adjoint(d));
    Vec psi0(7, 0.0);
    psi0[2] = 1.0;
    for (const double t : {0.3, 1.7, 9.2}) {
        const auto a = matvec(propagator(h, t), psi0);
        const auto b = matvec(propagator(h2, t), psi0);
        for (int i = 0; i < 7; ++i) CHECK(std::abs(std::norm(a[i]) - std::norm(b[i])) < 1e-10);
    }
}

TEST_CASE("spectrum depends only on magnitudes and total phase") {
    auto rng = make_rng(14);
    const auto spec = random_spec(rng, 9);
    // same magnitudes, phases redistributed with the same total
    std::uniform_real_distribution<double> ph(-pi, pi);
    std::vector<Link> links = spec.links();
    double shift = 0.0;
    for (int l = 0; l + 1 < 9; ++l) {
        const double delta = ph(rng) * 0.1;
        links[l].phase = normalize_phase(links[l].phase + delta);
        shift += delta;
    }
    links[8].phase = normalize_phase(links[8].phase - shift);
    const RingSpec other(9, links);
    const auto a = hermitian_eig(build_hamiltonian(spec)).values;
    const auto b = hermitian_eig(build_hamiltonian(other)).values;
    for (int k = 0; k < 9; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10);
}

TEST_CASE("json round trip") {
    auto rng = make_rng(15);
    const auto spec = random_spec(rng, 5);
    const auto again = parse_spec(dump_spec(spec));
    CHECK(dump_spec(again) == dump_spec(spec));
    const auto uniform = parse_spec("{\"n_sites\": 3, \"uniform\": {\"mag\": 1.0, "
                                    "\"total_phase\": 1.5707963267948966}}");
    CHECK(uniform.links()[0].phase == doctest::Approx(pi / 6).epsilon(1e-14));
    CHECK_THROWS_AS(parse_spec("{\"n_sites\": 3}"), InvalidSpec);
    CHECK_THROWS_AS(parse_spec("not json"), InvalidSpec);
}

}
