#include "qpt/spectrum.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qpt;

namespace {
LatticeParams base5() {
    LatticeParams p;
    p.n_sites = 5;
    p.omega_f = 3.0;
    p.delta_f = 0.0;
    p.kappa = 1.0;
    return p;
}
}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("parameter validation rejects out-of-range values") {
    LatticeParams p = base5();
    CHECK_NOTHROW(p.validate());

    p.n_sites = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base5();
    p.kappa = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base5();
    p.beta = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base5();
    p.omega_f = 2.0;  // needs omega_f > 2*kappa for positive mode frequencies
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = base5();
    p.g = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("normal mode frequencies at the pinned points") {
    const auto modes = normal_modes(base5());
    REQUIRE(modes.size() == 5);
    CHECK(std::abs(modes[4].omega_k - (3.0 - std::sqrt(3.0))) < 1e-12);
    CHECK(std::abs(modes[2].omega_k - 3.0) < 1e-12);
    CHECK(std::abs(modes[3].omega_k - 2.0) < 1e-12);

    LatticeParams single = base5();
    single.n_sites = 1;
    const auto one = normal_modes(single);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one[0].omega_k - 3.0) < 1e-12);
}

TEST_CASE("normal modes are distinct and carry exact detunings") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> wf(2.5, 6.0), df(-1.0, 3.0);
    std::uniform_int_distribution<int> ns(1, 12);
    for (int trial = 0; trial < 50; ++trial) {
        LatticeParams p = base5();
        p.n_sites = ns(rng);
        p.omega_f = wf(rng);
        p.delta_f = df(rng);
        const auto modes = normal_modes(p);
        for (std::size_t i = 0; i < modes.size(); ++i) {
            CHECK(modes[i].delta_k == p.omega_a() - modes[i].omega_k);
            for (std::size_t j = i + 1; j < modes.size(); ++j)
                CHECK(std::abs(modes[i].omega_k - modes[j].omega_k) > 1e-9);
        }
    }
}

TEST_CASE("site-basis spectrum matches the mode decomposition") {
    for (int n : {2, 3, 5, 7}) {
        LatticeParams p = base5();
        p.n_sites = n;
        p.delta_f = 0.7;
        p.g = 1.3;
        const Eigen::MatrixXd h = oracle::site_basis_hamiltonian(p);
        const Eigen::VectorXd site =
            oracle::eigvals(Eigen::MatrixXd(h.bottomRightCorner(2 * n, 2 * n)));

        std::vector<double> dressed;
        for (const NormalMode& m : normal_modes(p)) {
            const DressedLevel d = dressed_level(p, m, 1);
            dressed.push_back(d.E_minus);
            dressed.push_back(d.E_plus);
        }
        std::sort(dressed.begin(), dressed.end());
        for (int i = 0; i < 2 * n; ++i) CHECK(std::abs(site[i] - dressed[i]) < 1e-10);
    }
}

TEST_CASE("dressed level structure on resonance") {
    LatticeParams p = base5();
    const auto modes = normal_modes(p);
    const NormalMode& res = modes[2];  // omega_k = omega_a = 3
    REQUIRE(std::abs(res.delta_k) < 1e-12);

    p.g = 1.0;
    const DressedLevel d1 = dressed_level(p, res, 1);
    CHECK(std::abs(d1.Omega_n - 2.0) < 1e-12);
    CHECK(std::abs(d1.a_n - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(d1.b_n - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(d1.E_plus - (res.omega_k + 1.0)) < 1e-12);
    CHECK(std::abs(d1.E_minus - (res.omega_k - 1.0)) < 1e-12);

    const DressedLevel d2 = dressed_level(p, res, 2);
    CHECK(std::abs(d2.Omega_n - std::sqrt(8.0)) < 1e-12);
}

TEST_CASE("dressed level invariants over random parameters") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> wf(2.5, 6.0), df(-1.0, 3.0), gg(0.0, 4.0);
    std::uniform_int_distribution<int> ns(1, 9), nn(1, 2);
    for (int trial = 0; trial < 200; ++trial) {
        LatticeParams p = base5();
        p.n_sites = ns(rng);
        p.omega_f = wf(rng);
        p.delta_f = df(rng);
        p.g = gg(rng);
        const auto modes = normal_modes(p);
        std::uniform_int_distribution<int> mi(0, static_cast<int>(modes.size()) - 1);
        const NormalMode& m = modes[mi(rng)];
        const int n = nn(rng);
        const DressedLevel d = dressed_level(p, m, n);
        CHECK(std::abs(d.a_n * d.a_n + d.b_n * d.b_n - 1.0) < 1e-12);
        CHECK(d.Omega_n >= std::abs(m.delta_k) - 1e-12);
        CHECK(d.E_plus >= d.E_minus);
        CHECK(std::abs(d.E_plus + d.E_minus - (2 * n * m.omega_k + m.delta_k)) <
              1e-12);
    }
}

TEST_CASE("weak coupling puts the excitation on the lower bare level") {
    LatticeParams p = base5();
    p.delta_f = 2.0;  // delta_k > 0 for every mode
    p.g = 1e-8;
    for (const NormalMode& m : normal_modes(p)) {
        const DressedLevel d = dressed_level(p, m, 1);
        CHECK(std::abs(d.a_n - 1.0) < 1e-7);
    }
}

TEST_CASE("critical couplings from the closed form") {
    const auto cps = critical_couplings(base5());
    REQUIRE(cps.size() == 5);
    CHECK(cps.front().mode_m == 5);
    CHECK(std::abs(cps.front().g_c - std::sqrt((3.0 - std::sqrt(3.0)) * 3.0)) <
          1e-12);
    CHECK(std::abs(cps[1].g_c - std::sqrt(6.0)) < 1e-12);

    LatticeParams det = base5();
    det.delta_f = 3.0;
    const auto cps3 = critical_couplings(det);
    CHECK(std::abs(cps3.front().g_c - std::sqrt((3.0 - std::sqrt(3.0)) * 6.0)) <
          1e-12);

    LatticeParams single = base5();
    single.n_sites = 1;
    const auto cps1 = critical_couplings(single);
    REQUIRE(cps1.size() == 1);
    CHECK(std::abs(cps1.front().g_c - 3.0) < 1e-12);
}

TEST_CASE("the lower dressed level vanishes at its critical coupling") {
    for (double delta_f : {0.0, 1.5, 3.0}) {
        LatticeParams p = base5();
        p.delta_f = delta_f;
        const auto modes = normal_modes(p);
        for (const CriticalPoint& c : critical_couplings(p)) {
            p.g = c.g_c;
            CHECK(c.g_c > 0.0);
            const DressedLevel d = dressed_level(p, modes[c.mode_m - 1], 1);
            CHECK(std::abs(d.E_minus) < 1e-10);
        }
    }
}

TEST_CASE("crossing scan agrees with the closed form inside the window") {
    const auto found = detect_crossings(base5(), 0.5, 2.9, 1e-8);
    REQUIRE(found.size() == 2);
    CHECK(std::abs(found[0].g_c - std::sqrt((3.0 - std::sqrt(3.0)) * 3.0)) < 1e-7);
    CHECK(std::abs(found[1].g_c - std::sqrt(6.0)) < 1e-7);

    CHECK(detect_crossings(base5(), 0.0, 0.5, 1e-8).empty());

    LatticeParams single = base5();
    single.n_sites = 1;
    const auto one = detect_crossings(single, 0.0, 4.0, 1e-8);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one[0].g_c - 3.0) < 1e-7);
}

TEST_CASE("candidate branch energies and derivatives are consistent") {
    LatticeParams p = base5();
    p.delta_f = 1.0;
    const auto branches = candidate_branches(p);
    // vacuum + N one-exciton + N two-exciton + N(N-1)/2 pair branches
    CHECK(branches.size() == 1 + 5 + 5 + 10);

    std::mt19937 rng(13);
    std::uniform_real_distribution<double> gg(0.3, 3.7);
    std::uniform_int_distribution<int> bi(0, static_cast<int>(branches.size()) - 1);
    for (int trial = 0; trial < 100; ++trial) {
        const LevelBranch& br = branches[bi(rng)];
        p.g = gg(rng);
        const double h = 1e-5;
        LatticeParams lo = p, hi = p;
        lo.g -= h;
        hi.g += h;
        const double fd = (br.energy(hi) - br.energy(lo)) / (2 * h);
        CHECK(std::abs(br.energy_derivative_g(p) - fd) < 1e-6);
    }
}

}  // TEST_SUITE
