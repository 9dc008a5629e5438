#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "qbat/observables.hpp"
#include "test_support.hpp"

using namespace qbat;
using namespace qbat::testing;

TEST_CASE("partial trace against the index-sum oracle") {
    std::mt19937_64 rng(21);
    const HilbertLayout l = reference_layout();
    const Matrix rho = random_density(l.dim(), rng);
    const std::vector<std::vector<std::size_t>> keeps{{1, 2, 3}, {0}, {4}, {0, 4}, {2}, {0, 1, 2, 3, 4}};
    for (const auto& keep : keeps) {
        const Matrix r = partial_trace(rho, l, keep);
        CHECK((r - index_sum_partial_trace(rho, l, keep)).norm() < 1e-12);
        CHECK(std::abs(r.trace() - Complex(1.0)) < 1e-12);
        CHECK((r - r.adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("partial trace of products and Bell states") {
    std::mt19937_64 rng(3);
    const Matrix a = random_density(3, rng);
    const Matrix b = random_density(2, rng);
    Matrix ab(6, 6);
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 3; ++j) ab.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    const std::vector<Index> dims{3, 2};
    const std::vector<std::size_t> keep_a{0}, keep_b{1};
    CHECK((partial_trace(ab, dims, keep_a) - a).norm() < 1e-14);
    CHECK((partial_trace(ab, dims, keep_b) - b).norm() < 1e-14);

    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
    bell(0) = bell(3) = 1.0;
    const Matrix rho = pure(bell);
    const std::vector<Index> qubits{2, 2};
    const std::vector<std::size_t> first{0}, second{1};
    CHECK((partial_trace(rho, qubits, first) - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);
    CHECK((partial_trace(rho, qubits, second) - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);

    const std::vector<std::size_t> none;
    CHECK_THROWS_AS(partial_trace(rho, qubits, none), std::invalid_argument);
}

TEST_CASE("partial trace commutes with slot relabelling") {
    // swap two spin slots: tracing down to spin 1 of the permuted state equals spin 2 of the original
    std::mt19937_64 rng(8);
    const HilbertLayout l(3, 2, 2);
    const Matrix rho = random_density(l.dim(), rng);
    Matrix perm = Matrix::Zero(l.dim(), l.dim());
    for (Index i = 0; i < l.dim(); ++i) {
        auto lv = l.levels_of(i);
        std::swap(lv[1], lv[2]);
        perm(l.index_of(lv), i) = 1.0;
    }
    const Matrix swapped = perm * rho * perm.adjoint();
    const std::vector<std::size_t> s1{1}, s2{2};
    CHECK((partial_trace(swapped, l, s1) - partial_trace(rho, l, s2)).norm() < 1e-14);
}

TEST_CASE("ergotropy of fixed unit cases") {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = 1.0;
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.3;
    rho(1, 1) = 0.7;
    const PassiveDecomposition d = passive_state(rho, h);
    CHECK(d.passive_energy == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(d.state(0, 0).real() == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(d.ergotropy == doctest::Approx(0.4).epsilon(1e-15));

    const double omega = 1.7;
    Matrix hq = Matrix::Zero(2, 2);
    hq(1, 1) = omega;
    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    CHECK(ergotropy(excited, hq) == doctest::Approx(omega).epsilon(1e-15));

    std::mt19937_64 rng(1);
    const Matrix hr = random_hermitian(5, rng);
    CHECK(std::abs(ergotropy(Matrix::Identity(5, 5) / 5.0, hr)) < 1e-14);
    CHECK(ergotropy(Matrix::Identity(2, 2) / 2.0, hq) == 0.0);

    Eigen::SelfAdjointEigenSolver<Matrix> s(hr);
    const Matrix ground = pure(s.eigenvectors().col(0));
    const PassiveDecomposition g = passive_state(ground, hr);
    CHECK(g.passive_energy == doctest::Approx(s.eigenvalues()(0)).epsilon(1e-12));
    CHECK(std::abs(g.ergotropy) < 1e-12);
}

TEST_CASE("ergotropy matches brute-force permutation minimisation") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const Index d = 2 + trial % 4;
        const Matrix rho = random_density(d, rng);
        const Matrix h = random_hermitian(d, rng);
        CHECK(std::abs(ergotropy(rho, h) - brute_force_ergotropy(rho, h)) < 1e-12);
    }
}

TEST_CASE("ergotropy invariants") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        const Index d = 2 + trial % 5;
        const Matrix rho = random_density(d, rng);
        const Matrix h = random_hermitian(d, rng);
        const double w = ergotropy(rho, h);
        CHECK(w >= -1e-10);

        const PassiveDecomposition p = passive_state(rho, h);
        CHECK(std::abs(ergotropy(p.state, h)) < 1e-12);
        CHECK(std::abs(p.populations.sum() - 1.0) < 1e-12);

        CHECK(ergotropy(rho, 2.5 * h) == doctest::Approx(2.5 * w).epsilon(1e-10));

        Eigen::SelfAdjointEigenSolver<Matrix> hs(h);
        CHECK(w <= expectation(rho, h) - hs.eigenvalues()(0) + 1e-12);

        // unitaries diagonal in the eigenbasis of H commute with H
        std::uniform_real_distribution<double> phase(0, 2 * M_PI);
        Eigen::VectorXcd ph(d);
        for (Index k = 0; k < d; ++k) ph(k) = std::polar(1.0, phase(rng));
        const Matrix u = hs.eigenvectors() * ph.asDiagonal() * hs.eigenvectors().adjoint();
        CHECK(std::abs(ergotropy(u * rho * u.adjoint(), h) - w) < 1e-12);
    }
}

TEST_CASE("ergotropy is insensitive to degenerate tie-breaking") {
    std::mt19937_64 rng(17);
    // H with a triply degenerate level; rho with a doubly degenerate spectrum
    Eigen::VectorXd e(5);
    e << 0.0, 1.0, 1.0, 1.0, 2.5;
    Eigen::VectorXd r(5);
    r << 0.1, 0.3, 0.3, 0.2, 0.1;
    const Matrix v = random_unitary(5, rng);
    const Matrix h = v * e.cast<Complex>().asDiagonal() * v.adjoint();
    const double ref = brute_force_ergotropy(r.cast<Complex>().asDiagonal().toDenseMatrix(), h);
    for (int k = 0; k < 10; ++k) {
        // rotate inside the degenerate block of rho
        Matrix blk = Matrix::Identity(5, 5);
        blk.block(1, 1, 2, 2) = random_unitary(2, rng);
        const Matrix rho = blk * r.cast<Complex>().asDiagonal() * blk.adjoint();
        CHECK(std::abs(ergotropy(rho, h) - ref) < 1e-12);
    }
}

TEST_CASE("passive state rejects strongly non-positive input") {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.01;
    rho(1, 1) = -0.01;
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = 1.0;
    CHECK_THROWS_AS(passive_state(rho, h), std::domain_error);
    const double w = ergotropy(rho, h, -std::numeric_limits<double>::infinity());
    CHECK(w == doctest::Approx(0.0).epsilon(1e-15));

    Matrix slight = rho;
    slight(0, 0) = 1.0 + 5e-7;
    slight(1, 1) = -5e-7;
    CHECK_NOTHROW(passive_state(slight, h));
    CHECK_THROWS_AS(passive_state(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("battery ergotropy of reduced spin states") {
    PhysicalParams p;
    const HilbertLayout l = reference_layout();
    SystemOperators ops = build_system_operators(p, l);
    CHECK(battery_ergotropy(cavity_fock_state(l, 0), l, ops.h_battery_local) == 0.0);

    p.J = 0;
    ops = build_system_operators(p, l);
    const std::vector<Index> all_up{2, 1, 1, 1, 1};
    CHECK(battery_ergotropy(product_state(l, all_up), l, ops.h_battery_local) ==
          doctest::Approx(3 * p.omega_a).epsilon(1e-12));

    // with exchange: the passive partner of |eee> is |ggg>, both H_B eigenstates
    p.J = 1.5;
    ops = build_system_operators(p, l);
    CHECK(battery_ergotropy(product_state(l, all_up), l, ops.h_battery_local) ==
          doctest::Approx(3 * p.omega_a).epsilon(1e-12));
}

TEST_CASE("energies and expectation values") {
    PhysicalParams p;
    const HilbertLayout l = reference_layout();
    const SystemOperators ops = build_system_operators(p, l);
    const EnergyRecord vac = energies(cavity_fock_state(l, 0), ops);
    CHECK(vac.battery == 0.0);
    CHECK(vac.catalyst == doctest::Approx(-p.omega_cat / 2));
    CHECK(vac.excitations == 0.0);

    const EnergyRecord mixed = energies(Matrix::Identity(96, 96) / 96.0, ops);
    CHECK(std::abs(mixed.catalyst) < 1e-15);

    std::mt19937_64 rng(4);
    const Matrix rho = random_density(96, rng);
    const std::vector<std::size_t> spins{1, 2, 3};
    const Matrix reduced = partial_trace(rho, l, spins);
    CHECK(energies(rho, ops).battery == doctest::Approx(expectation(reduced, ops.h_battery_local)).epsilon(1e-12));

    Matrix skew = Matrix::Zero(2, 2);
    skew(0, 1) = Complex(0, 1);
    Matrix x = Matrix::Zero(2, 2);
    x(1, 0) = 1.0;
    CHECK_THROWS_AS(expectation(skew, x), std::runtime_error);
}
