#include <doctest.h>

#include <cmath>
#include <vector>

#include "cavrad/error.hpp"
#include "cavrad/operators.hpp"

using namespace cavrad;

namespace {

// Basis index computed by hand: ((l1 * 3 + l2) * (Ncut + 1) + n).
long manual_index(int l1, int l2, int n, int ncut) { return (l1 * 3 + l2) * (ncut + 1) + n; }

DenseMatrix local(int dim, std::initializer_list<std::tuple<int, int, Complex>> entries) {
    DenseMatrix m = DenseMatrix::Zero(dim, dim);
    for (const auto& [r, c, v] : entries) m(r, c) = v;
    return m;
}

double dense_max(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("space dimensions and indexing") {
    const SpaceDescriptor two(2, 4);
    CHECK(two.dim() == 9 * 5);
    CHECK(two.slot_dims() == std::vector<int>{3, 3, 5});
    const SpaceDescriptor one(1, 3);
    CHECK(one.dim() == 12);
    const std::array<Level, 2> lv{Level::m, Level::e};
    CHECK(two.index(lv, 3) == manual_index(1, 2, 3, 4));
    const auto st = two.decode(manual_index(2, 1, 4, 4));
    CHECK(st.levels[0] == Level::e);
    CHECK(st.levels[1] == Level::m);
    CHECK(st.photons == 4);
    CHECK_THROWS_AS(SpaceDescriptor(3, 2), Error);
    CHECK_THROWS_AS(SpaceDescriptor(1, 0), Error);
}

TEST_CASE("annihilation on a bare single mode cutoff 1") {
    const SpaceDescriptor s(1, 1);
    const Operator a = annihilation(s);
    // atom in g: |g,1> -> |g,0>
    CHECK(a.coeff(0, 1) == Complex(1.0));
    CHECK(a.coeff(1, 0) == Complex(0.0));
    CHECK(a.coeff(0, 0) == Complex(0.0));
}

TEST_CASE("ladder matrix elements") {
    const int ncut = 5;
    const SpaceDescriptor s(2, ncut);
    const Operator a = annihilation(s);
    const DenseMatrix ad = dagger(a).dense();
    for (int l = 0; l < 9; ++l) {
        for (int n = 1; n <= ncut; ++n) {
            const long from = l * (ncut + 1) + n;
            CHECK(std::abs(a.coeff(from - 1, from) - std::sqrt(static_cast<double>(n))) < 1e-15);
        }
        // vacuum is annihilated
        CHECK(a.dense().col(l * (ncut + 1)).norm() == 0.0);
        for (int n = 0; n < ncut; ++n) {
            const long from = l * (ncut + 1) + n;
            CHECK(std::abs(ad(from + 1, from) - std::sqrt(n + 1.0)) < 1e-15);
        }
    }
    CHECK(std::abs(a.coeff(2, 3) - std::sqrt(3.0)) < 1e-15);
    CHECK(a.matrix().nonZeros() == 9 * ncut);
}

TEST_CASE("commutator is identity below the cutoff corner") {
    const int ncut = 6;
    const SpaceDescriptor s(1, ncut);
    const Operator a = annihilation(s);
    const DenseMatrix c = (a * dagger(a) - dagger(a) * a).dense();
    for (long i = 0; i < s.dim(); ++i) {
        const auto st = s.decode(i);
        const double expect = st.photons < ncut ? 1.0 : -static_cast<double>(ncut);
        CHECK(std::abs(c(i, i) - expect) < 1e-12);
    }
    CHECK(dense_max(c - DenseMatrix(c.diagonal().asDiagonal())) < 1e-15);
}

TEST_CASE("atomic transitions") {
    const int ncut = 2;
    const SpaceDescriptor s(2, ncut);
    const Operator smg = atomic_transition(s, 0, Level::m, Level::g);
    for (int l2 = 0; l2 < 3; ++l2)
        for (int n = 0; n <= ncut; ++n)
            CHECK(smg.coeff(manual_index(1, l2, n, ncut), manual_index(0, l2, n, ncut)) == Complex(1.0));
    CHECK(smg.matrix().nonZeros() == 3 * (ncut + 1));

    const Operator sgm = atomic_transition(s, 0, Level::g, Level::m);
    const Operator proj = atomic_transition(s, 0, Level::g, Level::g);
    CHECK(dense_max((sgm * smg).dense() - proj.dense()) == 0.0);

    const Operator smm = atomic_transition(s, 0, Level::m, Level::m);
    CHECK(std::abs(smm.dense().trace() - Complex(s.dim() / 3.0)) < 1e-12);

    const Operator second = atomic_transition(s, 1, Level::e, Level::m);
    CHECK(second.coeff(manual_index(2, 2, 1, ncut), manual_index(2, 1, 1, ncut)) == Complex(1.0));
    CHECK_THROWS_AS((void)atomic_transition(s, 2, Level::g, Level::m), Error);
    try {
        (void)atomic_transition(s, 2, Level::g, Level::m);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IndexOutOfRange);
    }
}

TEST_CASE("tensor embedding") {
    const SpaceDescriptor s(2, 3);
    const std::vector<SlotFactor> ids{{DenseMatrix::Identity(3, 3), 0}, {DenseMatrix::Identity(3, 3), 1},
                                      {DenseMatrix::Identity(4, 4), 2}};
    CHECK(dense_max(tensor_embed(s, ids).dense() - DenseMatrix::Identity(36, 36)) == 0.0);
    CHECK(tensor_embed(s, {}).matrix().rows() == 9 * 4);

    const DenseMatrix x = local(3, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 2, Complex(0, 2)}});
    const DenseMatrix y = local(4, {{1, 2, 0.5}, {3, 0, -1.0}});
    const std::vector<SlotFactor> fx{{x, 0}};
    const std::vector<SlotFactor> fy{{y, 2}};
    const std::vector<SlotFactor> fxy{{x, 0}, {y, 2}};
    const Operator ex = tensor_embed(s, fx);
    const Operator ey = tensor_embed(s, fy);
    CHECK(dense_max((ex * ey).dense() - tensor_embed(s, fxy).dense()) < 1e-15);
    CHECK(dense_max(commutator(ex, ey).dense()) < 1e-15);

    // elementwise oracle for x on atom 1, y on the cavity
    const DenseMatrix e = tensor_embed(s, fxy).dense();
    double worst = 0.0;
    for (int a1 = 0; a1 < 3; ++a1)
        for (int b1 = 0; b1 < 3; ++b1)
            for (int l2 = 0; l2 < 3; ++l2)
                for (int n = 0; n < 4; ++n)
                    for (int m = 0; m < 4; ++m)
                        worst = std::max(worst, std::abs(e(manual_index(a1, l2, n, 3), manual_index(b1, l2, m, 3)) -
                                                         x(a1, b1) * y(n, m)));
    CHECK(worst == 0.0);

    const std::vector<SlotFactor> bad{{DenseMatrix::Identity(2, 2), 0}};
    CHECK_THROWS_AS((void)tensor_embed(s, bad), Error);
    const std::vector<SlotFactor> dup{{x, 0}, {x, 0}};
    CHECK_THROWS_AS((void)tensor_embed(s, dup), Error);
    const std::vector<SlotFactor> off{{x, 3}};
    CHECK_THROWS_AS((void)tensor_embed(s, off), Error);
}

TEST_CASE("kron is associative") {
    SparseMatrix a = DenseMatrix::Random(2, 2).sparseView();
    SparseMatrix b = DenseMatrix::Random(3, 3).sparseView();
    SparseMatrix c = DenseMatrix::Random(2, 2).sparseView();
    const DenseMatrix left(kron(kron(a, b), c));
    const DenseMatrix right(kron(a, kron(b, c)));
    CHECK(dense_max(left - right) < 1e-14);
}

TEST_CASE("algebra helpers") {
    const SpaceDescriptor s(2, 3);
    const Operator a = annihilation(s);
    const Operator x = a + 2.0 * atomic_transition(s, 1, Level::m, Level::e);
    CHECK(dense_max(dagger(dagger(x)).dense() - x.dense()) == 0.0);
    CHECK(dense_max((x * identity(s)).dense() - x.dense()) == 0.0);
    CHECK(dense_max(dagger(x).dense() - x.dense().adjoint()) == 0.0);
    CHECK(dense_max(scale(Complex(0, 1), x).dense() - Complex(0, 1) * x.dense()) == 0.0);
    CHECK(dense_max(number(s).dense() - (dagger(a) * a).dense()) < 1e-14);

    const SpaceDescriptor other(1, 3);
    CHECK_THROWS_AS((void)add(a, annihilation(other)), Error);
    CHECK_THROWS_AS((void)matmul(a, annihilation(other)), Error);

    // constructors are deterministic down to the sparse structure
    const Operator a2 = annihilation(s);
    CHECK(a2.matrix().nonZeros() == a.matrix().nonZeros());
    CHECK(dense_max(a2.dense() - a.dense()) == 0.0);
}

TEST_CASE("pruning respects the drop tolerance") {
    SparseMatrix m(2, 2);
    m.insert(0, 0) = 1e-15;
    m.insert(1, 1) = 1e-13;
    m.insert(0, 1) = 1.0;
    prune_small(m);
    CHECK(m.nonZeros() == 2);
    CHECK(m.coeff(0, 0) == Complex(0.0));
}

TEST_CASE("expectation values") {
    const SpaceDescriptor s(2, 4);
    const auto vac = DensityMatrix::ground(s);
    CHECK(std::abs(expectation(identity(s), vac) - 1.0) < 1e-15);
    CHECK(std::abs(expectation(number(s), vac)) == 0.0);
    const std::array<Level, 2> gg{Level::g, Level::g};
    const auto fock2 = DensityMatrix::basis_state(s, gg, 2);
    CHECK(std::abs(expectation(number(s), fock2) - 2.0) < 1e-14);
    CHECK_THROWS_AS((void)expectation(number(SpaceDescriptor(1, 4)), fock2), Error);

    // Hermitian observable on a random physical state: real expectation, linear in rho
    DenseMatrix b = DenseMatrix::Random(s.dim(), s.dim());
    DenseMatrix r = b * b.adjoint();
    r /= r.trace().real();
    const DensityMatrix rho(s, r);
    const Operator h = annihilation(s) + creation(s);
    CHECK(std::abs(expectation(h, rho).imag()) < 1e-10);
    const DensityMatrix mix(s, 0.25 * r + 0.75 * fock2.entries());
    const Complex lin = 0.25 * expectation(h, rho) + 0.75 * expectation(h, fock2);
    CHECK(std::abs(expectation(h, mix) - lin) < 1e-12);
}

TEST_CASE("density matrix diagnostics") {
    const SpaceDescriptor s(1, 2);
    const auto g = DensityMatrix::ground(s);
    CHECK(g.is_valid());
    DenseMatrix bad = g.entries();
    bad(0, 1) = 0.1;
    CHECK_FALSE(DensityMatrix(s, bad).is_valid());
    DenseMatrix neg = DenseMatrix::Zero(s.dim(), s.dim());
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    const auto d = DensityMatrix(s, neg).check();
    CHECK(d.min_eigenvalue == doctest::Approx(-0.5));
    CHECK(d.trace_error < 1e-15);

    const std::vector<double> p{0.5, 0.3, 0.2};
    const auto mixed = DensityMatrix::ground_with_photons(s, p);
    const auto dist = mixed.photon_distribution();
    REQUIRE(dist.size() == 3);
    for (int n = 0; n < 3; ++n) CHECK(dist[n] == doctest::Approx(p[n]));
    CHECK(trace_distance(mixed, mixed) < 1e-15);
    CHECK(trace_distance(mixed, g) == doctest::Approx(0.5));
}
