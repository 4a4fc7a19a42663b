#include "cavrad/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cavrad/error.hpp"

namespace cavrad {

SpaceDescriptor::SpaceDescriptor(int atom_count, int fock_cutoff)
    : atom_count_(atom_count), fock_cutoff_(fock_cutoff) {
    if (atom_count != 1 && atom_count != 2)
        throw Error(ErrorKind::InvalidArgument, "atom_count must be 1 or 2, got " + std::to_string(atom_count));
    if (fock_cutoff < 1)
        throw Error(ErrorKind::InvalidArgument, "fock_cutoff must be >= 1, got " + std::to_string(fock_cutoff));
}

long SpaceDescriptor::dim() const noexcept {
    long d = fock_dim();
    for (int i = 0; i < atom_count_; ++i) d *= kAtomLevels;
    return d;
}

std::vector<int> SpaceDescriptor::slot_dims() const {
    std::vector<int> dims(static_cast<std::size_t>(atom_count_), kAtomLevels);
    dims.push_back(fock_dim());
    return dims;
}

long SpaceDescriptor::index(std::span<const Level> levels, int photons) const {
    if (static_cast<int>(levels.size()) != atom_count_)
        throw Error(ErrorKind::DimensionMismatch, "expected one level per atom");
    if (photons < 0 || photons > fock_cutoff_)
        throw Error(ErrorKind::IndexOutOfRange, "photon number " + std::to_string(photons) + " outside [0, Ncut]");
    long idx = 0;
    for (Level l : levels) idx = idx * kAtomLevels + static_cast<int>(l);
    return idx * fock_dim() + photons;
}

SpaceDescriptor::BasisState SpaceDescriptor::decode(long index) const {
    if (index < 0 || index >= dim()) throw Error(ErrorKind::IndexOutOfRange, "basis index out of range");
    BasisState s;
    s.photons = static_cast<int>(index % fock_dim());
    long rest = index / fock_dim();
    for (int a = atom_count_ - 1; a >= 0; --a) {
        s.levels[static_cast<std::size_t>(a)] = static_cast<Level>(rest % kAtomLevels);
        rest /= kAtomLevels;
    }
    return s;
}

Operator::Operator(SpaceDescriptor space, SparseMatrix matrix) : space_(space), matrix_(std::move(matrix)) {
    if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim())
        throw Error(ErrorKind::DimensionMismatch, "operator shape does not match space dimension");
    matrix_.makeCompressed();
}

double max_abs(const SparseMatrix& m) {
    double best = 0.0;
    for (long k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
    return best;
}

void prune_small(SparseMatrix& m) {
    m.prune([](long, long, const Complex& v) { return std::abs(v) > kDropTolerance; });
    m.makeCompressed();
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<Eigen::Triplet<Complex, long>> triplets;
    triplets.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (long ka = 0; ka < a.outerSize(); ++ka)
        for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
            for (long kb = 0; kb < b.outerSize(); ++kb)
                for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
                    triplets.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                          ia.value() * ib.value());
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

namespace {

SparseMatrix sparse_identity(long n) {
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

SparseMatrix to_sparse(const DenseMatrix& d) {
    SparseMatrix s = d.sparseView(1.0, kDropTolerance);
    prune_small(s);
    return s;
}

void require_same_space(const SpaceDescriptor& a, const SpaceDescriptor& b) {
    if (!(a == b)) throw Error(ErrorKind::DimensionMismatch, "operators live on different spaces");
}

}  // namespace

Operator tensor_embed(const SpaceDescriptor& space, std::span<const SlotFactor> factors) {
    const auto dims = space.slot_dims();
    std::vector<SparseMatrix> locals;
    locals.reserve(dims.size());
    std::vector<bool> used(dims.size(), false);
    for (int d : dims) locals.push_back(sparse_identity(d));
    for (const auto& f : factors) {
        if (f.slot < 0 || f.slot >= static_cast<int>(dims.size()))
            throw Error(ErrorKind::IndexOutOfRange, "slot " + std::to_string(f.slot) + " does not exist");
        const auto s = static_cast<std::size_t>(f.slot);
        if (used[s]) throw Error(ErrorKind::InvalidArgument, "slot " + std::to_string(f.slot) + " given twice");
        if (f.local.rows() != dims[s] || f.local.cols() != dims[s])
            throw Error(ErrorKind::DimensionMismatch, "local factor does not match slot " + std::to_string(f.slot));
        used[s] = true;
        locals[s] = to_sparse(f.local);
    }
    SparseMatrix out = locals.front();
    for (std::size_t i = 1; i < locals.size(); ++i) out = kron(out, locals[i]);
    prune_small(out);
    return Operator(space, std::move(out));
}

Operator identity(const SpaceDescriptor& space) { return Operator(space, sparse_identity(space.dim())); }

Operator annihilation(const SpaceDescriptor& space) {
    const int nf = space.fock_dim();
    DenseMatrix a = DenseMatrix::Zero(nf, nf);
    for (int n = 1; n < nf; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const SlotFactor f{a, space.cavity_slot()};
    return tensor_embed(space, std::span(&f, 1));
}

Operator creation(const SpaceDescriptor& space) { return dagger(annihilation(space)); }

Operator number(const SpaceDescriptor& space) {
    const auto a = annihilation(space);
    return dagger(a) * a;
}

Operator atomic_transition(const SpaceDescriptor& space, int atom, Level alpha, Level beta) {
    if (atom < 0 || atom >= space.atom_count())
        throw Error(ErrorKind::IndexOutOfRange, "atom index " + std::to_string(atom) + " out of range");
    DenseMatrix s = DenseMatrix::Zero(kAtomLevels, kAtomLevels);
    s(static_cast<int>(alpha), static_cast<int>(beta)) = 1.0;
    const SlotFactor f{s, atom};
    return tensor_embed(space, std::span(&f, 1));
}

Operator dagger(const Operator& op) {
    SparseMatrix m = op.matrix().adjoint();
    return Operator(op.space(), std::move(m));
}

Operator add(const Operator& a, const Operator& b) {
    require_same_space(a.space(), b.space());
    SparseMatrix m = a.matrix() + b.matrix();
    prune_small(m);
    return Operator(a.space(), std::move(m));
}

Operator matmul(const Operator& a, const Operator& b) {
    require_same_space(a.space(), b.space());
    SparseMatrix m = a.matrix() * b.matrix();
    prune_small(m);
    return Operator(a.space(), std::move(m));
}

Operator scale(Complex c, const Operator& op) {
    SparseMatrix m = c * op.matrix();
    prune_small(m);
    return Operator(op.space(), std::move(m));
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

DensityMatrix::DensityMatrix(SpaceDescriptor space, DenseMatrix entries)
    : space_(space), entries_(std::move(entries)) {
    if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim())
        throw Error(ErrorKind::DimensionMismatch, "density matrix shape does not match space dimension");
}

DensityMatrix::Diagnostics DensityMatrix::check() const {
    Diagnostics d{};
    d.hermiticity_error = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(entries_.trace() - Complex(1.0, 0.0));
    const DenseMatrix herm = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

bool DensityMatrix::is_valid(double herm_tol, double trace_tol, double psd_slack) const {
    const auto d = check();
    return d.hermiticity_error <= herm_tol && d.trace_error <= trace_tol && d.min_eigenvalue >= -psd_slack;
}

std::vector<double> DensityMatrix::photon_distribution() const {
    const int nf = space_.fock_dim();
    std::vector<double> p(static_cast<std::size_t>(nf), 0.0);
    for (long i = 0; i < space_.dim(); ++i) p[static_cast<std::size_t>(i % nf)] += entries_(i, i).real();
    return p;
}

DensityMatrix DensityMatrix::basis_state(const SpaceDescriptor& space, std::span<const Level> levels, int photons) {
    DenseMatrix m = DenseMatrix::Zero(space.dim(), space.dim());
    const long i = space.index(levels, photons);
    m(i, i) = 1.0;
    return DensityMatrix(space, std::move(m));
}

DensityMatrix DensityMatrix::ground(const SpaceDescriptor& space) {
    const std::array<Level, 2> gg{Level::g, Level::g};
    return basis_state(space, std::span(gg.data(), static_cast<std::size_t>(space.atom_count())), 0);
}

DensityMatrix DensityMatrix::ground_with_photons(const SpaceDescriptor& space, std::span<const double> distribution) {
    if (static_cast<int>(distribution.size()) > space.fock_dim())
        throw Error(ErrorKind::DimensionMismatch, "photon distribution longer than Fock space");
    DenseMatrix m = DenseMatrix::Zero(space.dim(), space.dim());
    const std::array<Level, 2> gg{Level::g, Level::g};
    const auto levels = std::span(gg.data(), static_cast<std::size_t>(space.atom_count()));
    for (std::size_t n = 0; n < distribution.size(); ++n) {
        const long i = space.index(levels, static_cast<int>(n));
        m(i, i) = distribution[n];
    }
    return DensityMatrix(space, std::move(m));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_space(a.space(), b.space());
    DenseMatrix diff = a.entries_ - b.entries_;
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Complex expectation(const Operator& op, const DensityMatrix& rho) {
    require_same_space(op.space(), rho.space());
    const auto& m = op.matrix();
    const auto& r = rho.entries();
    Complex acc{0.0, 0.0};
    for (long k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) acc += it.value() * r(it.col(), it.row());
    return acc;
}

}  // namespace cavrad
