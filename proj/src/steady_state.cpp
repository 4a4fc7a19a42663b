#include "cavrad/steady_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include <limits>

#include "cavrad/error.hpp"
#include "cavrad/observables.hpp"
#include "umfpack_lu.hpp"

namespace cavrad {

namespace {

using Bordered = detail::UmfpackLU::Matrix;

/// L with its first row (the (0,0) population) replaced by the trace functional.
Bordered bordered_system(const Liouvillian& l) {
    const long dim = l.space.dim();
    const long n = dim * dim;
    std::vector<Eigen::Triplet<Complex, int>> triplets;
    triplets.reserve(static_cast<std::size_t>(l.matrix.nonZeros() + dim));
    for (long k = 0; k < l.matrix.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(l.matrix, k); it; ++it)
            if (it.row() != 0) triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (long i = 0; i < dim; ++i) triplets.emplace_back(0, static_cast<int>(i * (dim + 1)), Complex(1.0, 0.0));
    Bordered a(static_cast<int>(n), static_cast<int>(n));
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return a;
}

DenseVector trace_rhs(long n) {
    DenseVector b = DenseVector::Zero(n);
    b(0) = 1.0;
    return b;
}

}  // namespace

struct SteadyStateSolver::Impl {
    SolverOptions options;
    detail::UmfpackLU lu;
    Bordered factored;  // matrix owned by the current factorization

    void factorize(Bordered a) {
        factored = std::move(a);
        switch (lu.factorize(factored)) {
            case detail::UmfpackLU::Status::ok: break;
            case detail::UmfpackLU::Status::singular:
                throw Error(ErrorKind::NullSpaceDegenerate, "bordered steady-state system is singular");
            case detail::UmfpackLU::Status::failed:
                throw Error(ErrorKind::SingularSolve, "sparse LU factorization failed");
        }
    }

    /// Two steps of inverse iteration give a lower bound on ||A^-1||_2.
    [[nodiscard]] double inverse_norm_estimate() const {
        const long n = factored.rows();
        std::mt19937_64 rng(0x5eed);
        std::normal_distribution<double> normal;
        DenseVector z(n), y;
        for (long i = 0; i < n; ++i) z(i) = Complex(normal(rng), normal(rng));
        double growth = 0.0;
        for (int iter = 0; iter < 2; ++iter) {
            z /= z.norm();
            if (!lu.solve(z, y)) return std::numeric_limits<double>::infinity();
            growth = y.norm();
            if (!std::isfinite(growth)) return growth;
            z = y;
        }
        return growth;
    }

    SteadyStateSolution finish(const Liouvillian& l, const DenseVector& x) const {
        const long dim = l.space.dim();
        if (!x.allFinite()) throw Error(ErrorKind::SingularSolve, "steady-state solve produced non-finite values");
        DenseMatrix rho = unvectorize(x, dim);
        rho = (0.5 * (rho + rho.adjoint())).eval();
        rho /= rho.trace().real();

        const DenseVector lv = l.matrix * vectorize(rho);
        const double residual = lv.size() == 0 ? 0.0 : lv.cwiseAbs().maxCoeff();
        if (!std::isfinite(residual) || residual > options.residual_tol)
            throw Error(ErrorKind::SingularSolve,
                        "steady-state residual " + std::to_string(residual) + " above tolerance");
        DensityMatrix state(l.space, std::move(rho));
        const double tail = tail_population(state);
        return {std::move(state), residual, tail};
    }
};

SteadyStateSolver::SteadyStateSolver(SolverOptions options) : impl_(std::make_unique<Impl>()) {
    impl_->options = options;
}
SteadyStateSolver::~SteadyStateSolver() = default;
SteadyStateSolver::SteadyStateSolver(SteadyStateSolver&&) noexcept = default;
SteadyStateSolver& SteadyStateSolver::operator=(SteadyStateSolver&&) noexcept = default;

namespace {

void require_square(const Liouvillian& l) {
    const long n = l.space.dim() * l.space.dim();
    if (l.matrix.rows() != n || l.matrix.cols() != n)
        throw Error(ErrorKind::DimensionMismatch, "Liouvillian shape does not match its space");
}

}  // namespace

SteadyStateSolution SteadyStateSolver::solve(const Liouvillian& l) {
    require_square(l);
    impl_->factorize(bordered_system(l));

    const double scale = std::max(1.0, max_abs(l.matrix));
    const double inv_norm = impl_->inverse_norm_estimate();
    if (!std::isfinite(inv_norm) || inv_norm * scale > impl_->options.degeneracy_threshold)
        throw Error(ErrorKind::NullSpaceDegenerate,
                    "steady-state kernel is degenerate (condition estimate " + std::to_string(inv_norm * scale) + ")");

    const long n = impl_->factored.rows();
    const DenseVector b = trace_rhs(n);
    DenseVector x;
    if (!impl_->lu.solve(b, x)) throw Error(ErrorKind::SingularSolve, "sparse LU solve failed");
    // One step of iterative refinement.
    const DenseVector r = b - impl_->factored * x;
    DenseVector dx;
    if (impl_->lu.solve(r, dx)) x += dx;
    return impl_->finish(l, x);
}

SteadyStateSolution steady_state(const Liouvillian& l, const SolverOptions& options) {
    SteadyStateSolver solver(options);
    return solver.solve(l);
}

double tail_population(const DensityMatrix& rho) {
    const auto p = rho.photon_distribution();
    const std::size_t top = p.size() - 1;
    return p[top] + (top >= 1 ? p[top - 1] : 0.0);
}

DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& l, double t_final, double dt_max,
                     const EvolveOptions& options) {
    if (!(t_final > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_final must be > 0");
    if (!(dt_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt_max must be > 0");
    if (!(rho0.space() == l.space)) throw Error(ErrorKind::DimensionMismatch, "state and generator spaces differ");

    // Dormand-Prince 5(4) tableau; the generator is autonomous, so the nodes c_i are not needed.
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const long dim = l.space.dim();
    const auto& m = l.matrix;
    DenseVector y = vectorize(rho0.entries());
    DenseVector k1 = m * y;
    DenseVector k2, k3, k4, k5, k6, k7, y_new, err;

    double t = 0.0;
    double dt = std::min(dt_max, 1e-3 * t_final);
    const double t_end_slack = 1e-13 * t_final;
    while (t_final - t > t_end_slack) {
        if (t + dt > t_final) dt = t_final - t;
        k2 = m * (y + dt * a21 * k1);
        k3 = m * (y + dt * (a31 * k1 + a32 * k2));
        k4 = m * (y + dt * (a41 * k1 + a42 * k2 + a43 * k3));
        k5 = m * (y + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        k6 = m * (y + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        y_new = y + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = m * y_new;
        err = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double err_max = err.cwiseAbs().maxCoeff();
        const double allowed = options.tolerance * dt;
        if (err_max <= allowed) {
            t += dt;
            DenseMatrix r = unvectorize(y_new, dim);
            r = (0.5 * (r + r.adjoint())).eval();
            y = vectorize(r);
            k1 = m * y;
        }
        const double factor = err_max == 0.0 ? 5.0 : 0.9 * std::pow(allowed / err_max, 0.25);
        dt = std::min(dt_max, dt * std::clamp(factor, 0.2, 5.0));
        if (t_final - t > std::max(t_end_slack, options.min_step) && dt < options.min_step)
            throw Error(ErrorKind::StepSizeUnderflow, "step size fell below " + std::to_string(options.min_step));
    }
    return DensityMatrix(l.space, unvectorize(y, dim));
}

namespace {

bool relatively_close(std::optional<double> a, std::optional<double> b, double tol) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    const double scale = std::max(std::abs(*a), std::abs(*b));
    return std::abs(*a - *b) <= tol * scale;
}

}  // namespace

int converge_ncut(const SystemParams& params, double observable_tol, const ConvergeOptions& options) {
    if (!(observable_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "observable_tol must be > 0");
    if (options.min_ncut < 1 || options.min_ncut + 2 > options.max_ncut)
        throw Error(ErrorKind::InvalidArgument, "invalid Ncut search range");

    struct Probe {
        PhotonStatistics stats;
        double tail;
    };
    std::map<int, Probe> cache;
    SteadyStateSolver solver;
    auto probe = [&](int ncut) -> const Probe& {
        auto it = cache.find(ncut);
        if (it != cache.end()) return it->second;
        SystemParams p = params;
        p.ncut = ncut;
        const auto sol = solver.solve(liouvillian(p));
        return cache.emplace(ncut, Probe{photon_statistics(sol.rho), sol.tail_population}).first->second;
    };

    for (int ncut = options.min_ncut; ncut + 2 <= options.max_ncut; ++ncut) {
        const Probe& lo = probe(ncut);
        if (lo.tail >= options.tail_tol) continue;
        const Probe& hi = probe(ncut + 2);
        const bool mean_ok = (lo.stats.mean_n < kMeanPhotonFloor && hi.stats.mean_n < kMeanPhotonFloor) ||
                             relatively_close(lo.stats.mean_n, hi.stats.mean_n, observable_tol);
        if (mean_ok && relatively_close(lo.stats.g2, hi.stats.g2, observable_tol) &&
            relatively_close(lo.stats.g3, hi.stats.g3, observable_tol))
            return ncut;
    }
    throw Error(ErrorKind::CutoffLimitExceeded,
                "no converged Ncut up to hard cap " + std::to_string(options.max_ncut));
}

}  // namespace cavrad
