#pragma once

#include <memory>

#include "cavrad/operators.hpp"
#include "cavrad/system_model.hpp"

namespace cavrad {

struct SteadyStateSolution {
    DensityMatrix rho;
    double residual;         // max |L vec(rho)|
    double tail_population;  // population of Fock levels {Ncut-1, Ncut}
};

struct SolverOptions {
    double residual_tol = 1e-9;
    /// Bordered-system inverse-norm estimate above which the kernel is treated as degenerate.
    double degeneracy_threshold = 1e11;
};

/// Replace-row sparse LU solve of L vec(rho) = 0 with tr(rho) = 1.
///
/// The first diagonal row is replaced by the trace functional. For a trace-preserving
/// generator that row is linearly dependent on the others, so the bordered matrix is
/// singular exactly when the kernel has dimension > 1; this is reported as
/// NullSpaceDegenerate. Non-finite output or a residual above tolerance is SingularSolve.
///
/// A SteadyStateSolver owns its factorization workspace and is not thread-safe; use one
/// instance per worker. Results do not depend on previously solved systems.
class SteadyStateSolver {
public:
    explicit SteadyStateSolver(SolverOptions options = {});
    ~SteadyStateSolver();
    SteadyStateSolver(SteadyStateSolver&&) noexcept;
    SteadyStateSolver& operator=(SteadyStateSolver&&) noexcept;

    [[nodiscard]] SteadyStateSolution solve(const Liouvillian& l);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] SteadyStateSolution steady_state(const Liouvillian& l, const SolverOptions& options = {});

/// Population of Fock levels {Ncut-1, Ncut}.
[[nodiscard]] double tail_population(const DensityMatrix& rho);

struct EvolveOptions {
    double tolerance = 1e-10;  // allowed local error per unit time, max-norm on vec(rho)
    double min_step = 1e-12;
};

/// Adaptive Dormand-Prince 5(4) integration of vec(rho)' = L vec(rho).
/// Throws StepSizeUnderflow when the controller needs a step below options.min_step.
[[nodiscard]] DensityMatrix evolve(const DensityMatrix& rho0, const Liouvillian& l, double t_final, double dt_max,
                                   const EvolveOptions& options = {});

struct ConvergeOptions {
    int min_ncut = 2;
    int max_ncut = 30;
    double tail_tol = 1e-8;
};

/// Smallest Ncut for which Ncut+2 changes <a^dag a>, g2 and g3 by a relative amount below
/// observable_tol, with tail population below options.tail_tol.
/// Throws CutoffLimitExceeded when Ncut+2 would exceed options.max_ncut.
[[nodiscard]] int converge_ncut(const SystemParams& params, double observable_tol, const ConvergeOptions& options = {});

}  // namespace cavrad
