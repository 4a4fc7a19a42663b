#pragma once

#include <string>
#include <vector>

#include "cavrad/operators.hpp"

namespace cavrad {

/// Physical parameters in units of the cavity decay rate kappa (hbar = 1, rotating frame).
struct SystemParams {
    double g = 20.0;          // peak atom-cavity coupling
    double phi_z = 0.0;       // phase separation of the two atoms, radians
    double omega_l = 0.0;     // control Rabi frequency on m <-> e
    double eta = 2.0;         // pump Rabi frequency on g <-> m
    double delta_m = 0.0;     // detuning of |m>
    double delta_l = 0.0;     // control detuning; |e> sits at delta_m + delta_l
    double delta_cav = 0.0;   // cavity detuning
    double kappa = 1.0;
    double gamma_gm = 1.0;    // |m> -> |g>
    double gamma_me = 0.01;   // |e> -> |m>
    int atom_count = 2;
    int ncut = 10;

    /// Throws OutOfRange on any violated parameter constraint.
    void validate() const;

    [[nodiscard]] double delta_e() const noexcept { return delta_m + delta_l; }
    /// g for atom 0, g cos(phi_z) for atom 1.
    [[nodiscard]] std::vector<double> couplings() const;
    [[nodiscard]] SpaceDescriptor space() const { return {atom_count, ncut}; }
};

/// One atom at the antinode with otherwise identical drive, detunings, decay rates and cutoff.
[[nodiscard]] SystemParams single_atom_reference(const SystemParams& two_atom);

/// Rate and jump operator. Contributes rate * (2 C rho C^dag - C^dag C rho - rho C^dag C).
struct CollapseChannel {
    double rate;
    Operator op;
    std::string label;
};

/// Sparse generator acting on column-stacked rho: vec(rho)[i + j*dim] = rho(i, j).
struct Liouvillian {
    SpaceDescriptor space;
    SparseMatrix matrix;
};

[[nodiscard]] Operator hamiltonian(const SystemParams& params);
[[nodiscard]] std::vector<CollapseChannel> collapse_channels(const SystemParams& params);

/// Generic assembly from a Hamiltonian and channels; zero-rate channels are skipped.
[[nodiscard]] Liouvillian assemble_liouvillian(const Operator& h, const std::vector<CollapseChannel>& channels);
[[nodiscard]] Liouvillian liouvillian(const SystemParams& params);

/// a^dag a + sum_j S^j_mm.
[[nodiscard]] Operator excitation_number(const SpaceDescriptor& space);

/// max |vec(I)^dag L|, zero for a trace-preserving generator.
[[nodiscard]] double trace_defect(const Liouvillian& l);

/// Column-stacking helpers.
[[nodiscard]] DenseVector vectorize(const DenseMatrix& rho);
[[nodiscard]] DenseMatrix unvectorize(const DenseVector& v, long dim);

}  // namespace cavrad
