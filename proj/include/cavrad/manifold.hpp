#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cavrad/operators.hpp"
#include "cavrad/system_model.hpp"

namespace cavrad {

/// Product state |levels, photons> inside an excitation manifold.
struct ManifoldLabel {
    std::array<Level, 2> levels{Level::g, Level::g};
    int atom_count = 2;
    int photons = 0;

    [[nodiscard]] std::span<const Level> atom_levels() const {
        return {levels.data(), static_cast<std::size_t>(atom_count)};
    }
    /// e.g. "|mg,1>".
    [[nodiscard]] std::string str() const;

    friend bool operator==(const ManifoldLabel&, const ManifoldLabel&) = default;
};

struct ManifoldSpectrum {
    int excitation_number = 0;
    std::vector<ManifoldLabel> basis_labels;
    std::vector<double> eigenvalues;  // ascending, relative to the manifold's rotating-frame zero
    DenseMatrix eigenvectors;         // column k belongs to eigenvalues[k]
};

/// Product states with a^dag a + #m = N and no |e>, ordered by the number of excited
/// atoms and then atom 1 before atom 2: N = 2 gives |gg,2>, |mg,1>, |gm,1>, |mm,0>.
[[nodiscard]] std::vector<ManifoldLabel> manifold_basis(int excitation_number, int atom_count = 2);

/// Spectrum of the undriven interaction block with g1 = g, g2 = g cos(phi_z), zero detunings.
[[nodiscard]] ManifoldSpectrum manifold_eigen(double g, double phi_z, int excitation_number, int atom_count = 2);

/// Basis with a^dag a + #m + #e = N, |e> allowed, built from H0 + HI of `params`
/// (control field kept exactly, pump dropped). Shows the control-induced splitting.
[[nodiscard]] std::vector<ManifoldLabel> dressed_manifold_basis(int excitation_number, int atom_count = 2);
[[nodiscard]] ManifoldSpectrum dressed_manifold_eigen(const SystemParams& params, int excitation_number);

/// Two-photon resonance between the upper two-excitation dressed state and |ee,0>: sqrt(6) g / 2.
[[nodiscard]] double control_resonance_detuning(double g);

/// Named dressed states of the two-atom manifolds.
enum class NamedState {
    // phi_z = 0
    InPhasePsi1Plus,
    InPhasePsi1Minus,
    InPhasePsi2Plus,
    InPhasePsi2Minus,
    InPhasePsi2Zero,
    // phi_z = pi
    OutOfPhasePsi1Plus,
    OutOfPhasePsi1Minus,
    OutOfPhasePsi1Zero,
    OutOfPhasePsi2Plus,
    OutOfPhasePsi2Minus,
    OutOfPhasePsi2Zero,
    OutOfPhasePhi2Zero,
};

struct StateTarget {
    int excitation_number;
    std::vector<std::pair<ManifoldLabel, double>> amplitudes;
    double nominal_energy_per_g;  // the state's eigenvalue divided by g
};

[[nodiscard]] StateTarget named_state(NamedState which);

/// |<target|psi>|^2 summed over the eigenspace whose eigenvalue lies nearest to `energy`
/// (degenerate eigenvalues within 1e-8 max(1, |E|) are grouped). The target is normalized.
/// Throws InvalidArgument when a target component lies outside the manifold.
[[nodiscard]] double eigenstate_overlap(const ManifoldSpectrum& spectrum,
                                        std::span<const std::pair<ManifoldLabel, double>> target, double energy);
[[nodiscard]] double eigenstate_overlap(const ManifoldSpectrum& spectrum, NamedState which, double g);

/// Block of `h` on the basis states of `labels`.
[[nodiscard]] DenseMatrix project_onto(const Operator& h, std::span<const ManifoldLabel> labels);

}  // namespace cavrad
