#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cavrad {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, long>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

/// Atomic level labels. The numeric value is the local basis index.
enum class Level : int { g = 0, m = 1, e = 2 };

inline constexpr int kAtomLevels = 3;
inline constexpr double kDropTolerance = 1e-14;

/// Composite space (atom1, [atom2,] cavity) with the Fock mode truncated at fock_cutoff.
class SpaceDescriptor {
public:
    SpaceDescriptor(int atom_count, int fock_cutoff);

    [[nodiscard]] int atom_count() const noexcept { return atom_count_; }
    [[nodiscard]] int fock_cutoff() const noexcept { return fock_cutoff_; }
    [[nodiscard]] int fock_dim() const noexcept { return fock_cutoff_ + 1; }
    [[nodiscard]] long dim() const noexcept;

    /// Local dimensions in slot order; the cavity is always the last slot.
    [[nodiscard]] std::vector<int> slot_dims() const;
    [[nodiscard]] int cavity_slot() const noexcept { return atom_count_; }

    /// Basis index of |levels..., n>. levels.size() must equal atom_count.
    [[nodiscard]] long index(std::span<const Level> levels, int photons) const;

    struct BasisState {
        std::array<Level, 2> levels{Level::g, Level::g};
        int photons = 0;
    };
    [[nodiscard]] BasisState decode(long index) const;

    friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;

private:
    int atom_count_;
    int fock_cutoff_;
};

/// Sparse operator on a SpaceDescriptor. Immutable after construction.
class Operator {
public:
    Operator(SpaceDescriptor space, SparseMatrix matrix);

    [[nodiscard]] const SpaceDescriptor& space() const noexcept { return space_; }
    [[nodiscard]] const SparseMatrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] DenseMatrix dense() const { return DenseMatrix(matrix_); }
    [[nodiscard]] Complex coeff(long row, long col) const { return matrix_.coeff(row, col); }

private:
    SpaceDescriptor space_;
    SparseMatrix matrix_;
};

/// A local matrix placed on one slot of the composite space.
struct SlotFactor {
    DenseMatrix local;
    int slot;
};

[[nodiscard]] Operator identity(const SpaceDescriptor& space);
[[nodiscard]] Operator annihilation(const SpaceDescriptor& space);
[[nodiscard]] Operator creation(const SpaceDescriptor& space);
[[nodiscard]] Operator number(const SpaceDescriptor& space);

/// |alpha><beta| on atom `atom` (0-based), identity on every other slot.
[[nodiscard]] Operator atomic_transition(const SpaceDescriptor& space, int atom, Level alpha, Level beta);

/// Kronecker product over slots (atom1, atom2, cavity) with identity on unmentioned slots.
[[nodiscard]] Operator tensor_embed(const SpaceDescriptor& space, std::span<const SlotFactor> factors);

[[nodiscard]] Operator dagger(const Operator& op);
[[nodiscard]] Operator add(const Operator& a, const Operator& b);
[[nodiscard]] Operator matmul(const Operator& a, const Operator& b);
[[nodiscard]] Operator scale(Complex c, const Operator& op);
[[nodiscard]] Operator commutator(const Operator& a, const Operator& b);

inline Operator operator+(const Operator& a, const Operator& b) { return add(a, b); }
inline Operator operator-(const Operator& a, const Operator& b) { return add(a, scale(-1.0, b)); }
inline Operator operator*(const Operator& a, const Operator& b) { return matmul(a, b); }
inline Operator operator*(Complex c, const Operator& op) { return scale(c, op); }

/// Largest entry magnitude; zero for an empty pattern.
[[nodiscard]] double max_abs(const SparseMatrix& m);

/// Sparse Kronecker product a ⊗ b.
[[nodiscard]] SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

/// Drops stored entries with magnitude at or below kDropTolerance.
void prune_small(SparseMatrix& m);

/// Dense density operator. Construction does not enforce the physical invariants;
/// call check() to measure them.
class DensityMatrix {
public:
    DensityMatrix(SpaceDescriptor space, DenseMatrix entries);

    [[nodiscard]] const SpaceDescriptor& space() const noexcept { return space_; }
    [[nodiscard]] const DenseMatrix& entries() const noexcept { return entries_; }

    struct Diagnostics {
        double hermiticity_error;  // max |rho - rho^dagger|
        double trace_error;        // |tr rho - 1|
        double min_eigenvalue;
    };
    [[nodiscard]] Diagnostics check() const;
    [[nodiscard]] bool is_valid(double herm_tol = 1e-10, double trace_tol = 1e-10, double psd_slack = 1e-8) const;

    /// Photon-number distribution with the atoms traced out.
    [[nodiscard]] std::vector<double> photon_distribution() const;

    /// |levels, n><levels, n|.
    static DensityMatrix basis_state(const SpaceDescriptor& space, std::span<const Level> levels, int photons);
    static DensityMatrix ground(const SpaceDescriptor& space);
    /// Atoms in the ground state, cavity in the diagonal state with the given photon distribution.
    static DensityMatrix ground_with_photons(const SpaceDescriptor& space, std::span<const double> distribution);

    friend double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

private:
    SpaceDescriptor space_;
    DenseMatrix entries_;
};

/// Half the trace norm of the difference.
[[nodiscard]] double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// tr(op · rho).
[[nodiscard]] Complex expectation(const Operator& op, const DensityMatrix& rho);

}  // namespace cavrad
