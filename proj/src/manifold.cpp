#include "cavrad/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "cavrad/error.hpp"

namespace cavrad {

std::string ManifoldLabel::str() const {
    static constexpr char names[] = {'g', 'm', 'e'};
    std::string s = "|";
    for (Level l : atom_levels()) s += names[static_cast<int>(l)];
    return s + "," + std::to_string(photons) + ">";
}

namespace {

std::vector<ManifoldLabel> enumerate_manifold(int excitation_number, int atom_count, int levels_per_atom) {
    if (excitation_number < 0) throw Error(ErrorKind::InvalidArgument, "excitation number must be >= 0");
    if (atom_count != 1 && atom_count != 2) throw Error(ErrorKind::InvalidArgument, "atom_count must be 1 or 2");

    struct Entry {
        std::tuple<int, int, int> key;
        ManifoldLabel label;
    };
    std::vector<Entry> entries;
    const int configs = atom_count == 1 ? levels_per_atom : levels_per_atom * levels_per_atom;
    for (int code = 0; code < configs; ++code) {
        ManifoldLabel label;
        label.atom_count = atom_count;
        int excited = 0;
        int doubly = 0;
        int rest = code;
        for (int j = 0; j < atom_count; ++j) {
            const auto level = static_cast<Level>(rest % levels_per_atom);
            rest /= levels_per_atom;
            label.levels[static_cast<std::size_t>(j)] = level;
            if (level != Level::g) ++excited;
            if (level == Level::e) ++doubly;
        }
        label.photons = excitation_number - excited;
        if (label.photons < 0) continue;
        entries.push_back({{excited, doubly, code}, label});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });
    std::vector<ManifoldLabel> out;
    out.reserve(entries.size());
    for (auto& e : entries) out.push_back(e.label);
    return out;
}

ManifoldSpectrum diagonalize(int excitation_number, std::vector<ManifoldLabel> labels, const DenseMatrix& block) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(block);
    ManifoldSpectrum spec;
    spec.excitation_number = excitation_number;
    spec.basis_labels = std::move(labels);
    spec.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    spec.eigenvectors = es.eigenvectors();
    // Fix the phase: largest component real and positive.
    for (long k = 0; k < spec.eigenvectors.cols(); ++k) {
        long best = 0;
        spec.eigenvectors.col(k).cwiseAbs().maxCoeff(&best);
        const Complex c = spec.eigenvectors(best, k);
        spec.eigenvectors.col(k) *= std::conj(c) / std::abs(c);
    }
    return spec;
}

long find_label(std::span<const ManifoldLabel> labels, const ManifoldLabel& target) {
    const auto it = std::find(labels.begin(), labels.end(), target);
    return it == labels.end() ? -1 : static_cast<long>(it - labels.begin());
}

}  // namespace

std::vector<ManifoldLabel> manifold_basis(int excitation_number, int atom_count) {
    return enumerate_manifold(excitation_number, atom_count, 2);
}

std::vector<ManifoldLabel> dressed_manifold_basis(int excitation_number, int atom_count) {
    return enumerate_manifold(excitation_number, atom_count, 3);
}

ManifoldSpectrum manifold_eigen(double g, double phi_z, int excitation_number, int atom_count) {
    auto labels = manifold_basis(excitation_number, atom_count);
    const std::array<double, 2> coupling{g, g * std::cos(phi_z)};
    const long n = static_cast<long>(labels.size());
    DenseMatrix block = DenseMatrix::Zero(n, n);
    // g_j (a S^j_mg + h.c.): |g_j, p> -> sqrt(p) |m_j, p-1>.
    for (long col = 0; col < n; ++col) {
        const ManifoldLabel& from = labels[static_cast<std::size_t>(col)];
        for (int j = 0; j < atom_count; ++j) {
            if (from.levels[static_cast<std::size_t>(j)] != Level::g || from.photons == 0) continue;
            ManifoldLabel to = from;
            to.levels[static_cast<std::size_t>(j)] = Level::m;
            to.photons -= 1;
            const long row = find_label(labels, to);
            const double element = coupling[static_cast<std::size_t>(j)] * std::sqrt(static_cast<double>(from.photons));
            block(row, col) += element;
            block(col, row) += element;
        }
    }
    return diagonalize(excitation_number, std::move(labels), block);
}

DenseMatrix project_onto(const Operator& h, std::span<const ManifoldLabel> labels) {
    const auto& space = h.space();
    const long n = static_cast<long>(labels.size());
    std::vector<long> idx;
    idx.reserve(labels.size());
    for (const auto& l : labels) {
        if (l.atom_count != space.atom_count()) throw Error(ErrorKind::DimensionMismatch, "label atom count differs");
        idx.push_back(space.index(l.atom_levels(), l.photons));
    }
    DenseMatrix block(n, n);
    for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c)
            block(r, c) = h.coeff(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    return block;
}

ManifoldSpectrum dressed_manifold_eigen(const SystemParams& params, int excitation_number) {
    SystemParams undriven = params;
    undriven.eta = 0.0;
    undriven.ncut = std::max(params.ncut, std::max(1, excitation_number));
    auto labels = dressed_manifold_basis(excitation_number, params.atom_count);
    DenseMatrix block = project_onto(hamiltonian(undriven), labels);
    return diagonalize(excitation_number, std::move(labels), block);
}

double control_resonance_detuning(double g) {
    if (g < 0.0) throw Error(ErrorKind::InvalidArgument, "coupling must be >= 0");
    return std::sqrt(6.0) * g / 2.0;
}

StateTarget named_state(NamedState which) {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
    auto lab = [](Level a, Level b, int n) { return ManifoldLabel{{a, b}, 2, n}; };
    const auto gg1 = lab(Level::g, Level::g, 1), mg0 = lab(Level::m, Level::g, 0), gm0 = lab(Level::g, Level::m, 0);
    const auto gg2 = lab(Level::g, Level::g, 2), mg1 = lab(Level::m, Level::g, 1), gm1 = lab(Level::g, Level::m, 1);
    const auto mm0 = lab(Level::m, Level::m, 0);

    switch (which) {
        // (±|gg,1> + |+,0>)/sqrt2
        case NamedState::InPhasePsi1Plus: return {1, {{gg1, 1 / r2}, {mg0, 0.5}, {gm0, 0.5}}, r2};
        case NamedState::InPhasePsi1Minus: return {1, {{gg1, -1 / r2}, {mg0, 0.5}, {gm0, 0.5}}, -r2};
        // |gg,2>/sqrt3 ± |+,1>/sqrt2 + |mm,0>/sqrt6
        case NamedState::InPhasePsi2Plus: return {2, {{gg2, 1 / r3}, {mg1, 0.5}, {gm1, 0.5}, {mm0, 1 / r6}}, r6};
        case NamedState::InPhasePsi2Minus: return {2, {{gg2, 1 / r3}, {mg1, -0.5}, {gm1, -0.5}, {mm0, 1 / r6}}, -r6};
        // (-sqrt3 |gg,2> + sqrt6 |mm,0>)/3
        case NamedState::InPhasePsi2Zero: return {2, {{gg2, -r3 / 3}, {mm0, r6 / 3}}, 0.0};
        // (±|gg,1> + |-,0>)/sqrt2
        case NamedState::OutOfPhasePsi1Plus: return {1, {{gg1, 1 / r2}, {mg0, 0.5}, {gm0, -0.5}}, r2};
        case NamedState::OutOfPhasePsi1Minus: return {1, {{gg1, -1 / r2}, {mg0, 0.5}, {gm0, -0.5}}, -r2};
        // |+,0>
        case NamedState::OutOfPhasePsi1Zero: return {1, {{mg0, 1 / r2}, {gm0, 1 / r2}}, 0.0};
        // -|gg,2>/sqrt3 ∓ |-,1>/sqrt2 + |mm,0>/sqrt6
        case NamedState::OutOfPhasePsi2Plus: return {2, {{gg2, -1 / r3}, {mg1, -0.5}, {gm1, 0.5}, {mm0, 1 / r6}}, r6};
        case NamedState::OutOfPhasePsi2Minus: return {2, {{gg2, -1 / r3}, {mg1, 0.5}, {gm1, -0.5}, {mm0, 1 / r6}}, -r6};
        // |gg,2>/sqrt3 + sqrt6 |mm,0>/3
        case NamedState::OutOfPhasePsi2Zero: return {2, {{gg2, 1 / r3}, {mm0, r6 / 3}}, 0.0};
        // |+,1>
        case NamedState::OutOfPhasePhi2Zero: return {2, {{mg1, 1 / r2}, {gm1, 1 / r2}}, 0.0};
    }
    throw Error(ErrorKind::InvalidArgument, "unknown named state");
}

double eigenstate_overlap(const ManifoldSpectrum& spectrum, std::span<const std::pair<ManifoldLabel, double>> target,
                          double energy) {
    const long n = static_cast<long>(spectrum.basis_labels.size());
    DenseVector t = DenseVector::Zero(n);
    for (const auto& [label, amp] : target) {
        const long i = find_label(spectrum.basis_labels, label);
        if (i < 0) throw Error(ErrorKind::InvalidArgument, "target component " + label.str() + " outside manifold");
        t(i) += amp;
    }
    const double norm = t.norm();
    if (norm == 0.0) throw Error(ErrorKind::InvalidArgument, "target state is zero");
    t /= norm;

    double nearest = std::numeric_limits<double>::infinity();
    for (double e : spectrum.eigenvalues)
        if (std::abs(e - energy) < std::abs(nearest - energy)) nearest = e;
    const double group_tol = 1e-8 * std::max(1.0, std::abs(nearest));

    double overlap = 0.0;
    for (long k = 0; k < n; ++k)
        if (std::abs(spectrum.eigenvalues[static_cast<std::size_t>(k)] - nearest) <= group_tol)
            overlap += std::norm(spectrum.eigenvectors.col(k).dot(t));
    return overlap;
}

double eigenstate_overlap(const ManifoldSpectrum& spectrum, NamedState which, double g) {
    const auto target = named_state(which);
    if (target.excitation_number != spectrum.excitation_number)
        throw Error(ErrorKind::InvalidArgument, "target belongs to a different excitation manifold");
    return eigenstate_overlap(spectrum, target.amplitudes, target.nominal_energy_per_g * g);
}

}  // namespace cavrad
