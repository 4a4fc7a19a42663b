#include "cavrad/system_model.hpp"

#include <cmath>

#include "cavrad/error.hpp"

namespace cavrad {

void SystemParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorKind::OutOfRange, what);
    };
    require(kappa > 0.0, "kappa must be > 0");
    require(gamma_gm >= 0.0, "gamma_gm must be >= 0");
    require(gamma_me >= 0.0, "gamma_me must be >= 0");
    require(eta >= 0.0, "eta must be >= 0");
    require(omega_l >= 0.0, "omega_l must be >= 0");
    require(ncut >= 1, "ncut must be >= 1");
    require(atom_count == 1 || atom_count == 2, "atom_count must be 1 or 2");
    require(std::isfinite(g) && std::isfinite(phi_z) && std::isfinite(delta_m) && std::isfinite(delta_l) &&
                std::isfinite(delta_cav),
            "parameters must be finite");
}

std::vector<double> SystemParams::couplings() const {
    std::vector<double> c{g};
    if (atom_count == 2) c.push_back(g * std::cos(phi_z));
    return c;
}

SystemParams single_atom_reference(const SystemParams& two_atom) {
    SystemParams one = two_atom;
    one.atom_count = 1;
    one.phi_z = 0.0;
    return one;
}

Operator hamiltonian(const SystemParams& params) {
    params.validate();
    const auto space = params.space();
    const auto a = annihilation(space);
    const auto ad = dagger(a);
    const auto g_j = params.couplings();

    Operator h = scale(params.delta_cav, ad * a);
    for (int j = 0; j < params.atom_count; ++j) {
        const auto s_mg = atomic_transition(space, j, Level::m, Level::g);
        const auto s_gm = atomic_transition(space, j, Level::g, Level::m);
        const auto s_em = atomic_transition(space, j, Level::e, Level::m);
        const auto s_me = atomic_transition(space, j, Level::m, Level::e);
        const double gj = g_j[static_cast<std::size_t>(j)];

        h = h + scale(params.delta_m, s_mg * s_gm) + scale(params.delta_e(), s_em * s_me);
        h = h + scale(gj, a * s_mg + ad * s_gm);
        h = h + scale(params.omega_l, s_em + s_me);
        h = h + scale(params.eta, s_mg + s_gm);
    }
    return h;
}

std::vector<CollapseChannel> collapse_channels(const SystemParams& params) {
    params.validate();
    const auto space = params.space();
    std::vector<CollapseChannel> out;
    out.push_back({params.kappa, annihilation(space), "kappa"});
    for (int j = 0; j < params.atom_count; ++j) {
        const auto tag = std::to_string(j + 1);
        out.push_back({params.gamma_gm, atomic_transition(space, j, Level::g, Level::m), "gamma_gm." + tag});
        out.push_back({params.gamma_me, atomic_transition(space, j, Level::m, Level::e), "gamma_me." + tag});
    }
    return out;
}

Liouvillian assemble_liouvillian(const Operator& h, const std::vector<CollapseChannel>& channels) {
    const auto& space = h.space();
    const long dim = space.dim();
    SparseMatrix id(dim, dim);
    id.setIdentity();

    const Complex minus_i{0.0, -1.0};
    const SparseMatrix ht = h.matrix().transpose();
    SparseMatrix l = minus_i * (kron(id, h.matrix()) - kron(ht, id));
    for (const auto& ch : channels) {
        if (ch.rate == 0.0) continue;
        if (!(ch.op.space() == space)) throw Error(ErrorKind::DimensionMismatch, "channel on a different space");
        const SparseMatrix& c = ch.op.matrix();
        const SparseMatrix cdc = c.adjoint() * c;
        const SparseMatrix cdc_t = cdc.transpose();
        const SparseMatrix c_bar = c.conjugate();
        l += ch.rate * (2.0 * kron(c_bar, c) - kron(id, cdc) - kron(cdc_t, id));
    }
    prune_small(l);
    return {space, std::move(l)};
}

Liouvillian liouvillian(const SystemParams& params) {
    return assemble_liouvillian(hamiltonian(params), collapse_channels(params));
}

Operator excitation_number(const SpaceDescriptor& space) {
    Operator n = number(space);
    for (int j = 0; j < space.atom_count(); ++j) n = n + atomic_transition(space, j, Level::m, Level::m);
    return n;
}

double trace_defect(const Liouvillian& l) {
    const long dim = l.space.dim();
    DenseVector row = DenseVector::Zero(l.matrix.cols());
    // vec(I)^dag L: only rows i + i*dim contribute.
    for (long k = 0; k < l.matrix.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(l.matrix, k); it; ++it)
            if (it.row() % (dim + 1) == 0) row(it.col()) += it.value();
    return row.size() == 0 ? 0.0 : row.cwiseAbs().maxCoeff();
}

DenseVector vectorize(const DenseMatrix& rho) {
    return Eigen::Map<const DenseVector>(rho.data(), rho.size());
}

DenseMatrix unvectorize(const DenseVector& v, long dim) {
    if (v.size() != dim * dim) throw Error(ErrorKind::DimensionMismatch, "vector length is not dim^2");
    return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

}  // namespace cavrad
