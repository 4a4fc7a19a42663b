#pragma once

#include <complex>
#include <vector>

#include <Eigen/Sparse>

namespace cavrad::detail {

/// RAII wrapper over UMFPACK's complex/int LU (packed complex storage). Every factorize()
/// runs a fresh symbolic analysis, so results never depend on earlier calls.
class UmfpackLU {
public:
    using Matrix = Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor, int>;
    using Vector = Eigen::VectorXcd;

    UmfpackLU();
    ~UmfpackLU();
    UmfpackLU(const UmfpackLU&) = delete;
    UmfpackLU& operator=(const UmfpackLU&) = delete;

    enum class Status { ok, singular, failed };

    /// Factorizes `a`, which must stay alive and unchanged while solve() is used.
    Status factorize(const Matrix& a);
    /// Solves A x = b with the last successful factorization.
    [[nodiscard]] bool solve(const Vector& b, Vector& x) const;

private:
    void release_numeric();
    void release_symbolic();

    const Matrix* matrix_ = nullptr;
    void* symbolic_ = nullptr;
    void* numeric_ = nullptr;
    std::vector<double> control_;
};

}  // namespace cavrad::detail
