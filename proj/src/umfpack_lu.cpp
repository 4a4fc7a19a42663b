#include "umfpack_lu.hpp"

#include <umfpack.h>

namespace cavrad::detail {

namespace {

double* packed(std::complex<double>* p) { return reinterpret_cast<double*>(p); }
const double* packed(const std::complex<double>* p) { return reinterpret_cast<const double*>(p); }

}  // namespace

UmfpackLU::UmfpackLU() : control_(UMFPACK_CONTROL) { umfpack_zi_defaults(control_.data()); }

UmfpackLU::~UmfpackLU() {
    release_numeric();
    release_symbolic();
}

void UmfpackLU::release_numeric() {
    if (numeric_) umfpack_zi_free_numeric(&numeric_);
    numeric_ = nullptr;
}

void UmfpackLU::release_symbolic() {
    if (symbolic_) umfpack_zi_free_symbolic(&symbolic_);
    symbolic_ = nullptr;
}

UmfpackLU::Status UmfpackLU::factorize(const Matrix& a) {
    release_numeric();
    matrix_ = nullptr;
    const int n = static_cast<int>(a.rows());
    const int* ap = a.outerIndexPtr();
    const int* ai = a.innerIndexPtr();
    const double* ax = packed(a.valuePtr());

    release_symbolic();
    if (umfpack_zi_symbolic(n, n, ap, ai, ax, nullptr, &symbolic_, control_.data(), nullptr) != UMFPACK_OK) {
        release_symbolic();
        return Status::failed;
    }
    const int status = umfpack_zi_numeric(ap, ai, ax, nullptr, symbolic_, &numeric_, control_.data(), nullptr);
    if (status == UMFPACK_WARNING_singular_matrix) {
        release_numeric();
        return Status::singular;
    }
    if (status != UMFPACK_OK) {
        release_numeric();
        return Status::failed;
    }
    matrix_ = &a;
    return Status::ok;
}

bool UmfpackLU::solve(const Vector& b, Vector& x) const {
    if (!numeric_ || !matrix_) return false;
    x.resize(b.size());
    const int status = umfpack_zi_solve(UMFPACK_A, matrix_->outerIndexPtr(), matrix_->innerIndexPtr(),
                                        packed(matrix_->valuePtr()), nullptr, packed(x.data()), nullptr,
                                        packed(b.data()), nullptr, numeric_, control_.data(), nullptr);
    return status == UMFPACK_OK;
}

}  // namespace cavrad::detail
