#include "rabi/fock.hpp"

#include "rabi/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace rabi {
namespace {

constexpr double kHermitianRelTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;
constexpr double kPureNormTol = 1e-9;
constexpr double kMixedTraceTol = 1e-7;
constexpr double kMixedHermTol = 1e-9;
constexpr double kMixedMinEig = -1e-7;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_finite(const Matrix& m, const char* where) {
    if (!m.allFinite()) throw Error(ErrorKind::numeric, std::string(where) + ": non-finite entries");
}

}  // namespace

// ---- Space ------------------------------------------------------------------

Space Space::boson(int dim) {
    if (dim < 1) throw Error(ErrorKind::invalid_dimension, "boson dimension must be positive");
    return Space{SpaceKind::boson, dim};
}

Space Space::composite(int dim) {
    if (dim < 1) throw Error(ErrorKind::invalid_dimension, "boson dimension must be positive");
    return Space{SpaceKind::composite, dim};
}

Index Space::dimension() const {
    switch (kind) {
        case SpaceKind::boson: return boson_dim;
        case SpaceKind::qubit: return 2;
        case SpaceKind::composite: return 2 * static_cast<Index>(boson_dim);
    }
    return 0;
}

// ---- Operator ---------------------------------------------------------------

Operator::Operator(Matrix m, Space space, unsigned flags)
    : m_(std::move(m)), space_(space), flags_(flags) {
    if (m_.rows() != m_.cols())
        throw Error(ErrorKind::invalid_dimension, "operator matrix must be square");
    if (m_.rows() != space_.dimension())
        throw Error(ErrorKind::invalid_dimension,
                    "operator of size " + std::to_string(m_.rows()) + " does not match its space (" +
                        std::to_string(space_.dimension()) + ")");
    if ((flags_ & kHermitian) && hermiticity_defect() > kHermitianRelTol * max_abs(m_))
        throw Error(ErrorKind::numeric, "operator flagged Hermitian is not Hermitian");
    if ((flags_ & kUnitary) && unitarity_defect() > kUnitaryTol)
        throw Error(ErrorKind::numeric, "operator flagged unitary is not unitary");
}

Operator Operator::identity(Space space) {
    const Index d = space.dimension();
    return Operator(Matrix::Identity(d, d), space, kHermitian | kUnitary);
}

Operator Operator::zero(Space space) {
    const Index d = space.dimension();
    return Operator(Matrix::Zero(d, d), space, kHermitian);
}

double Operator::hermiticity_defect() const { return max_abs(m_ - m_.adjoint()); }

double Operator::unitarity_defect() const {
    return max_abs(m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols()));
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), space_, flags_); }

Operator& Operator::operator+=(const Operator& rhs) {
    if (!(space_ == rhs.space_)) throw Error(ErrorKind::composition, "adding operators on different spaces");
    m_ += rhs.m_;
    flags_ &= rhs.flags_ & kHermitian;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    if (!(space_ == rhs.space_))
        throw Error(ErrorKind::composition, "subtracting operators on different spaces");
    m_ -= rhs.m_;
    flags_ &= rhs.flags_ & kHermitian;
    return *this;
}

Operator& Operator::operator*=(cplx s) {
    m_ *= s;
    unsigned keep = kNoFlags;
    if (s.imag() == 0.0) keep |= kHermitian;
    if (std::abs(std::abs(s) - 1.0) == 0.0) keep |= kUnitary;
    flags_ &= keep;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    if (!(a.space_ == b.space_)) throw Error(ErrorKind::composition, "multiplying operators on different spaces");
    return Operator(a.m_ * b.m_, a.space_, a.flags_ & b.flags_ & kUnitary);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// ---- building blocks --------------------------------------------------------

Operator annihilation(int dim) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "annihilation needs dim >= 2");
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) m(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
    return Operator(std::move(m), Space::boson(dim));
}

Operator creation(int dim) { return annihilation(dim).adjoint(); }

Operator number(int dim) {
    if (dim < 1) throw Error(ErrorKind::invalid_dimension, "number operator needs dim >= 1");
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) m(k, k) = static_cast<double>(k);
    return Operator(std::move(m), Space::boson(dim), kHermitian);
}

Operator parity(int dim) {
    Matrix m = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) m(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return Operator(std::move(m), Space::boson(dim), kHermitian | kUnitary);
}

Operator sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return Operator(std::move(m), Space::qubit(), kHermitian | kUnitary);
}

Operator sigma_y() {
    Matrix m(2, 2);
    m << 0.0, -I, I, 0.0;
    return Operator(std::move(m), Space::qubit(), kHermitian | kUnitary);
}

Operator sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return Operator(std::move(m), Space::qubit(), kHermitian | kUnitary);
}

Operator sigma_plus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return Operator(std::move(m), Space::qubit());
}

Operator sigma_minus() { return sigma_plus().adjoint(); }

Operator tensor(const Operator& qubit_part, const Operator& boson_part) {
    if (qubit_part.space().kind != SpaceKind::qubit || boson_part.space().kind != SpaceKind::boson)
        throw Error(ErrorKind::composition, "tensor expects (qubit, boson) factors in that order");
    const Index d = boson_part.dim();
    const Matrix& q = qubit_part.matrix();
    const Matrix& b = boson_part.matrix();
    Matrix m(2 * d, 2 * d);
    for (Index r = 0; r < 2; ++r)
        for (Index c = 0; c < 2; ++c) m.block(r * d, c * d, d, d) = q(r, c) * b;
    const unsigned flags = qubit_part.flags() & boson_part.flags();
    return Operator(std::move(m), Space::composite(static_cast<int>(d)), flags);
}

Operator on_qubit(const Operator& q, int boson_dim) {
    return tensor(q, Operator::identity(Space::boson(boson_dim)));
}

Operator on_boson(const Operator& b) { return tensor(Operator::identity(Space::qubit()), b); }

// ---- matrix exponential -----------------------------------------------------

namespace {

enum class Symmetry { none, hermitian, anti_hermitian };

Symmetry classify(const Matrix& m) {
    const double scale = std::max(max_abs(m), 1e-300);
    if (max_abs(m - m.adjoint()) <= kHermitianRelTol * scale) return Symmetry::hermitian;
    if (max_abs(m + m.adjoint()) <= kHermitianRelTol * scale) return Symmetry::anti_hermitian;
    return Symmetry::none;
}

Matrix exp_eigen(const Matrix& m, Symmetry sym) {
    // m = H (Hermitian) or m = iH (anti-Hermitian)
    const Matrix h = (sym == Symmetry::hermitian) ? Matrix(0.5 * (m + m.adjoint()))
                                                   : Matrix(-0.5 * I * (m - m.adjoint()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    Vector f(lam.size());
    for (Index k = 0; k < lam.size(); ++k)
        f(k) = (sym == Symmetry::hermitian) ? cplx(std::exp(lam(k)), 0.0) : std::exp(I * lam(k));
    const Matrix& v = es.eigenvectors();
    return v * f.asDiagonal() * v.adjoint();
}

}  // namespace

Operator matrix_exponential(const Operator& a, cplx scale, ExpMethod method) {
    require_finite(a.matrix(), "matrix_exponential");
    if (!std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
        throw Error(ErrorKind::numeric, "matrix_exponential: non-finite scale");
    const Matrix m = scale * a.matrix();
    if (scale == cplx(0.0, 0.0)) return Operator::identity(a.space());

    const Symmetry sym = (method == ExpMethod::pade) ? Symmetry::none : classify(m);
    if (method == ExpMethod::hermitian_eigen && sym == Symmetry::none)
        throw Error(ErrorKind::numeric, "hermitian_eigen route needs a Hermitian or anti-Hermitian generator");

    Matrix e;
    if (sym == Symmetry::none) {
        e = m.exp();
    } else {
        e = exp_eigen(m, sym);
    }
    require_finite(e, "matrix_exponential");
    unsigned flags = kNoFlags;
    if (sym == Symmetry::anti_hermitian) flags = kUnitary;
    if (sym == Symmetry::hermitian) flags = kHermitian;
    return Operator(std::move(e), a.space(), flags);
}

HermitianPropagator::HermitianPropagator(const Operator& h) : space_(h.space()) {
    require_finite(h.matrix(), "HermitianPropagator");
    const Matrix& m = h.matrix();
    if (max_abs(m - m.adjoint()) > kHermitianRelTol * std::max(max_abs(m), 1e-300))
        throw Error(ErrorKind::numeric, "HermitianPropagator needs a Hermitian generator");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "eigendecomposition failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
}

Matrix HermitianPropagator::unitary(double t) const {
    Vector f(evals_.size());
    for (Index k = 0; k < evals_.size(); ++k) f(k) = std::exp(-I * (t * evals_(k)));
    return evecs_ * f.asDiagonal() * evecs_.adjoint();
}

Vector HermitianPropagator::apply(double t, const Vector& v) const {
    Vector c = evecs_.adjoint() * v;
    for (Index k = 0; k < evals_.size(); ++k) c(k) *= std::exp(-I * (t * evals_(k)));
    return evecs_ * c;
}

Operator displacement(int dim, cplx alpha) {
    const Operator a = annihilation(dim);
    const Operator gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return matrix_exponential(gen, 1.0);
}

Operator squeeze(int dim, cplx r) {
    if (dim < 4) throw Error(ErrorKind::invalid_dimension, "squeeze needs dim >= 4");
    const Operator a = annihilation(dim);
    const Operator a2 = a * a;
    const Operator gen = std::conj(r) * a2 - r * a2.adjoint();
    return matrix_exponential(gen, 0.5);
}

// ---- states -----------------------------------------------------------------

QuantumState QuantumState::pure(Vector v, Space space) {
    if (v.size() != space.dimension()) throw Error(ErrorKind::invalid_dimension, "state size does not match space");
    if (!v.allFinite()) throw Error(ErrorKind::numeric, "state has non-finite amplitudes");
    if (std::abs(v.norm() - 1.0) > kPureNormTol)
        throw Error(ErrorKind::numeric, "pure state is not normalized (|‖ψ‖−1| = " +
                                            std::to_string(std::abs(v.norm() - 1.0)) + ")");
    return QuantumState(std::move(v), space);
}

QuantumState QuantumState::normalized(Vector v, Space space) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::numeric, "cannot normalize a zero or non-finite vector");
    v /= n;
    return pure(std::move(v), space);
}

QuantumState QuantumState::mixed(Matrix rho, Space space) {
    if (rho.rows() != space.dimension() || rho.cols() != space.dimension())
        throw Error(ErrorKind::invalid_dimension, "density matrix does not match space");
    if (!rho.allFinite()) throw Error(ErrorKind::numeric, "density matrix has non-finite entries");
    if (std::abs(rho.trace() - 1.0) > kMixedTraceTol) throw Error(ErrorKind::numeric, "density matrix trace is not 1");
    if (max_abs(rho - rho.adjoint()) > kMixedHermTol) throw Error(ErrorKind::numeric, "density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kMixedMinEig)
        throw Error(ErrorKind::numeric, "density matrix has a negative eigenvalue " +
                                            std::to_string(es.eigenvalues().minCoeff()));
    return QuantumState(std::move(rho), space);
}

const Vector& QuantumState::vector() const {
    if (!is_pure()) throw Error(ErrorKind::usage, "state is mixed; no state vector");
    return std::get<Vector>(data_);
}

const Matrix& QuantumState::density_matrix() const {
    if (is_pure()) throw Error(ErrorKind::usage, "state is pure; call to_density()");
    return std::get<Matrix>(data_);
}

Matrix QuantumState::to_density() const {
    if (is_pure()) {
        const Vector& v = std::get<Vector>(data_);
        return v * v.adjoint();
    }
    return std::get<Matrix>(data_);
}

QuantumState QuantumState::to_mixed() const {
    if (!is_pure()) return *this;
    return QuantumState(to_density(), space_);
}

Index QuantumState::dim() const { return space_.dimension(); }

cplx QuantumState::expectation(const Operator& a) const {
    if (!(a.space() == space_)) throw Error(ErrorKind::composition, "operator and state live on different spaces");
    if (is_pure()) {
        const Vector& v = std::get<Vector>(data_);
        return v.dot(a.matrix() * v);
    }
    return (a.matrix() * std::get<Matrix>(data_)).trace();
}

QuantumState fock(int dim, int m) {
    if (m < 0 || m >= dim) throw Error(ErrorKind::out_of_range, "Fock level outside truncation");
    Vector v = Vector::Zero(dim);
    v(m) = 1.0;
    return QuantumState::pure(std::move(v), Space::boson(dim));
}

QuantumState coherent(int dim, cplx alpha) {
    if (dim < 1) throw Error(ErrorKind::invalid_dimension, "coherent state needs dim >= 1");
    Vector v(dim);
    cplx amp = std::exp(-0.5 * std::norm(alpha));
    for (int m = 0; m < dim; ++m) {
        v(m) = amp;
        amp *= alpha / std::sqrt(static_cast<double>(m + 1));
    }
    return QuantumState::normalized(std::move(v), Space::boson(dim));
}

QuantumState qubit0() {
    Vector v(2);
    v << 1.0, 0.0;
    return QuantumState::pure(std::move(v), Space::qubit());
}

QuantumState qubit1() {
    Vector v(2);
    v << 0.0, 1.0;
    return QuantumState::pure(std::move(v), Space::qubit());
}

QuantumState plus_x() {
    Vector v(2);
    v << M_SQRT1_2, M_SQRT1_2;
    return QuantumState::pure(std::move(v), Space::qubit());
}

QuantumState minus_x() {
    Vector v(2);
    v << M_SQRT1_2, -M_SQRT1_2;
    return QuantumState::pure(std::move(v), Space::qubit());
}

QuantumState product(const QuantumState& qubit, const QuantumState& boson) {
    if (qubit.space().kind != SpaceKind::qubit || boson.space().kind != SpaceKind::boson)
        throw Error(ErrorKind::composition, "product expects (qubit, boson) states");
    const Vector& q = qubit.vector();
    const Vector& b = boson.vector();
    const Index d = b.size();
    Vector v(2 * d);
    v.head(d) = q(0) * b;
    v.tail(d) = q(1) * b;
    return QuantumState::normalized(std::move(v), Space::composite(static_cast<int>(d)));
}

QuantumState trace_out_qubit(const QuantumState& state) {
    if (state.space().kind != SpaceKind::composite)
        throw Error(ErrorKind::usage, "trace_out_qubit expects a composite state");
    const Index d = state.space().boson_dim;
    Matrix rb;
    if (state.is_pure()) {
        const Vector& v = state.vector();
        rb = v.head(d) * v.head(d).adjoint() + v.tail(d) * v.tail(d).adjoint();
    } else {
        const Matrix& r = state.density_matrix();
        rb = r.topLeftCorner(d, d) + r.bottomRightCorner(d, d);
    }
    rb = 0.5 * (rb + rb.adjoint());
    rb /= rb.trace().real();
    return QuantumState::mixed(std::move(rb), Space::boson(static_cast<int>(d)));
}

Eigen::VectorXd fock_populations(const QuantumState& state) {
    if (!state.space().has_boson()) throw Error(ErrorKind::usage, "state has no bosonic factor");
    const Index d = state.space().boson_dim;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
    const Index blocks = state.space().kind == SpaceKind::composite ? 2 : 1;
    for (Index q = 0; q < blocks; ++q) {
        for (Index m = 0; m < d; ++m) {
            const Index i = q * d + m;
            p(m) += state.is_pure() ? std::norm(state.vector()(i)) : state.density_matrix()(i, i).real();
        }
    }
    return p;
}

double leakage(const QuantumState& state, int k) {
    const Eigen::VectorXd p = fock_populations(state);
    if (k < 0 || k >= p.size()) throw Error(ErrorKind::out_of_range, "leakage window must satisfy 0 <= k < dim");
    return p.tail(k).sum();
}

}  // namespace rabi
