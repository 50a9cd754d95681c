// fock.hpp: Truncated Hilbert-space primitives: operators, states, tensor
// products, matrix exponentials and truncation diagnostics.
//
// Conventions used throughout the library:
//   * composite spaces are ordered qubit ⊗ boson, so the basis index of
//     |q⟩|m⟩ is q * boson_dim + m;
//   * σ_z = |0⟩⟨0| − |1⟩⟨1| and σ^+ = |0⟩⟨1|;
//   * ħ = 1 and the oscillator frequency ω is the unit of energy.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <variant>

namespace rabi {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr cplx I{0.0, 1.0};

enum class SpaceKind { boson, qubit, composite };

struct Space {
    SpaceKind kind = SpaceKind::boson;
    int boson_dim = 0;

    static Space boson(int dim);
    static Space qubit() { return Space{SpaceKind::qubit, 0}; }
    static Space composite(int dim);

    Index dimension() const;
    bool has_boson() const { return kind != SpaceKind::qubit; }
    bool operator==(const Space&) const = default;
};

// Bit flags recording properties an operator was constructed to satisfy.
// Setting a flag validates it, so a flagged operator always honors it.
enum OperatorFlags : unsigned {
    kNoFlags = 0,
    kHermitian = 1u << 0,
    kUnitary = 1u << 1,
};

class Operator {
public:
    Operator(Matrix m, Space space, unsigned flags = kNoFlags);

    static Operator identity(Space space);
    static Operator zero(Space space);

    const Matrix& matrix() const { return m_; }
    Space space() const { return space_; }
    Index dim() const { return m_.rows(); }
    cplx operator()(Index r, Index c) const { return m_(r, c); }

    bool flagged_hermitian() const { return (flags_ & kHermitian) != 0; }
    bool flagged_unitary() const { return (flags_ & kUnitary) != 0; }
    unsigned flags() const { return flags_; }

    // max |A − A†|
    double hermiticity_defect() const;
    // max |A†A − I|
    double unitarity_defect() const;

    Operator adjoint() const;

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(cplx s);

    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }

private:
    Matrix m_;
    Space space_;
    unsigned flags_ = kNoFlags;
};

Operator commutator(const Operator& a, const Operator& b);

// ---- bosonic and qubit building blocks --------------------------------------

Operator annihilation(int dim);
Operator creation(int dim);
Operator number(int dim);
Operator parity(int dim);

Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
Operator sigma_plus();   // |0⟩⟨1|
Operator sigma_minus();  // |1⟩⟨0|

// Kronecker product qubit ⊗ boson.
Operator tensor(const Operator& qubit_part, const Operator& boson_part);

// Embeds a single-factor operator into the composite space.
Operator on_qubit(const Operator& q, int boson_dim);
Operator on_boson(const Operator& b);

// ---- matrix exponential -----------------------------------------------------

enum class ExpMethod {
    automatic,        // eigen route when scale·A is (anti-)Hermitian, Padé otherwise
    pade,             // scaling and squaring with Padé approximants
    hermitian_eigen,  // eigendecomposition; requires scale·A (anti-)Hermitian
};

// exp(scale · A)
Operator matrix_exponential(const Operator& a, cplx scale, ExpMethod method = ExpMethod::automatic);

// exp(−i t H) for Hermitian H through a cached eigendecomposition, so many
// times can be evaluated at O(dim²) each.
class HermitianPropagator {
public:
    explicit HermitianPropagator(const Operator& h);

    Matrix unitary(double t) const;
    Vector apply(double t, const Vector& v) const;
    const Eigen::VectorXd& eigenvalues() const { return evals_; }
    Space space() const { return space_; }

private:
    Eigen::VectorXd evals_;
    Matrix evecs_;
    Space space_;
};

// 𝒟(α) = exp(α a† − α* a), exponentiated from the truncated generator.
Operator displacement(int dim, cplx alpha);

// 𝒮(r) = exp((r* a² − r a†²) / 2)
Operator squeeze(int dim, cplx r);

// ---- states -----------------------------------------------------------------

class QuantumState {
public:
    static QuantumState pure(Vector v, Space space);
    static QuantumState mixed(Matrix rho, Space space);

    // Normalizes v; throws numeric when ‖v‖ is zero or non-finite.
    static QuantumState normalized(Vector v, Space space);

    bool is_pure() const { return std::holds_alternative<Vector>(data_); }
    const Vector& vector() const;
    const Matrix& density_matrix() const;
    Matrix to_density() const;
    QuantumState to_mixed() const;

    Space space() const { return space_; }
    Index dim() const;

    // ⟨A⟩
    cplx expectation(const Operator& a) const;

private:
    QuantumState(std::variant<Vector, Matrix> d, Space s) : data_(std::move(d)), space_(s) {}

    std::variant<Vector, Matrix> data_;
    Space space_;
};

QuantumState fock(int dim, int m);
QuantumState coherent(int dim, cplx alpha);
QuantumState qubit0();
QuantumState qubit1();
QuantumState plus_x();
QuantumState minus_x();

// |qubit⟩ ⊗ |boson⟩ (pure inputs only).
QuantumState product(const QuantumState& qubit, const QuantumState& boson);

// Bosonic state of a composite state with the qubit traced out.
QuantumState trace_out_qubit(const QuantumState& state);

// Population of the top k Fock levels (reduced to the boson when composite).
double leakage(const QuantumState& state, int k);

// Boson-level populations (qubit traced out for composite states).
Eigen::VectorXd fock_populations(const QuantumState& state);

}  // namespace rabi
