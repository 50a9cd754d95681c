// generator.hpp: Structured time-dependent Hamiltonians.
//
// H(t) = diag(free) + Σ_k c_k(t) A_k with constant sparse A_k. Keeping the
// decomposition lets the integrators apply H(t) in O(nnz) and move into the
// interaction frame of the diagonal part without re-exponentiating anything.
#pragma once

#include "rabi/fock.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <vector>

namespace rabi {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Coefficient = std::function<cplx(double)>;

struct GeneratorTerm {
    SparseMatrix op;
    Coefficient coeff;  // empty means constant 1
};

class Generator {
public:
    explicit Generator(Space space);

    // Adds a constant diagonal part (e.g. ω a†a); it is the part removed when
    // integrating in the interaction frame.
    Generator& add_free_diagonal(const Eigen::VectorXd& diag);
    Generator& add_term(const Operator& op, Coefficient coeff = {});
    Generator& add_term(const Matrix& op, Coefficient coeff = {});

    // Escape hatch for arbitrary dense H(t); evaluated on every call.
    static Generator from_function(Space space, std::function<Matrix(double)> fn);

    Space space() const { return space_; }
    Index dim() const { return space_.dimension(); }
    const Eigen::VectorXd& free_diagonal() const { return free_; }
    bool has_free_part() const { return free_.size() > 0 && free_.cwiseAbs().maxCoeff() > 0.0; }

    // Sparse H(t), optionally without the free diagonal.
    SparseMatrix at(double t, bool include_free = true) const;

    Matrix dense(double t) const;
    Operator op(double t) const;

    const std::vector<GeneratorTerm>& terms() const { return terms_; }
    // True when built by from_function; such generators have no term list.
    bool is_dense_function() const { return static_cast<bool>(dense_fn_); }

private:
    Space space_;
    Eigen::VectorXd free_;
    std::vector<GeneratorTerm> terms_;
    std::function<Matrix(double)> dense_fn_;
};

}  // namespace rabi
