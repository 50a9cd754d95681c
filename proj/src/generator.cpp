#include "rabi/generator.hpp"

#include "rabi/error.hpp"

namespace rabi {

Generator::Generator(Space space) : space_(space) {}

Generator& Generator::add_free_diagonal(const Eigen::VectorXd& diag) {
    if (diag.size() != dim()) throw Error(ErrorKind::invalid_dimension, "free diagonal size mismatch");
    if (free_.size() == 0) free_ = Eigen::VectorXd::Zero(dim());
    free_ += diag;
    return *this;
}

Generator& Generator::add_term(const Matrix& op, Coefficient coeff) {
    if (op.rows() != dim() || op.cols() != dim()) throw Error(ErrorKind::invalid_dimension, "generator term size mismatch");
    terms_.push_back({op.sparseView(0.0, 0.0), std::move(coeff)});
    terms_.back().op.makeCompressed();
    return *this;
}

Generator& Generator::add_term(const Operator& op, Coefficient coeff) {
    if (!(op.space() == space_)) throw Error(ErrorKind::composition, "generator term on a different space");
    return add_term(op.matrix(), std::move(coeff));
}

Generator Generator::from_function(Space space, std::function<Matrix(double)> fn) {
    Generator g(space);
    g.dense_fn_ = std::move(fn);
    return g;
}

SparseMatrix Generator::at(double t, bool include_free) const {
    SparseMatrix h(dim(), dim());
    if (include_free && free_.size() > 0) {
        std::vector<Eigen::Triplet<cplx>> diag;
        diag.reserve(static_cast<std::size_t>(dim()));
        for (Index k = 0; k < dim(); ++k)
            if (free_(k) != 0.0) diag.emplace_back(k, k, free_(k));
        h.setFromTriplets(diag.begin(), diag.end());
    }
    for (const auto& term : terms_) {
        const cplx c = term.coeff ? term.coeff(t) : cplx(1.0, 0.0);
        if (c != cplx(0.0, 0.0)) h += c * term.op;
    }
    if (dense_fn_) h += SparseMatrix(dense_fn_(t).sparseView(0.0, 0.0));
    h.makeCompressed();
    return h;
}

Matrix Generator::dense(double t) const { return Matrix(at(t, true)); }

Operator Generator::op(double t) const {
    return Operator(dense(t), space_, kHermitian);
}

}  // namespace rabi
