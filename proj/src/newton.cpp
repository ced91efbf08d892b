#include <cmath>

#include "ssre/tsmodels.hpp"

namespace ssre {

Eigen::VectorXd solve_ridged(const Eigen::MatrixXd& h, const Eigen::VectorXd& rhs, double& ridge) {
    if (h.rows() != h.cols() || h.rows() != rhs.size()) {
        throw Error(ErrorKind::ShapeError, "Newton system dimensions disagree");
    }
    if (!h.allFinite() || !rhs.allFinite()) {
        throw Error(ErrorKind::NumericalError, "non-finite Newton system");
    }
    const auto n = h.rows();
    ridge = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    double trial = 1e-8;
    while (llt.info() != Eigen::Success) {
        if (!std::isfinite(trial)) throw Error(ErrorKind::NumericalError, "ridge diverged");
        ridge = trial;
        llt.compute(h + ridge * Eigen::MatrixXd::Identity(n, n));
        trial *= 2.0;
    }
    return llt.solve(rhs);
}

NewtonState recursive_newton_update(const NewtonState& state, const Eigen::VectorXd& grad,
                                    const Eigen::MatrixXd& hess_term) {
    if (!grad.allFinite()) throw Error(ErrorKind::NumericalError, "non-finite gradient");
    if (grad.size() != state.theta.size() || hess_term.rows() != state.theta.size() ||
        hess_term.cols() != state.theta.size()) {
        throw Error(ErrorKind::ShapeError, "gradient/Hessian size does not match the parameter vector");
    }
    if (!(state.lambda > 0.0 && state.lambda <= 1.0)) {
        throw Error(ErrorKind::InvalidConfig, "forgetting factor lambda must lie in (0, 1]");
    }
    const double scale = 1.0 + hess_term.cwiseAbs().maxCoeff();
    if ((hess_term - hess_term.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorKind::ShapeError, "Hessian increment is not symmetric");
    }

    NewtonState next = state;
    if (next.hessian.size() == 0) next.hessian = Eigen::MatrixXd::Zero(grad.size(), grad.size());
    next.hessian = state.lambda * next.hessian + hess_term;
    next.theta = state.theta - solve_ridged(next.hessian, grad, next.ridge);
    return next;
}

}  // namespace ssre
