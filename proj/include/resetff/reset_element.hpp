#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "resetff/lti.hpp"

namespace resetff {

/// True iff all eigenvalue magnitudes are strictly inside the unit circle.
inline bool is_schur(const Matrix& A) {
    if (A.rows() == 0) return true;
    Eigen::EigenSolver<Matrix> es(A, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()(i)) >= 1.0) return false;
    }
    return true;
}

/// Discrete-time reset trigger: fires on an exact error zero or a sign
/// change between consecutive samples.
inline bool is_reset_instant(double e, double e_prev) {
    if (e == 0.0) return true;
    return e_prev != 0.0 && std::signbit(e) != std::signbit(e_prev) ;
}

/// A linear filter whose marked states are remapped through A_rho whenever
/// the driving error crosses zero. States outside reset_mask keep identity
/// rows and columns in the effective jump map.
struct ResetElement {
    StateSpace base;
    Matrix A_rho;
    std::vector<bool> reset_mask;

    ResetElement() = default;

    ResetElement(StateSpace base_, Matrix A_rho_, std::vector<bool> mask)
        : base(std::move(base_)), A_rho(std::move(A_rho_)), reset_mask(std::move(mask)) {
        const auto n = base.order();
        if (A_rho.rows() != n || A_rho.cols() != n ||
            static_cast<Eigen::Index>(reset_mask.size()) != n) {
            throw std::invalid_argument("ResetElement: jump map dimension mismatch");
        }
    }

    /// Jump matrix with identity on non-resettable states.
    Matrix effective_jump() const {
        const auto n = base.order();
        Matrix J = Matrix::Identity(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!reset_mask[static_cast<std::size_t>(i)]) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (reset_mask[static_cast<std::size_t>(j)]) J(i, j) = A_rho(i, j);
                else J(i, j) = (i == j) ? 1.0 : 0.0;
            }
        }
        return J;
    }

    /// Open-loop validity of the jump map (strict Schur stability).
    bool jump_is_schur() const { return is_schur(A_rho); }
};

/// Clegg integrator: integrator that resets its state to zero.
inline ResetElement make_ci() {
    StateSpace base(Matrix::Zero(1, 1), Vector::Ones(1), RowVector::Ones(1), 0.0);
    return ResetElement(std::move(base), Matrix::Zero(1, 1), {true});
}

/// Generalized first-order reset element: first-order low-pass with corner
/// omega_r whose state resets to gamma times its pre-reset value. gamma = 0
/// recovers FORE; gamma = 1 disables the reset action. Non-Schur gamma is
/// permitted for experimentation; check jump_is_schur().
inline ResetElement make_gfore(double omega_r, double gamma) {
    if (omega_r <= 0.0) throw std::invalid_argument("make_gfore: omega_r must be positive");
    StateSpace base((Matrix(1, 1) << -omega_r).finished(),
                    (Vector(1) << omega_r).finished(), RowVector::Ones(1), 0.0);
    return ResetElement(std::move(base), (Matrix(1, 1) << gamma).finished(), {true});
}

/// Generalized second-order reset element with damping beta_r; both states
/// reset to gamma times their pre-reset values.
inline ResetElement make_gsore(double omega_r, double beta_r, double gamma) {
    if (omega_r <= 0.0) throw std::invalid_argument("make_gsore: omega_r must be positive");
    if (beta_r < 0.0) throw std::invalid_argument("make_gsore: beta_r must be nonnegative");
    Matrix A(2, 2);
    A << 0.0, 1.0, -omega_r * omega_r, -2.0 * beta_r * omega_r;
    Vector B(2);
    B << 0.0, omega_r * omega_r;
    RowVector C(2);
    C << 1.0, 0.0;
    return ResetElement(StateSpace(std::move(A), std::move(B), std::move(C), 0.0),
                        gamma * Matrix::Identity(2, 2), {true, true});
}

/// Constant-in-gain, lead-in-phase element: a GFORE at omega_ralpha paired
/// with the linear lead (s/omega_r + 1)/(s/omega_f + 1). Only the GFORE
/// state is resettable.
struct CgLp {
    ResetElement reset;
    StateSpace lead;
};

inline CgLp make_cglp_first_order(double omega_ralpha, double omega_r, double omega_f,
                                  double gamma) {
    if (!(omega_ralpha < omega_r && omega_r < omega_f)) {
        throw std::invalid_argument(
            "make_cglp_first_order: corner ordering omega_ralpha < omega_r < omega_f violated");
    }
    TransferFunction lead_tf(Polynomial{1.0 / omega_r, 1.0}, Polynomial{1.0 / omega_f, 1.0});
    return CgLp{make_gfore(omega_ralpha, gamma), tf_to_ss(lead_tf)};
}

struct ResetStepResult {
    double u{0.0};
    bool did_reset{false};
    double jump{0.0};  // change in output value caused by the state reset
};

/// Fixed-rate hybrid stepper for a reset element. The base dynamics are
/// Tustin-discretized once at construction. Each step applies the jump
/// (when the error triggers it), emits the output at the post-jump state,
/// then advances the flow by one sample. No reset fires on the first
/// sample; at most one jump per sample by construction.
class ResetElementStepper {
public:
    ResetElementStepper(const ResetElement& element, double Ts)
        : disc_(tustin(element.base, Ts)),
          jump_(element.effective_jump()),
          x_(Vector::Zero(element.base.order())) {}

    ResetStepResult step(double e) {
        ResetStepResult out;
        if (!first_ && is_reset_instant(e, e_prev_)) {
            const double u_before = disc_.C.dot(x_) + disc_.D * e;
            x_ = jump_ * x_;
            const double u_after = disc_.C.dot(x_) + disc_.D * e;
            out.did_reset = true;
            out.jump = u_after - u_before;
            tau_ = 0.0;
        } else {
            tau_ += disc_.Ts;
        }
        out.u = disc_.step(x_, e);
        e_prev_ = e;
        first_ = false;
        return out;
    }

    const Vector& state() const { return x_; }
    void set_state(Vector x) {
        if (x.size() != x_.size()) throw std::invalid_argument("set_state: dimension mismatch");
        x_ = std::move(x);
    }
    double tau() const { return tau_; }
    double e_prev() const { return e_prev_; }
    const DiscreteStateSpace& discretized() const { return disc_; }

private:
    DiscreteStateSpace disc_;
    Matrix jump_;
    Vector x_;
    double e_prev_{0.0};
    double tau_{0.0};
    bool first_{true};
};

}  // namespace resetff
