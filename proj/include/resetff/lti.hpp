#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace resetff {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Complex = std::complex<double>;

/// Real polynomial in s, coefficients stored highest degree first.
/// Leading zeros are trimmed on construction; the zero polynomial is {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}

    Polynomial(std::initializer_list<double> coeffs)
        : Polynomial(std::vector<double>(coeffs)) {}

    explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) {
            coeffs_ = {0.0};
        }
        std::size_t lead = 0;
        while (lead + 1 < coeffs_.size() && coeffs_[lead] == 0.0) {
            ++lead;
        }
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
    double leading() const { return coeffs_.front(); }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Coefficient of s^k (0 for k above the degree).
    double coeff_of(int k) const {
        if (k < 0 || k > degree()) return 0.0;
        return coeffs_[static_cast<std::size_t>(degree() - k)];
    }

    Complex eval(Complex s) const {
        Complex acc{0.0, 0.0};
        for (double c : coeffs_) acc = acc * s + c;
        return acc;
    }

    double eval(double s) const {
        double acc = 0.0;
        for (double c : coeffs_) acc = acc * s + c;
        return acc;
    }

    Polynomial operator*(const Polynomial& rhs) const {
        if (is_zero() || rhs.is_zero()) return Polynomial{};
        std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
                out[i + j] += coeffs_[i] * rhs.coeffs_[j];
            }
        }
        return Polynomial(std::move(out));
    }

private:
    std::vector<double> coeffs_;
};

/// Proper SISO rational transfer function num(s)/den(s).
struct TransferFunction {
    Polynomial num;
    Polynomial den{{1.0}};

    TransferFunction() : num{}, den{{1.0}} {}

    TransferFunction(Polynomial num_, Polynomial den_)
        : num(std::move(num_)), den(std::move(den_)) {
        if (den.is_zero()) {
            throw std::invalid_argument("TransferFunction: denominator is identically zero");
        }
        if (num.degree() > den.degree() && !num.is_zero()) {
            throw std::invalid_argument("TransferFunction: improper (deg num > deg den)");
        }
    }

    Complex eval(Complex s) const { return num.eval(s) / den.eval(s); }
};

/// Continuous-time SISO state space: xdot = A x + B u, y = C x + D u.
struct StateSpace {
    Matrix A;
    Vector B;
    RowVector C;
    double D{0.0};

    StateSpace() : A(0, 0), B(0), C(0) {}

    StateSpace(Matrix A_, Vector B_, RowVector C_, double D_)
        : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), D(D_) {
        if (A.rows() != A.cols() || B.size() != A.rows() || C.size() != A.rows()) {
            throw std::invalid_argument("StateSpace: inconsistent dimensions");
        }
    }

    Eigen::Index order() const { return A.rows(); }
};

/// Discrete-time SISO state space at sampling period Ts.
struct DiscreteStateSpace {
    Matrix A;
    Vector B;
    RowVector C;
    double D{0.0};
    double Ts{0.0};

    DiscreteStateSpace() : A(0, 0), B(0), C(0) {}

    DiscreteStateSpace(Matrix A_, Vector B_, RowVector C_, double D_, double Ts_)
        : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), D(D_), Ts(Ts_) {
        if (Ts <= 0.0) {
            throw std::invalid_argument("DiscreteStateSpace: Ts must be positive");
        }
        if (A.rows() != A.cols() || B.size() != A.rows() || C.size() != A.rows()) {
            throw std::invalid_argument("DiscreteStateSpace: inconsistent dimensions");
        }
    }

    Eigen::Index order() const { return A.rows(); }

    /// One simulation step: returns y_k and advances the state.
    double step(Vector& x, double u) const {
        const double y = C.dot(x) + D * u;
        x = A * x + B * u;
        return y;
    }
};

/// Controllable canonical realization of a proper transfer function.
inline StateSpace tf_to_ss(const TransferFunction& tf) {
    if (tf.den.is_zero() || tf.den.leading() == 0.0) {
        throw std::invalid_argument("tf_to_ss: denominator not realizable");
    }
    if (tf.num.degree() > tf.den.degree()) {
        throw std::invalid_argument("tf_to_ss: improper transfer function");
    }
    const int n = tf.den.degree();
    const double a_lead = tf.den.leading();

    // Monic denominator a(s), scaled numerator b(s).
    std::vector<double> a(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) a[static_cast<std::size_t>(k)] = tf.den.coeff_of(k) / a_lead;
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= tf.num.degree(); ++k) {
        b[static_cast<std::size_t>(k)] = tf.num.coeff_of(k) / a_lead;
    }

    const double D = b[static_cast<std::size_t>(n)];
    if (n == 0) {
        return StateSpace(Matrix(0, 0), Vector(0), RowVector(0), D);
    }

    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) A(n - 1, j) = -a[static_cast<std::size_t>(j)];

    Vector B = Vector::Zero(n);
    B(n - 1) = 1.0;

    RowVector C(n);
    for (int j = 0; j < n; ++j) {
        C(j) = b[static_cast<std::size_t>(j)] - D * a[static_cast<std::size_t>(j)];
    }
    return StateSpace(std::move(A), std::move(B), std::move(C), D);
}

/// Series interconnection: input -> first -> second -> output.
inline StateSpace series(const StateSpace& first, const StateSpace& second) {
    const Eigen::Index n1 = first.order();
    const Eigen::Index n2 = second.order();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = first.A;
    A.bottomLeftCorner(n2, n1) = second.B * first.C;
    A.bottomRightCorner(n2, n2) = second.A;
    Vector B(n1 + n2);
    B.head(n1) = first.B;
    B.tail(n2) = second.B * first.D;
    RowVector C(n1 + n2);
    C.head(n1) = first.C * second.D;
    C.tail(n2) = second.C;
    return StateSpace(std::move(A), std::move(B), std::move(C), second.D * first.D);
}

/// Scale the output map by a static gain.
inline StateSpace scale_output(StateSpace sys, double gain) {
    sys.C *= gain;
    sys.D *= gain;
    return sys;
}

/// Bilinear (Tustin) discretization, s <- (2/Ts)(z-1)/(z+1).
inline DiscreteStateSpace tustin(const StateSpace& sys, double Ts) {
    if (Ts <= 0.0) throw std::invalid_argument("tustin: Ts must be positive");
    const Eigen::Index n = sys.order();
    if (n == 0) {
        return DiscreteStateSpace(Matrix(0, 0), Vector(0), RowVector(0), sys.D, Ts);
    }
    const Matrix E = Matrix::Identity(n, n) - sys.A * (Ts / 2.0);
    Eigen::FullPivLU<Matrix> lu(E);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("tustin: (I - A*Ts/2) is singular");
    }
    const Matrix M = lu.inverse();
    Matrix Ad = M * (Matrix::Identity(n, n) + sys.A * (Ts / 2.0));
    Vector Bd = M * sys.B * Ts;
    RowVector Cd = sys.C * M;
    const double Dd = sys.D + (sys.C * M * sys.B)(0, 0) * (Ts / 2.0);
    return DiscreteStateSpace(std::move(Ad), std::move(Bd), std::move(Cd), Dd, Ts);
}

/// Matrix exponential by scaling and squaring with a Taylor series,
/// truncated at relative tolerance 1e-12.
inline Matrix expm(const Matrix& A) {
    const Eigen::Index n = A.rows();
    if (n == 0) return Matrix(0, 0);
    if (A.cols() != n) throw std::invalid_argument("expm: matrix must be square");

    const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const Matrix B = A / std::pow(2.0, squarings);

    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= 64; ++k) {
        term = term * B / static_cast<double>(k);
        result += term;
        if (term.norm() <= 1e-12 * result.norm()) break;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

/// Zero-order-hold discretization via the augmented-matrix exponential.
inline DiscreteStateSpace zoh(const StateSpace& sys, double Ts) {
    if (Ts <= 0.0) throw std::invalid_argument("zoh: Ts must be positive");
    const Eigen::Index n = sys.order();
    if (n == 0) {
        return DiscreteStateSpace(Matrix(0, 0), Vector(0), RowVector(0), sys.D, Ts);
    }
    Matrix aug = Matrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = sys.A * Ts;
    aug.topRightCorner(n, 1) = sys.B * Ts;
    const Matrix E = expm(aug);
    Matrix Ad = E.topLeftCorner(n, n);
    Vector Bd = E.topRightCorner(n, 1);
    return DiscreteStateSpace(std::move(Ad), std::move(Bd), RowVector(sys.C), sys.D, Ts);
}

/// True iff all eigenvalues have real part < -tol.
inline bool is_hurwitz(const Matrix& A, double tol = 1e-9) {
    if (A.rows() == 0) return true;
    Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i).real() >= -tol) return false;
    }
    return true;
}

/// Solve A^T P + P A = -Q for symmetric positive definite P via the
/// Kronecker-vectorized linear system. A must be Hurwitz and Q symmetric
/// positive definite.
inline Matrix lyap_solve(const Matrix& A, const Matrix& Q) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || Q.rows() != n || Q.cols() != n) {
        throw std::invalid_argument("lyap_solve: dimension mismatch");
    }
    if (!is_hurwitz(A)) {
        Eigen::EigenSolver<Matrix> es(A, false);
        std::ostringstream oss;
        oss << "lyap_solve: A is not Hurwitz; eigenvalues:";
        for (Eigen::Index i = 0; i < n; ++i) {
            oss << " (" << es.eigenvalues()(i).real() << (es.eigenvalues()(i).imag() >= 0 ? "+" : "")
                << es.eigenvalues()(i).imag() << "j)";
        }
        throw std::invalid_argument(oss.str());
    }

    // vec(A^T P) = (I (x) A^T) vec(P), vec(P A) = (A^T (x) I) vec(P).
    const Matrix At = A.transpose();
    Matrix K = Matrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K.block(i * n, i * n, n, n) += At;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            K.block(i * n, j * n, n, n).diagonal().array() += At(i, j);
        }
    }
    Vector q(n * n);
    for (Eigen::Index j = 0; j < n; ++j) q.segment(j * n, n) = -Q.col(j);

    const Vector p = K.partialPivLu().solve(q);
    Matrix P(n, n);
    for (Eigen::Index j = 0; j < n; ++j) P.col(j) = p.segment(j * n, n);
    P = ((P + P.transpose()) / 2.0).eval();
    return P;
}

/// Frequency response C (jw I - A)^-1 B + D.
inline Complex freq_response(const StateSpace& sys, double omega) {
    const Eigen::Index n = sys.order();
    if (n == 0) return Complex(sys.D, 0.0);
    Eigen::MatrixXcd R = Complex(0.0, omega) * Eigen::MatrixXcd::Identity(n, n) -
                         sys.A.cast<Complex>();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(R);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("freq_response: jw is (numerically) a pole of the system");
    }
    const Eigen::VectorXcd x = lu.solve(sys.B.cast<Complex>());
    return (sys.C.cast<Complex>() * x)(0, 0) + Complex(sys.D, 0.0);
}

/// Discrete frequency response C (z I - A)^-1 B + D at z = exp(jw Ts).
inline Complex freq_response(const DiscreteStateSpace& sys, double omega) {
    const Eigen::Index n = sys.order();
    const Complex z = std::exp(Complex(0.0, omega * sys.Ts));
    if (n == 0) return Complex(sys.D, 0.0);
    Eigen::MatrixXcd R = z * Eigen::MatrixXcd::Identity(n, n) - sys.A.cast<Complex>();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(R);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("freq_response: z is (numerically) a pole of the system");
    }
    const Eigen::VectorXcd x = lu.solve(sys.B.cast<Complex>());
    return (sys.C.cast<Complex>() * x)(0, 0) + Complex(sys.D, 0.0);
}

}  // namespace resetff
