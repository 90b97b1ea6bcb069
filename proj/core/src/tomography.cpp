#include "nuosc/tomography.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace nuosc {

namespace {

constexpr double kPi = 3.14159265358979323846;

int pauli_index(char c) {
    switch (c) {
        case 'X': return 1;
        case 'Y': return 2;
        case 'Z': return 3;
        default: throw std::invalid_argument("unknown Pauli letter in setting");
    }
}

Mat2 basis_rotation(char c) {
    switch (c) {
        case 'X': return rot_y(-kPi / 2.0);
        case 'Y': return rot_x(kPi / 2.0);
        case 'Z': return Mat2::Identity();
        default: throw std::invalid_argument("unknown Pauli letter in setting");
    }
}

Mat4 setting_rotation(const std::string& setting) {
    if (setting.size() != 2) throw std::invalid_argument("setting must have two letters");
    Mat4 u;
    const Mat2 a = basis_rotation(setting[0]);
    const Mat2 b = basis_rotation(setting[1]);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) u.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return u;
}

double outcome_sign(int outcome, int qubit) {
    // qubit 0 is the high bit of the two-bit outcome.
    const int bit = (outcome >> (1 - qubit)) & 1;
    return bit == 0 ? 1.0 : -1.0;
}

}  // namespace

std::array<std::string, 9> measurement_settings() {
    return {"XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ"};
}

PauliMatrixEstimate estimate_pauli_matrix(const SettingCounts& counts_by_setting) {
    PauliMatrixEstimate est;
    est.M(0, 0) = 1.0;
    Eigen::Matrix4d accum = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d hits = Eigen::Matrix4d::Zero();
    for (const auto& [setting, data] : counts_by_setting) {
        const int a = pauli_index(setting.at(0));
        const int b = pauli_index(setting.at(1));
        if (data.total <= 0.0) throw std::invalid_argument("setting has no shots");
        double full = 0.0, left = 0.0, right = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double w = data.weights[k] / data.total;
            full += w * outcome_sign(k, 0) * outcome_sign(k, 1);
            left += w * outcome_sign(k, 0);
            right += w * outcome_sign(k, 1);
        }
        accum(a, b) += full;
        hits(a, b) += 1.0;
        accum(a, 0) += left;
        hits(a, 0) += 1.0;
        accum(0, b) += right;
        hits(0, b) += 1.0;
    }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            if (hits(a, b) > 0.0) est.M(a, b) = accum(a, b) / hits(a, b);
        }
    return est;
}

Mat4 linear_inversion_dm(const PauliMatrixEstimate& m) {
    Mat4 rho = Mat4::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Mat4 pp;
            const char labels[4] = {'I', 'X', 'Y', 'Z'};
            const Mat2 pa = pauli_1q(labels[a]);
            const Mat2 pb = pauli_1q(labels[b]);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) pp.block<2, 2>(2 * i, 2 * j) = pa(i, j) * pb;
            rho += 0.25 * m.M(a, b) * pp;
        }
    return rho;
}

PauliMatrixEstimate pauli_matrix_of_dm(const Mat4& rho) {
    PauliMatrixEstimate est;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Mat4 pp;
            const char labels[4] = {'I', 'X', 'Y', 'Z'};
            const Mat2 pa = pauli_1q(labels[a]);
            const Mat2 pb = pauli_1q(labels[b]);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) pp.block<2, 2>(2 * i, 2 * j) = pa(i, j) * pb;
            est.M(a, b) = (rho * pp).trace().real();
        }
    return est;
}

Eigen::Vector4d setting_probabilities(const Mat4& rho, const std::string& setting) {
    const Mat4 u = setting_rotation(setting);
    const Mat4 rotated = u * rho * u.adjoint();
    Eigen::Vector4d p;
    for (int k = 0; k < 4; ++k) p(k) = rotated(k, k).real();
    return p;
}

double tomography_log_likelihood(const Mat4& rho, const SettingCounts& counts_by_setting) {
    double ll = 0.0;
    for (const auto& [setting, data] : counts_by_setting) {
        const Eigen::Vector4d p = setting_probabilities(rho, setting);
        for (int k = 0; k < 4; ++k) {
            if (data.weights[k] == 0.0) continue;
            ll += data.weights[k] * std::log(std::max(p(k), 1e-12));
        }
    }
    return ll;
}

Mat4 project_to_physical(const Mat4& hermitian) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (hermitian + hermitian.adjoint()));
    Eigen::Vector4d vals = es.eigenvalues().cwiseMax(0.0);
    const double tr = vals.sum();
    if (tr <= 0.0) return Mat4::Identity() / 4.0;
    vals /= tr;
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// rho = T^H T / tr(T^H T) with lower-triangular T: 4 real diagonal entries
// followed by the 6 strictly-lower entries as (re, im) pairs.
Mat4 params_to_t(const Eigen::Matrix<double, 16, 1>& p) {
    Mat4 t = Mat4::Zero();
    for (int i = 0; i < 4; ++i) t(i, i) = p(i);
    int idx = 4;
    for (int j = 1; j < 4; ++j)
        for (int i = 0; i < j; ++i) {
            t(j, i) = std::complex<double>(p(idx), p(idx + 1));
            idx += 2;
        }
    return t;
}

Eigen::Matrix<double, 16, 1> t_to_params(const Mat4& t) {
    Eigen::Matrix<double, 16, 1> p;
    for (int i = 0; i < 4; ++i) p(i) = t(i, i).real();
    int idx = 4;
    for (int j = 1; j < 4; ++j)
        for (int i = 0; i < j; ++i) {
            p(idx) = t(j, i).real();
            p(idx + 1) = t(j, i).imag();
            idx += 2;
        }
    return p;
}

struct Objective {
    // Cached per-setting rotations and weights. The objective is the mean
    // negative log-likelihood (per unit of total weight) so the gradient
    // tolerance is independent of the shot count.
    std::vector<Mat4> rotations;
    std::vector<std::array<double, 4>> weights;
    double total_weight = 0.0;

    explicit Objective(const SettingCounts& counts) {
        for (const auto& [setting, data] : counts) {
            rotations.push_back(setting_rotation(setting));
            weights.push_back(data.weights);
            for (const double w : data.weights) total_weight += w;
        }
        if (!(total_weight > 0.0)) total_weight = 1.0;
    }

    // Mean negative log-likelihood and its gradient in the 16 parameters.
    double eval(const Eigen::Matrix<double, 16, 1>& p,
                Eigen::Matrix<double, 16, 1>* grad) const {
        const Mat4 t = params_to_t(p);
        const Mat4 s = t.adjoint() * t;
        const double tr_s = s.trace().real();
        if (!(tr_s > 1e-300)) return 1e300;
        double ll = 0.0;
        Mat4 b = Mat4::Zero();
        double weight_sum = 0.0;
        for (size_t m = 0; m < rotations.size(); ++m) {
            const Mat4& u = rotations[m];
            const Mat4 rotated = u * s * u.adjoint();
            Eigen::Vector4d ratio;
            for (int k = 0; k < 4; ++k) {
                const double pk = std::max(rotated(k, k).real() / tr_s, 1e-12);
                ll += weights[m][k] * std::log(pk);
                ratio(k) = weights[m][k] / pk;
                weight_sum += weights[m][k];
            }
            if (grad) b += u.adjoint() * ratio.asDiagonal() * u;
        }
        if (grad) {
            b = (b - weight_sum * Mat4::Identity()) / tr_s;
            const Mat4 g = 2.0 * (t * b);  // from dL = 2 Re tr(B T^H dT)
            Eigen::Matrix<double, 16, 1> gl;
            for (int i = 0; i < 4; ++i) gl(i) = g(i, i).real();
            int idx = 4;
            for (int j = 1; j < 4; ++j)
                for (int i = 0; i < j; ++i) {
                    gl(idx) = g(j, i).real();
                    gl(idx + 1) = g(j, i).imag();
                    idx += 2;
                }
            *grad = -gl / total_weight;
        }
        return -ll / total_weight;
    }
};

}  // namespace

MlResult ml_reconstruct(const SettingCounts& counts_by_setting, const MlOptions& opts,
                        bool allow_nonconverged) {
    if (counts_by_setting.empty()) throw std::invalid_argument("no tomography data");
    const Objective obj(counts_by_setting);

    // Warm start from the physical projection of the linear-inversion state
    // (or a caller-supplied guess), slightly mixed with the maximally mixed
    // state so the factorization below is well posed.
    const Mat4 rho0 =
        opts.has_warm_start
            ? opts.warm_start
            : project_to_physical(linear_inversion_dm(estimate_pauli_matrix(counts_by_setting)));
    const Mat4 regularized = 0.999 * rho0 + 0.001 * Mat4::Identity() / 4.0;
    // Lower-triangular T with T^H T = rho, from the Cholesky factor of the
    // index-reversed matrix: if J rho J = L L^H then T = J L^H J.
    Mat4 reversal = Mat4::Zero();
    for (int i = 0; i < 4; ++i) reversal(i, 3 - i) = 1.0;
    Eigen::LLT<Mat4> llt(Mat4(reversal * regularized * reversal));
    Eigen::Matrix<double, 16, 1> x =
        llt.info() == Eigen::Success
            ? t_to_params(Mat4(reversal * Mat4(llt.matrixL()).adjoint() * reversal))
            : t_to_params(Mat4(Mat4::Identity() * 0.5));

    Eigen::Matrix<double, 16, 16> h = Eigen::Matrix<double, 16, 16>::Identity();
    Eigen::Matrix<double, 16, 1> grad;
    double f = obj.eval(x, &grad);

    MlResult result;
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        if (grad.lpNorm<Eigen::Infinity>() < opts.gradient_tol) {
            result.converged = true;
            break;
        }
        Eigen::Matrix<double, 16, 1> dir = -(h * grad);
        double slope = grad.dot(dir);
        bool steepest = false;
        if (slope >= 0.0) {  // lost curvature information; restart steepest descent
            h.setIdentity();
            dir = -grad;
            slope = grad.dot(dir);
            steepest = true;
        }
        double step = 1.0;
        double f_new = f;
        Eigen::Matrix<double, 16, 1> x_new = x;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            x_new = x + step * dir;
            f_new = obj.eval(x_new, nullptr);
            if (f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (steepest) {
                // No descent direction reduces f in double precision; the
                // iterate is stationary to machine accuracy.
                result.converged = grad.lpNorm<Eigen::Infinity>() < opts.stall_tol;
                break;
            }
            h.setIdentity();
            continue;
        }
        Eigen::Matrix<double, 16, 1> grad_new;
        obj.eval(x_new, &grad_new);
        const Eigen::Matrix<double, 16, 1> s = x_new - x;
        const Eigen::Matrix<double, 16, 1> y = grad_new - grad;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const Eigen::Matrix<double, 16, 1> hy = h * y;
            const double yhy = y.dot(hy);
            h += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
                 (hy * s.transpose() + s * hy.transpose()) / sy;
        } else {
            h.setIdentity();
        }
        x = x_new;
        f = f_new;
        grad = grad_new;
    }
    if (iter == opts.max_iterations &&
        grad.lpNorm<Eigen::Infinity>() < opts.stall_tol)
        result.converged = true;

    const Mat4 t = params_to_t(x);
    const Mat4 s = t.adjoint() * t;
    result.rho = s / s.trace().real();
    result.log_likelihood = -f * obj.total_weight;
    result.gradient_norm = grad.lpNorm<Eigen::Infinity>();
    result.iterations = iter;
    if (!result.converged && !allow_nonconverged)
        throw std::runtime_error("ml_reconstruct failed to converge (gradient inf-norm " +
                                 std::to_string(result.gradient_norm) + ")");
    return result;
}

}  // namespace nuosc
