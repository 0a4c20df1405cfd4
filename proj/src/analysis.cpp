#include "rdr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rdr {

LMResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
    Eigen::VectorXd initial, const std::function<void(Eigen::VectorXd&)>& project,
    const LMOptions& opts) {
    LMResult out;
    Eigen::VectorXd p = std::move(initial);
    if (project) project(p);
    Eigen::VectorXd r = residual(p);
    double cost = r.squaredNorm();
    double lambda = opts.initial_lambda;
    const int np = static_cast<int>(p.size());

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        out.iterations = iter + 1;
        Eigen::MatrixXd J = jacobian(p);
        Eigen::VectorXd g = J.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < opts.gradient_tol) {
            out.converged = true;
            break;
        }
        Eigen::MatrixXd JtJ = J.transpose() * J;
        bool stepped = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd M = JtJ;
            M.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
            Eigen::VectorXd step = M.ldlt().solve(-g);
            Eigen::VectorXd p_new = p + step;
            if (project) project(p_new);
            Eigen::VectorXd r_new = residual(p_new);
            double cost_new = r_new.squaredNorm();
            if (cost_new < cost) {
                if ((p_new - p).norm() < opts.step_tol * (1.0 + p.norm())) {
                    p = p_new;
                    r = r_new;
                    cost = cost_new;
                    out.converged = true;
                    stepped = true;
                    break;
                }
                p = p_new;
                r = r_new;
                cost = cost_new;
                lambda = std::max(lambda * 0.3, 1e-14);
                stepped = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (!stepped || out.converged) {
            if (!stepped) out.converged = true;  // no descent direction improves: at a minimum
            break;
        }
    }

    out.params = p;
    out.residual_norm = std::sqrt(cost);
    Eigen::MatrixXd J = jacobian(p);
    Eigen::MatrixXd JtJ = J.transpose() * J;
    const int ndof = std::max<int>(1, static_cast<int>(residual(p).size()) - np);
    double sigma2 = cost / ndof;
    out.covariance = sigma2 * JtJ.completeOrthogonalDecomposition().pseudoInverse();
    return out;
}

double PiecewiseFit::eval(double t) const {
    if (form == PiecewiseForm::Corrected) {
        return t < t0 ? A + B + B * gamma * (t0 - t) : A + B * std::exp(-gamma * (t - t0));
    }
    return t < t0 ? A + B + B * gamma * (t - t0) : A + B * std::exp(-gamma * (t - t0));
}

PiecewiseFit fit_piecewise_decay(const std::vector<double>& times,
                                 const std::vector<double>& nbars,
                                 const std::vector<double>& weights, PiecewiseForm form) {
    const int n = static_cast<int>(times.size());
    if (n < 8 || nbars.size() != times.size())
        throw AnalysisError("fit_piecewise_decay: need at least 8 (time, nbar) points");
    std::vector<double> w(n, 1.0);
    if (!weights.empty()) {
        if (weights.size() != times.size())
            throw AnalysisError("fit_piecewise_decay: weights length mismatch");
        w = weights;
    }

    // initial guesses: A = min, B = span, gamma from the tail log-slope, t0
    // from the point of maximum curvature of the (smoothed) data
    const double vmin = *std::min_element(nbars.begin(), nbars.end());
    const double vmax = *std::max_element(nbars.begin(), nbars.end());
    double A0 = vmin;
    double B0 = std::max(vmax - vmin, 1e-12);
    int tail_lo = n / 2;
    double gamma0 = 0.1;
    {
        double num = 0.0, den = 0.0, tbar = 0.0, ybar = 0.0;
        int count = 0;
        for (int i = tail_lo; i < n; ++i) {
            double y = nbars[i] - A0 + 1e-12 * B0;
            if (y <= 0) continue;
            tbar += times[i];
            ybar += std::log(y);
            ++count;
        }
        if (count >= 2) {
            tbar /= count;
            ybar /= count;
            for (int i = tail_lo; i < n; ++i) {
                double y = nbars[i] - A0 + 1e-12 * B0;
                if (y <= 0) continue;
                num += (times[i] - tbar) * (std::log(y) - ybar);
                den += (times[i] - tbar) * (times[i] - tbar);
            }
            if (den > 0 && num < 0) gamma0 = -num / den;
        }
    }
    double t0_guess = times[n / 3];
    {
        double best = -1.0;
        for (int i = 1; i + 1 < n; ++i) {
            double h1 = times[i] - times[i - 1], h2 = times[i + 1] - times[i];
            double curv = std::abs((nbars[i + 1] - nbars[i]) / h2 - (nbars[i] - nbars[i - 1]) / h1);
            if (curv > best) {
                best = curv;
                t0_guess = times[i];
            }
        }
    }

    const double t_lo = times.front(), t_hi = times.back();
    auto model = [form](const Eigen::VectorXd& p, double t) {
        PiecewiseFit f;
        f.A = p(0);
        f.B = p(1);
        f.gamma = p(2);
        f.t0 = p(3);
        f.form = form;
        return f.eval(t);
    };
    auto residual = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) r(i) = std::sqrt(w[i]) * (model(p, times[i]) - nbars[i]);
        return r;
    };
    auto jacobian = [&](const Eigen::VectorXd& p) {
        Eigen::MatrixXd J(n, 4);
        const double A = p(0), B = p(1), g = p(2), t0 = p(3);
        const double lin_sign = form == PiecewiseForm::Corrected ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
            const double t = times[i];
            const double sw = std::sqrt(w[i]);
            if (t < t0) {
                const double dt = lin_sign * (t0 - t);
                J(i, 0) = sw;
                J(i, 1) = sw * (1.0 + g * dt);
                J(i, 2) = sw * B * dt;
                J(i, 3) = sw * lin_sign * B * g;
            } else {
                const double e = std::exp(-g * (t - t0));
                J(i, 0) = sw;
                J(i, 1) = sw * e;
                J(i, 2) = sw * B * (t0 - t) * e;
                J(i, 3) = sw * B * g * e;
            }
        }
        return J;
    };
    auto project = [&](Eigen::VectorXd& p) {
        p(1) = std::max(p(1), 1e-12);
        p(2) = std::max(p(2), 1e-9);
        p(3) = std::clamp(p(3), t_lo, t_hi);
    };

    Eigen::VectorXd p0(4);
    p0 << A0, B0, gamma0, t0_guess;
    LMResult lm = levenberg_marquardt(residual, jacobian, p0, project);

    PiecewiseFit fit;
    fit.A = lm.params(0);
    fit.B = lm.params(1);
    fit.gamma = lm.params(2);
    fit.t0 = lm.params(3);
    fit.covariance = lm.covariance;
    fit.residual_norm = lm.residual_norm;
    fit.form = form;

    // degenerate when the crossover pins to the data boundary: the data is
    // effectively single-branch
    const double span = t_hi - t_lo;
    if (fit.t0 <= t_lo + 1e-3 * span || fit.t0 >= t_hi - 1e-3 * span)
        throw AnalysisError(
            "fit_piecewise_decay: no crossover detectable inside the data span; "
            "use a single-branch (linear or exponential) fit instead");
    return fit;
}

ExponentialFit fit_exponential(const std::vector<double>& times,
                               const std::vector<double>& values) {
    const int n = static_cast<int>(times.size());
    if (n < 4 || values.size() != times.size())
        throw AnalysisError("fit_exponential: need at least 4 points");

    const double vmin = *std::min_element(values.begin(), values.end());
    const double vmax = *std::max_element(values.begin(), values.end());
    ExponentialFit out;
    if (vmax - vmin < 1e-14 * std::max(1.0, std::abs(vmax))) {
        // constant data: amplitude-zero branch
        out.amplitude = 0.0;
        out.rate = 0.0;
        out.offset = std::accumulate(values.begin(), values.end(), 0.0) / n;
        out.covariance = Eigen::MatrixXd::Zero(3, 3);
        out.non_decaying = true;
        return out;
    }

    const bool decaying = values.front() >= values.back();
    double C0 = decaying ? vmin : vmax;
    double A0 = values.front() - C0;
    if (std::abs(A0) < 1e-12) A0 = decaying ? (vmax - vmin) : -(vmax - vmin);
    double g0 = 1.0 / std::max(times.back() - times.front(), 1e-12);
    {  // refine from log-slope of |v - C0|
        double num = 0, den = 0, tbar = 0, ybar = 0;
        int count = 0;
        for (int i = 0; i < n; ++i) {
            double y = std::abs(values[i] - C0);
            if (y < 1e-12 * std::abs(A0)) continue;
            tbar += times[i];
            ybar += std::log(y);
            ++count;
        }
        if (count >= 2) {
            tbar /= count;
            ybar /= count;
            for (int i = 0; i < n; ++i) {
                double y = std::abs(values[i] - C0);
                if (y < 1e-12 * std::abs(A0)) continue;
                num += (times[i] - tbar) * (std::log(y) - ybar);
                den += (times[i] - tbar) * (times[i] - tbar);
            }
            if (den > 0) g0 = std::max(-num / den, 1e-6 / (times.back() - times.front() + 1e-12));
        }
    }

    auto residual = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i)
            r(i) = p(0) * std::exp(-p(1) * times[i]) + p(2) - values[i];
        return r;
    };
    auto jacobian = [&](const Eigen::VectorXd& p) {
        Eigen::MatrixXd J(n, 3);
        for (int i = 0; i < n; ++i) {
            double e = std::exp(-p(1) * times[i]);
            J(i, 0) = e;
            J(i, 1) = -p(0) * times[i] * e;
            J(i, 2) = 1.0;
        }
        return J;
    };

    Eigen::VectorXd p0(3);
    p0 << A0, g0, C0;
    LMResult lm = levenberg_marquardt(residual, jacobian, p0);
    out.amplitude = lm.params(0);
    out.rate = lm.params(1);
    out.offset = lm.params(2);
    out.covariance = lm.covariance;
    out.residual_norm = lm.residual_norm;
    out.non_decaying = lm.params(1) < 0.0;
    return out;
}

StarkShiftValue stark_shift(double chi, double eps, double omega_rabi, double kappa) {
    if (omega_rabi <= 0) throw AnalysisError("stark_shift: omega_rabi must be > 0");
    StarkShiftValue v;
    const Complex i(0.0, 1.0);
    Complex denom = 4.0 * omega_rabi * omega_rabi + std::pow(kappa - 2.0 * i * chi, 2);
    v.exact = (8.0 * chi * eps * eps / denom).real();
    v.approximate = 2.0 * chi * (eps / omega_rabi) * (eps / omega_rabi);
    v.relative_gap = std::abs(v.exact) > 0 ? std::abs(v.exact - v.approximate) / std::abs(v.exact)
                                           : 0.0;
    return v;
}

StarkCalibration calibrate_sideband(
    const std::vector<std::pair<double, double>>& shift_samples, double chi, double omega_rabi,
    double kappa) {
    if (shift_samples.size() < 3)
        throw AnalysisError("calibrate_sideband: need at least 3 amplitude settings");
    auto sorted = shift_samples;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 1; i < sorted.size(); ++i) {
        if (std::abs(sorted[i].second) + 1e-12 < std::abs(sorted[i - 1].second))
            throw AnalysisError("calibrate_sideband: shift data non-monotone in amplitude");
    }

    // delta_omega = factor * eps^2 for real eps
    const Complex i(0.0, 1.0);
    Complex denom = 4.0 * omega_rabi * omega_rabi + std::pow(kappa - 2.0 * i * chi, 2);
    const double factor = (8.0 * chi / denom).real();

    StarkCalibration cal;
    double sxx = 0.0, sxy = 0.0, ssq = 0.0;
    int used = 0;
    for (const auto& [setting, shift] : sorted) {
        StarkCalibration::Sample s;
        s.setting = setting;
        s.shift = shift;
        double ratio = shift / factor;
        if (ratio < 0) {
            s.excluded = true;
            s.eps = 0.0;
        } else {
            s.eps = std::sqrt(ratio);
            sxx += setting * setting;
            sxy += setting * s.eps;
            ++used;
        }
        cal.samples.push_back(s);
    }
    if (sxx <= 0) throw AnalysisError("calibrate_sideband: no usable amplitude settings");
    cal.scale = sxy / sxx;
    double rss = 0.0;
    for (const auto& s : cal.samples)
        if (!s.excluded) rss += std::pow(s.eps - cal.scale * s.setting, 2);
    cal.scale_variance = used > 1 ? rss / (used - 1) / sxx : 0.0;
    return cal;
}

ShiftedRabi shifted_rabi_frequency(double omega_rabi, double delta) {
    ShiftedRabi out;
    out.omega = std::sqrt(omega_rabi * omega_rabi + delta * delta);
    out.noisy_regime = std::abs(delta) > omega_rabi / 2.0;
    return out;
}

double estimate_oscillation_frequency(const std::vector<double>& times,
                                      const std::vector<double>& values) {
    const int n = static_cast<int>(times.size());
    if (n < 8 || values.size() != times.size())
        throw AnalysisError("estimate_oscillation_frequency: need at least 8 samples");

    // remove a linear trend so slow drifts do not swallow the crossings
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (int i = 0; i < n; ++i) {
        st += times[i];
        sy += values[i];
        stt += times[i] * times[i];
        sty += times[i] * values[i];
    }
    double den = n * stt - st * st;
    double slope = den > 0 ? (n * sty - st * sy) / den : 0.0;
    double inter = (sy - slope * st) / n;

    std::vector<double> crossings;
    double prev = values[0] - (inter + slope * times[0]);
    for (int i = 1; i < n; ++i) {
        double cur = values[i] - (inter + slope * times[i]);
        if ((prev < 0 && cur >= 0) || (prev > 0 && cur <= 0)) {
            double frac = prev / (prev - cur);
            crossings.push_back(times[i - 1] + frac * (times[i] - times[i - 1]));
        }
        prev = cur;
    }
    if (crossings.size() < 3)
        throw AnalysisError(
            "estimate_oscillation_frequency: fewer than 3 zero crossings; extend the record "
            "or increase the sampling density");
    // consecutive crossings are half periods
    double mean_half = (crossings.back() - crossings.front()) / (crossings.size() - 1);
    return M_PI / mean_half;
}

}  // namespace rdr
