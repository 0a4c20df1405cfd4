#include "rdr/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdr {

namespace {

/// <n|D(alpha)|n> = e^{-|a|^2/2} L_n(|a|^2)
double laguerre(int n, double x) {
    if (n == 0) return 1.0;
    double lkm1 = 1.0, lk = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        double lkp1 = ((2.0 * k + 1.0 - x) * lk - k * lkm1) / (k + 1.0);
        lkm1 = lk;
        lk = lkp1;
    }
    return lk;
}

/// Top-left dim x dim block of D(alpha), evaluated in a padded space so the
/// retained elements match their untruncated values. A bare dim-sized
/// truncation is blind to combinations living at the truncation edge, which
/// ruins least-squares reconstruction.
Matrix displacement_block(Complex alpha, int dim) {
    const int wdim = dim + 16 + static_cast<int>(std::ceil(2.0 * std::norm(alpha)));
    return displacement(alpha, wdim).topLeftCorner(dim, dim);
}

std::vector<double> symmetric_grid(double max_alpha, int n_points) {
    // symmetric and includes 0
    if (n_points % 2 == 0) ++n_points;
    std::vector<double> g(n_points);
    int half = n_points / 2;
    for (int i = 0; i < n_points; ++i) g[i] = max_alpha * (i - half) / half;
    return g;
}

}  // namespace

Complex characteristic_function(const DensityMatrix& rho_mode, Complex alpha) {
    if (rho_mode.layout().num_subsystems() != 1)
        throw TomographyError("characteristic_function: expected a single-mode reduced state");
    Matrix d = displacement_block(alpha, rho_mode.dim());
    return (rho_mode.matrix() * d).trace();
}

Complex thermal_characteristic(double nbar, Complex alpha) {
    return std::exp(-(nbar + 0.5) * std::norm(alpha));
}

CharSamples sample_axes(const DensityMatrix& rho_mode, double max_alpha, int n_points) {
    if (n_points < 5) throw TomographyError("sample_axes: need at least 5 points per axis");
    CharSamples out;
    auto grid = symmetric_grid(max_alpha, n_points);
    std::vector<Complex> real_axis, imag_axis;
    for (double x : grid) {
        Complex cr = characteristic_function(rho_mode, Complex(x, 0.0));
        Complex ci = characteristic_function(rho_mode, Complex(0.0, x));
        out.points.push_back({Complex(x, 0.0), cr});
        out.points.push_back({Complex(0.0, x), ci});
        out.axis_average.emplace_back(x, 0.5 * (cr.real() + ci.real()));
    }
    return out;
}

CharSamples sample_axes_diagonal(const Eigen::VectorXd& populations, double max_alpha,
                                 int n_points) {
    if (n_points < 5) throw TomographyError("sample_axes: need at least 5 points per axis");
    CharSamples out;
    auto grid = symmetric_grid(max_alpha, n_points);
    const int dim = static_cast<int>(populations.size());
    for (double x : grid) {
        const double a2 = x * x;
        double c = 0.0;
        const double gauss = std::exp(-0.5 * a2);
        for (int n = 0; n < dim; ++n) {
            if (populations(n) == 0.0) continue;
            c += populations(n) * gauss * laguerre(n, a2);
        }
        // diagonal states are phase symmetric: both axes carry the same value
        out.points.push_back({Complex(x, 0.0), Complex(c, 0.0)});
        out.points.push_back({Complex(0.0, x), Complex(c, 0.0)});
        out.axis_average.emplace_back(x, c);
    }
    return out;
}

namespace {

struct QuadraticFit {
    double c0, c2, c4;
    double residual;
    int kept;
};

/// LS fit Re C = c0 + c2 u + c4 u^2 with u = |alpha|^2 on points above thresh.
std::optional<QuadraticFit> fit_curvature(const CharSamples& samples, double threshold) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    int kept = 0;
    for (const auto& pt : samples.points) {
        if (std::abs(pt.value) < threshold) continue;
        const double u = std::norm(pt.alpha);
        Eigen::Vector3d row(1.0, u, u * u);
        m += row * row.transpose();
        b += row * pt.value.real();
        ++kept;
    }
    if (kept < 5) return std::nullopt;
    Eigen::Vector3d c = m.ldlt().solve(b);
    double rss = 0.0;
    for (const auto& pt : samples.points) {
        if (std::abs(pt.value) < threshold) continue;
        const double u = std::norm(pt.alpha);
        rss += std::pow(c(0) + c(1) * u + c(2) * u * u - pt.value.real(), 2);
    }
    return QuadraticFit{c(0), c(1), c(2), std::sqrt(rss / kept), kept};
}

}  // namespace

NbarEstimate extract_nbar(const CharSamples& samples, double threshold) {
    auto main_fit = fit_curvature(samples, threshold);
    if (!main_fit) {
        // name the smallest grid that could work: need >= 5 points with
        // |C| >= threshold, i.e. |alpha| below where C crosses the threshold
        double best = 0.0;
        for (const auto& pt : samples.points)
            if (std::abs(pt.value) >= threshold) best = std::max(best, std::abs(pt.alpha));
        std::ostringstream msg;
        msg << "extract_nbar: fewer than 5 samples above threshold " << threshold
            << "; use a grid with max_alpha <= " << (best > 0 ? best : 0.5)
            << " and at least 5 points inside it";
        throw TomographyError(msg.str());
    }

    NbarEstimate est;
    est.threshold_used = threshold;
    est.points_kept = main_fit->kept;
    est.residual = main_fit->residual;
    est.nbar = -(main_fit->c2 + 0.5);

    // uncertainty from the threshold band of the fitting procedure
    double lo = est.nbar, hi = est.nbar;
    for (double th : {0.7, 0.75, 0.8, 0.85}) {
        auto f = fit_curvature(samples, th);
        if (!f) continue;
        double nb = -(f->c2 + 0.5);
        lo = std::min(lo, nb);
        hi = std::max(hi, nb);
    }
    est.uncertainty = 0.5 * (hi - lo);
    return est;
}

ReconstructionResult reconstruct_state(const CharSamples& samples, int dim) {
    const int n_params = dim * dim;  // Hermitian parametrization
    const int n_samples = static_cast<int>(samples.points.size());
    ReconstructionResult out{DensityMatrix(), 0.0, false};
    if (2 * n_samples < n_params) out.under_determined = true;

    // parameter layout: [diag (dim) | re upper (i<j) | im upper (i<j)]
    const int n_off = dim * (dim - 1) / 2;
    auto off_index = [dim](int i, int j) {  // i < j
        return i * dim - i * (i + 1) / 2 + (j - i - 1);
    };

    Eigen::MatrixXd A(2 * n_samples, n_params);
    Eigen::VectorXd b(2 * n_samples);
    A.setZero();
    for (int s = 0; s < n_samples; ++s) {
        const auto& pt = samples.points[s];
        Matrix d = displacement_block(pt.alpha, dim);
        // C = Tr[rho D] = sum_ij rho_ij D_ji
        for (int i = 0; i < dim; ++i) {
            A(2 * s, i) += d(i, i).real();
            A(2 * s + 1, i) += d(i, i).imag();
            for (int j = i + 1; j < dim; ++j) {
                Complex sum_re = d(j, i) + d(i, j);        // rho_ij = rho_ji* = x+iy
                Complex sum_im = Complex(0, 1) * (d(j, i) - d(i, j));
                A(2 * s, dim + off_index(i, j)) += sum_re.real();
                A(2 * s + 1, dim + off_index(i, j)) += sum_re.imag();
                A(2 * s, dim + n_off + off_index(i, j)) += sum_im.real();
                A(2 * s + 1, dim + n_off + off_index(i, j)) += sum_im.imag();
            }
        }
        b(2 * s) = pt.value.real();
        b(2 * s + 1) = pt.value.imag();
    }

    const double ridge = 1e-6;
    Eigen::MatrixXd normal = A.transpose() * A;
    normal.diagonal().array() += ridge;
    Eigen::VectorXd x = normal.ldlt().solve(A.transpose() * b);
    out.residual = (A * x - b).norm() / std::sqrt(static_cast<double>(2 * n_samples));

    Matrix rho = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) rho(i, i) = x(i);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            Complex v(x(dim + off_index(i, j)), x(dim + n_off + off_index(i, j)));
            rho(i, j) = v;
            rho(j, i) = std::conj(v);
        }

    // project to the PSD unit-trace cone: clip eigenvalues, renormalize
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    double tr = ev.sum();
    if (tr <= 0) throw TomographyError("reconstruct_state: projection yielded a null state");
    ev /= tr;
    rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    out.rho = DensityMatrix(SpaceLayout({dim}, {"mode"}), std::move(rho), false);
    return out;
}

double vacuum_probability(const DensityMatrix& rho_mode) {
    return rho_mode.matrix()(0, 0).real();
}

std::string char_samples_to_csv(const CharSamples& samples) {
    std::ostringstream os;
    os.precision(17);
    os << "re_alpha,im_alpha,re_C,im_C\n";
    for (const auto& pt : samples.points)
        os << pt.alpha.real() << "," << pt.alpha.imag() << "," << pt.value.real() << ","
           << pt.value.imag() << "\n";
    return os.str();
}

CharSamples char_samples_from_csv(const std::string& text) {
    CharSamples out;
    std::istringstream is(text);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.find("re_alpha") != std::string::npos) continue;
        }
        std::istringstream ls(line);
        double ra, ia, rc, ic;
        char comma;
        if (ls >> ra >> comma >> ia >> comma >> rc >> comma >> ic)
            out.points.push_back({Complex(ra, ia), Complex(rc, ic)});
    }
    if (out.points.empty()) throw TomographyError("char_samples_from_csv: no parsable rows");
    return out;
}

}  // namespace rdr
