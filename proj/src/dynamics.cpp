#include "rdr/dynamics.hpp"

#include <cmath>
#include <unordered_map>

namespace rdr {

void CollapseSet::add(const Operator& op, double rate) { add(op.sparse(), rate); }

void CollapseSet::add(const SparseMatrix& op, double rate) {
    if (rate < 0) throw HilbertError("CollapseSet: rates must be >= 0");
    if (rate > 0) ops.emplace_back(op, rate);
}

CollapseSet collapse_operators(const SystemParams& params, double bath_occupation) {
    params.check();
    const SpaceLayout& L = params.layout;
    const double gamma_phi = 1.0 / params.t2_echo_q - 0.5 / params.t1_q;
    CollapseSet set;
    const double nth = bath_occupation;
    if (L.dims[1] >= 2) {
        Operator am = embed(annihilation(L.dims[1]), L, 1);
        set.add(am, params.kappa_m * (1.0 + nth));
        if (nth > 0) set.add(am.dagger(), params.kappa_m * nth);
    }
    if (L.dims[2] >= 2) {
        Operator ar = embed(annihilation(L.dims[2]), L, 2);
        set.add(ar, params.kappa_r * (1.0 + nth));
        if (nth > 0) set.add(ar.dagger(), params.kappa_r * nth);
    }
    set.add(embed(pauli(Pauli::Minus), L, 0), 1.0 / params.t1_q);
    set.add(embed(pauli(Pauli::Z), L, 0), gamma_phi / 2.0);
    return set;
}

CollapseSet dressed_collapse_operators(const SystemParams& params, double bath_occupation) {
    params.check();
    const SpaceLayout& L = params.layout;
    const double gamma_phi = 1.0 / params.t2_echo_q - 0.5 / params.t1_q;
    CollapseSet set;
    const double nth = bath_occupation;
    if (L.dims[1] >= 2) {
        Operator am = embed(annihilation(L.dims[1]), L, 1);
        set.add(am, params.kappa_m * (1.0 + nth));
        if (nth > 0) set.add(am.dagger(), params.kappa_m * nth);
    }
    if (L.dims[2] >= 2) {
        Operator ar = embed(annihilation(L.dims[2]), L, 2);
        set.add(ar, params.kappa_r * (1.0 + nth));
        if (nth > 0) set.add(ar.dagger(), params.kappa_r * nth);
    }
    // bare sigma- = (tau_z - tau_+ + tau_-)/2 in the dressed basis; under the
    // strong Rabi drive the cross terms rotate at Omega_R and the secular
    // dissipators split into independent tau channels. sigma_z contributes
    // tau_+/tau_- at gamma_phi/2 each.
    Operator tp = dressed_sigma_plus(L);
    Operator tz = dressed_sigma_z(L);
    const double g1 = 1.0 / params.t1_q;
    set.add(tz, 0.25 * g1);
    set.add(tp, 0.25 * g1 + 0.5 * gamma_phi);
    set.add(tp.dagger(), 0.25 * g1 + 0.5 * gamma_phi);
    return set;
}

std::function<double(double)> ramp_envelope(RampKind kind, double duration) {
    if (duration <= 0) throw HilbertError("ramp_envelope: duration must be > 0");
    if (kind == RampKind::Linear) {
        return [duration](double t) { return std::clamp(t / duration, 0.0, 1.0); };
    }
    return [duration](double t) {
        double x = std::clamp(t / duration, 0.0, 1.0);
        return 0.5 * (1.0 - std::cos(M_PI * x));
    };
}

double PulseSequence::total_duration() const {
    double total = 0.0;
    for (const auto& seg : segments) total += seg.duration;
    return total;
}

double PulseSequence::envelope_at(Channel ch, double t) const {
    double start = 0.0;
    for (const auto& seg : segments) {
        if (t < start + seg.duration || (&seg == &segments.back() && t <= start + seg.duration)) {
            auto it = seg.envelopes.find(ch);
            return it == seg.envelopes.end() ? 0.0 : it->second(t - start);
        }
        start += seg.duration;
    }
    return 0.0;
}

PulseSequence rdr_sequence(double hold_duration, double ramp, RampKind kind) {
    if (hold_duration < 0) throw HilbertError("rdr_sequence: hold duration must be >= 0");
    auto up = ramp_envelope(kind, ramp);
    auto down = [up, ramp](double t) { return up(ramp - t); };
    auto on = [](double) { return 1.0; };

    PulseSequence seq;
    Segment s1{ramp, {{Channel::SidebandM, up}, {Channel::SidebandR, up}}, false, "sidebands-up"};
    Segment s2{ramp,
               {{Channel::SidebandM, on}, {Channel::SidebandR, on}, {Channel::Rabi, up}},
               false,
               "rabi-up"};
    Segment s3{hold_duration,
               {{Channel::SidebandM, on}, {Channel::SidebandR, on}, {Channel::Rabi, on}},
               false,
               "hold"};
    Segment s4{ramp,
               {{Channel::SidebandM, on}, {Channel::SidebandR, on}, {Channel::Rabi, down}},
               false,
               "rabi-down"};
    Segment s5{ramp, {{Channel::SidebandM, down}, {Channel::SidebandR, down}}, true,
               "sidebands-down"};
    seq.segments = {s1, s2, s3, s4, s5};
    if (hold_duration == 0.0) seq.segments.erase(seq.segments.begin() + 2);
    return seq;
}

TimeDependentHamiltonian TimeDependentHamiltonian::constant(const Operator& h) {
    TimeDependentHamiltonian out;
    out.terms.push_back({h.sparse(), nullptr});
    return out;
}

TimeDependentHamiltonian TimeDependentHamiltonian::from_function(
    const SpaceLayout& layout, std::function<Operator(double)> fn) {
    TimeDependentHamiltonian out;
    out.callback = std::move(fn);
    out.callback_layout = layout;
    return out;
}

Matrix TimeDependentHamiltonian::dense_at(double t, int dim) const {
    if (callback) return callback(t).matrix();
    Matrix h = Matrix::Zero(dim, dim);
    for (const auto& term : terms) {
        Complex c = term.coeff ? term.coeff(t) : Complex(1.0);
        h += c * Matrix(term.op);
    }
    return h;
}

ObservableSet ObservableSet::standard_set(const SpaceLayout& layout) {
    ObservableSet set;
    if (layout.num_subsystems() == 3) {
        if (layout.dims[1] >= 2)
            set.linear.emplace_back("nbar_m", embed(number_operator(layout.dims[1]), layout, 1).sparse());
        if (layout.dims[2] >= 2)
            set.linear.emplace_back("nbar_r", embed(number_operator(layout.dims[2]), layout, 2).sparse());
        set.linear.emplace_back("sigma_z", embed(pauli(Pauli::Z), layout, 0).sparse());
        set.linear.emplace_back("sigma_x", embed(pauli(Pauli::X), layout, 0).sparse());
        set.linear.emplace_back("dressed_sigma_z", dressed_sigma_z(layout).sparse());
    }
    return set;
}

namespace {

struct LindbladRHS {
    int dim;
    const TimeDependentHamiltonian* h;
    std::vector<SparseMatrix> jumps;       // sqrt(rate) * L
    std::vector<SparseMatrix> jump_norms;  // 0.5 * rate * L^dag L
    mutable Matrix scratch;

    void operator()(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) const {
        Eigen::Map<const Matrix> rho(y.data(), dim, dim);
        if (dydt.size() != y.size()) dydt.resize(y.size());
        Eigen::Map<Matrix> out(dydt.data(), dim, dim);
        out.setZero();
        const Complex mi(0.0, -1.0);
        if (h->callback) {
            Matrix hm = h->callback(t).matrix();
            out.noalias() += mi * (hm * rho - rho * hm);
        } else {
            for (const auto& term : h->terms) {
                Complex c = term.coeff ? term.coeff(t) : Complex(1.0);
                if (c == Complex(0.0)) continue;
                out.noalias() += (mi * c) * (term.op * rho);
                out.noalias() -= (mi * c) * (rho * term.op);
            }
        }
        for (size_t k = 0; k < jumps.size(); ++k) {
            scratch.noalias() = jumps[k] * rho;
            out.noalias() += scratch * jumps[k].adjoint();
            out.noalias() -= jump_norms[k] * rho;
            out.noalias() -= rho * jump_norms[k];
        }
    }
};

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const TimeDependentHamiltonian& h,
                  const CollapseSet& collapse, const std::vector<double>& times,
                  const EvolveOptions& opts, const ObservableSet* observables) {
    const int dim = rho0.dim();
    LindbladRHS rhs;
    rhs.dim = dim;
    rhs.h = &h;
    rhs.scratch.resize(dim, dim);
    for (const auto& [op, rate] : collapse.ops) {
        SparseMatrix l = std::sqrt(rate) * op;
        rhs.jumps.push_back(l);
        SparseMatrix ldl = (0.5 * (SparseMatrix(l.adjoint()) * l)).pruned();
        rhs.jump_norms.push_back(ldl);
    }

    ObservableSet default_set;
    if (!observables) {
        default_set = ObservableSet::standard_set(rho0.layout());
        observables = &default_set;
    }

    Trajectory traj;
    traj.frame = opts.frame;
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.matrix().data(), dim * dim);

    auto observe = [&](double t, const Eigen::VectorXcd& yv) {
        Eigen::Map<const Matrix> rho(yv.data(), dim, dim);
        traj.times.push_back(t);
        for (const auto& [name, op] : observables->linear) {
            Complex val = (op * rho).eval().trace();
            traj.observables[name].push_back(val.real());
        }
        traj.observables["purity"].push_back((rho * rho).trace().real());
        traj.observables["trace"].push_back(rho.trace().real());
        if (opts.store_states) traj.states.emplace_back(rho0.layout(), Matrix(rho), false);
    };

    AdaptiveRKOptions rk;
    rk.rtol = opts.rtol;
    rk.atol = opts.atol;
    try {
        integrate_adaptive([&rhs](double t, const Eigen::VectorXcd& yv,
                                  Eigen::VectorXcd& d) { rhs(t, yv, d); },
                           y, times, observe, rk);
    } catch (const IntegratorError& e) {
        throw IntegratorError(std::string("stiffness failure in Lindblad evolution: ") +
                              e.what());
    }
    return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const std::function<Operator(double)>& h_fn,
                  const CollapseSet& collapse, const std::vector<double>& times,
                  const EvolveOptions& opts) {
    auto h = TimeDependentHamiltonian::from_function(rho0.layout(), h_fn);
    return evolve(rho0, h, collapse, times, opts, nullptr);
}

// --- SectorReducedLindblad ---------------------------------------------------

SectorReducedLindblad::SectorReducedLindblad(const std::vector<int>& charge,
                                             std::vector<HamiltonianTerm> h_terms,
                                             const CollapseSet& collapse)
    : dim_(static_cast<int>(charge.size())), charge_(charge) {
    pair_index_.assign(static_cast<size_t>(dim_) * dim_, -1);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            if (charge_[i] == charge_[j]) {
                pair_index_[static_cast<size_t>(i) * dim_ + j] =
                    static_cast<int>(pairs_.size());
                pairs_.emplace_back(i, j);
            }

    const int rdim = reduced_dim();
    auto pidx = [&](int i, int j) { return pair_index_[static_cast<size_t>(i) * dim_ + j]; };

    using Triplet = Eigen::Triplet<Complex>;
    std::vector<Triplet> constant;

    // -i (A rho - rho A) for a charge-preserving A, as triplets on the block.
    auto add_commutator = [&](const SparseMatrix& a, std::vector<Triplet>& trips) {
        const Complex mi(0.0, -1.0);
        for (int outer = 0; outer < a.outerSize(); ++outer)
            for (SparseMatrix::InnerIterator it(a, outer); it; ++it) {
                const int i = static_cast<int>(it.row());
                const int k = static_cast<int>(it.col());
                if (charge_[i] != charge_[k])
                    throw HilbertError(
                        "SectorReducedLindblad: Hamiltonian term does not conserve the charge");
                // -i A_ik rho_kj  -> target (i,j), source (k,j)
                for (int j = 0; j < dim_; ++j) {
                    int src = pidx(k, j);
                    if (src < 0) continue;
                    trips.emplace_back(pidx(i, j), src, mi * it.value());
                }
                // +i rho_jk' A_k'i' pattern: handled via the adjoint entry below
                // +i rho_j i A_ik contributes to target (j,k): source (j,i)
                for (int j = 0; j < dim_; ++j) {
                    int src = pidx(j, i);
                    if (src < 0) continue;
                    trips.emplace_back(pidx(j, k), src, -mi * it.value());
                }
            }
    };

    for (auto& term : h_terms) {
        if (term.coeff) {
            std::vector<Triplet> trips;
            add_commutator(term.op, trips);
            SparseMatrix g(rdim, rdim);
            g.setFromTriplets(trips.begin(), trips.end());
            generator_timedep_.emplace_back(term.coeff, std::move(g));
        } else {
            add_commutator(term.op, constant);
        }
    }

    for (const auto& [op, rate] : collapse.ops) {
        SparseMatrix l = std::sqrt(rate) * op;
        l.makeCompressed();
        // uniform charge shift check
        std::optional<int> shift;
        std::vector<std::pair<std::pair<int, int>, Complex>> entries;
        for (int outer = 0; outer < l.outerSize(); ++outer)
            for (SparseMatrix::InnerIterator it(l, outer); it; ++it) {
                int d = charge_[it.row()] - charge_[it.col()];
                if (!shift) shift = d;
                if (*shift != d)
                    throw HilbertError(
                        "SectorReducedLindblad: jump operator has non-uniform charge shift");
                entries.push_back({{static_cast<int>(it.row()), static_cast<int>(it.col())},
                                   it.value()});
            }
        // L rho L^dag : target (i,j) <- source (k,l), weight L_ik conj(L_jl)
        for (const auto& [ik, vik] : entries)
            for (const auto& [jl, vjl] : entries) {
                int src = pidx(ik.second, jl.second);
                int dst = pidx(ik.first, jl.first);
                if (src < 0 || dst < 0) continue;
                constant.emplace_back(dst, src, vik * std::conj(vjl));
            }
        // -1/2 {L^dag L, rho}
        SparseMatrix ldl = (SparseMatrix(l.adjoint()) * l).pruned();
        for (int outer = 0; outer < ldl.outerSize(); ++outer)
            for (SparseMatrix::InnerIterator it(ldl, outer); it; ++it) {
                const int i = static_cast<int>(it.row());
                const int k = static_cast<int>(it.col());
                for (int j = 0; j < dim_; ++j) {
                    int src = pidx(k, j);
                    if (src >= 0) constant.emplace_back(pidx(i, j), src, -0.5 * it.value());
                    src = pidx(j, i);
                    if (src >= 0)
                        constant.emplace_back(pidx(j, k), src, -0.5 * it.value());
                }
            }
    }

    generator_constant_.resize(rdim, rdim);
    generator_constant_.setFromTriplets(constant.begin(), constant.end());
    generator_constant_.makeCompressed();
}

Vector SectorReducedLindblad::project_diagonal(const Eigen::VectorXd& populations) const {
    Vector v = Vector::Zero(static_cast<int>(pairs_.size()));
    for (size_t p = 0; p < pairs_.size(); ++p)
        if (pairs_[p].first == pairs_[p].second && pairs_[p].first < populations.size())
            v(p) = populations(pairs_[p].first);
    return v;
}

Vector SectorReducedLindblad::project(const Matrix& rho) const {
    Vector v(reduced_dim());
    for (size_t p = 0; p < pairs_.size(); ++p) v(p) = rho(pairs_[p].first, pairs_[p].second);
    return v;
}

Matrix SectorReducedLindblad::unproject(const Vector& v, int dim) const {
    Matrix rho = Matrix::Zero(dim, dim);
    for (size_t p = 0; p < pairs_.size(); ++p)
        if (pairs_[p].first < dim && pairs_[p].second < dim)
            rho(pairs_[p].first, pairs_[p].second) = v(p);
    return rho;
}

void SectorReducedLindblad::evolve(Vector& v, const std::vector<double>& times,
                                   const std::function<void(double, const Vector&)>& observe,
                                   const AdaptiveRKOptions& opts) const {
    auto rhs = [this](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dydt) {
        dydt.noalias() = generator_constant_ * y;
        for (const auto& [coeff, g] : generator_timedep_) {
            Complex c = coeff(t);
            if (c != Complex(0.0)) dydt.noalias() += c * (g * y);
        }
    };
    integrate_adaptive(rhs, v, times, observe, opts);
}

Complex SectorReducedLindblad::expectation(const Vector& v, const SparseMatrix& op) const {
    // Tr[O rho] = sum O_ij rho_ji; charge-mixing entries of O hit coherences
    // that vanish identically in this block.
    Complex sum = 0.0;
    for (int outer = 0; outer < op.outerSize(); ++outer)
        for (SparseMatrix::InnerIterator it(op, outer); it; ++it) {
            int idx = pair_index_[static_cast<size_t>(it.col()) * dim_ + it.row()];
            if (idx >= 0) sum += it.value() * v(idx);
        }
    return sum;
}

Eigen::VectorXd SectorReducedLindblad::reduced_diagonal(const Vector& v,
                                                        const std::vector<int>& dims,
                                                        int keep) const {
    int right = 1;
    for (int s = keep + 1; s < static_cast<int>(dims.size()); ++s) right *= dims[s];
    const int dk = dims[keep];
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dk);
    for (int i = 0; i < dim_; ++i) {
        int idx = pair_index_[static_cast<size_t>(i) * dim_ + i];
        if (idx < 0) continue;
        int sub = (i / right) % dk;
        diag(sub) += v(idx).real();
    }
    return diag;
}

double SectorReducedLindblad::trace(const Vector& v) const {
    double tr = 0.0;
    for (int i = 0; i < dim_; ++i) {
        int idx = pair_index_[static_cast<size_t>(i) * dim_ + i];
        if (idx >= 0) tr += v(idx).real();
    }
    return tr;
}

}  // namespace rdr
