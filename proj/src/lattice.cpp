#include "xxchain/lattice.hpp"

#include <cmath>

namespace xxchain {

namespace {
const cplx kI(0.0, 1.0);
}

Eigen::MatrixXd build_hamiltonian(const ChainSpec& spec, const DefectConfig& defects) {
    spec.validate();
    defects.validate();
    if (!spec.contains(defects.l1) || !spec.contains(defects.l2))
        throw std::invalid_argument("build_hamiltonian: defect site outside the chain");

    const int n = spec.n_sites;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = spec.omega0;
        if (i + 1 < n) {
            h(i, i + 1) = -0.5;
            h(i + 1, i) = -0.5;
        }
    }
    if (spec.boundary == Boundary::ring) {
        h(0, n - 1) += -0.5;
        h(n - 1, 0) += -0.5;
    }
    h(spec.index(defects.l1), spec.index(defects.l1)) -= defects.alpha1 / 2.0;
    h(spec.index(defects.l2), spec.index(defects.l2)) -= defects.alpha2 / 2.0;
    return h;
}

Spectrum diagonalize(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("diagonalize: matrix must be square");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("diagonalize: matrix must be symmetric");

    const int n = static_cast<int>(h.rows());
    bool tridiagonal = true;
    for (int j = 0; j < n && tridiagonal; ++j)
        for (int i = j + 2; i < n; ++i)
            if (h(i, j) != 0.0) {
                tridiagonal = false;
                break;
            }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    if (tridiagonal && n > 2) {
        Eigen::VectorXd diag = h.diagonal();
        Eigen::VectorXd sub(n - 1);
        for (int i = 0; i + 1 < n; ++i) sub[i] = h(i + 1, i);
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    } else {
        solver.compute(h);
    }
    if (solver.info() != Eigen::Success)
        throw numerical_error("diagonalize: eigensolver failed to converge");
    return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXcd propagate(const Spectrum& spectrum, const State& initial,
                           const Eigen::VectorXd& times) {
    const double nrm = initial.norm();
    if (std::abs(nrm - 1.0) > 1e-10)
        throw std::invalid_argument("propagate: initial state must be normalized");
    const Eigen::VectorXcd coeff = spectrum.states.transpose() * initial;
    Eigen::MatrixXcd out(initial.size(), times.size());
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const Eigen::ArrayXcd phase = (-kI * times[k] * spectrum.energies.array()).exp();
        out.col(k) = spectrum.states * (phase * coeff.array()).matrix();
    }
    return out;
}

Eigen::VectorXcd propagator_element(const Spectrum& spectrum, int s_index, int r_index,
                                    const Eigen::VectorXd& times) {
    const Eigen::ArrayXd weight =
        (spectrum.states.row(r_index).array() * spectrum.states.row(s_index).array()).transpose();
    Eigen::VectorXcd out(times.size());
    for (Eigen::Index k = 0; k < times.size(); ++k) {
        const Eigen::ArrayXcd phase = (-kI * times[k] * spectrum.energies.array()).exp();
        out[k] = (phase * weight).sum();
    }
    return out;
}

double concurrence_pair(const State& state, int i_index, int j_index) {
    if (i_index == j_index)
        throw std::domain_error("concurrence_pair: sites must differ");
    return 2.0 * std::abs(state[i_index] * state[j_index]);
}

double oracle_horizon(const ChainSpec& spec, const DefectConfig& defects, int sender,
                      int receiver) {
    // the earliest boundary echo reaching any active site bounds the horizon
    int reach = 0;
    for (int s : {sender, receiver, defects.l1, defects.l2})
        reach = std::max(reach, std::abs(s));
    return static_cast<double>(spec.half() - reach);
}

TransferRecord transfer_concurrence_oracle(const ChainSpec& spec, const DefectConfig& defects,
                                           int sender, int receiver,
                                           const Eigen::VectorXd& times) {
    spec.validate();
    if (!spec.contains(sender) || !spec.contains(receiver))
        throw std::invalid_argument("transfer_concurrence_oracle: site outside the chain");

    const Spectrum sp = diagonalize(build_hamiltonian(spec, defects));
    TransferRecord rec;
    rec.sender = sender;
    rec.receiver = receiver;
    rec.omega0 = spec.omega0;
    rec.times = times;
    rec.method = Method::oracle;
    rec.f = propagator_element(sp, spec.index(sender), spec.index(receiver), times);
    rec.concurrence = rec.f.cwiseAbs();
    rec.horizon_ok =
        times.size() == 0 || times.maxCoeff() <= oracle_horizon(spec, defects, sender, receiver);
    return rec;
}

} // namespace xxchain
