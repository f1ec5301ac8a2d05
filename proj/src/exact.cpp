#include "jcm/exact.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace jcm {

double ExactState::norm2() const {
    double n = 0.0;
    for (const auto& a : up) n += std::norm(a);
    for (const auto& a : down) n += std::norm(a);
    return n;
}

namespace {

double poisson_tail(double mean, int n_max) {
    if (mean <= 0.0) return 0.0;
    double logp = -mean;
    double cum = std::exp(logp);
    for (int n = 1; n <= n_max; ++n) {
        logp += std::log(mean / n);
        cum += std::exp(logp);
    }
    return 1.0 - cum;
}

}  // namespace

int auto_n_max(double alpha_abs, double tail_bound) {
    const double mean = alpha_abs * alpha_abs;
    if (mean <= 0.0) return 1;
    double logp = -mean;
    double cum = std::exp(logp);
    int n = 0;
    while (1.0 - cum >= tail_bound) {
        ++n;
        logp += std::log(mean / n);
        cum += std::exp(logp);
        if (n > 1000000) throw TruncationError("auto n_max search did not converge");
    }
    return n;
}

ExactState prepare_coherent_excited(const cplx& alpha, int n_max) {
    if (n_max < 1) throw TruncationError("n_max must be positive");
    const double mean = std::norm(alpha);
    const double tail = poisson_tail(mean, n_max);
    if (!(tail < 1e-12))
        throw TruncationError("coherent-state truncation tail " + std::to_string(tail) +
                              " at n_max=" + std::to_string(n_max) + " is not below 1e-12");
    ExactState s;
    s.n_max = n_max;
    s.up.assign(n_max + 1, cplx{0.0, 0.0});
    s.down.assign(n_max + 1, cplx{0.0, 0.0});
    if (mean == 0.0) {
        s.up[0] = 1.0;
        return s;
    }
    const double la = std::log(std::abs(alpha));
    const double ph = std::arg(alpha);
    for (int n = 0; n <= n_max; ++n) {
        const double logmag = -0.5 * mean + n * la - 0.5 * std::lgamma(n + 1.0);
        s.up[n] = std::polar(std::exp(logmag), n * ph);
    }
    const double nrm = std::sqrt(s.norm2());
    for (auto& a : s.up) a /= nrm;
    return s;
}

ExactState exact_evolve(const ExactState& s, const ModelParams& p, double t) {
    ExactState out = s;
    const double delta = p.epsilon - p.omega;
    const cplx iu{0.0, 1.0};
    // |down,0> is an eigenstate with energy -eps/2
    out.down[0] = std::exp(iu * (0.5 * p.epsilon * t)) * s.down[0];
    // topmost |up,n_max> has no partner inside the truncation
    out.up[s.n_max] =
        std::exp(-iu * ((p.omega * s.n_max + 0.5 * p.epsilon) * t)) * s.up[s.n_max];
    for (int n = 0; n + 1 <= s.n_max; ++n) {
        const double g = 2.0 * p.coupling * std::sqrt(n + 1.0);
        const double om = std::sqrt(delta * delta + g * g);
        const cplx phase = std::exp(-iu * (p.omega * (n + 0.5) * t));
        double c, sn;  // cos(om t/2), sin(om t/2)/om
        if (om > 1e-15) {
            c = std::cos(0.5 * om * t);
            sn = std::sin(0.5 * om * t) / om;
        } else {
            c = 1.0;
            sn = 0.5 * t;
        }
        const cplx a = s.up[n];
        const cplx b = s.down[n + 1];
        out.up[n] = phase * ((c - iu * delta * sn) * a - iu * g * sn * b);
        out.down[n + 1] = phase * (-iu * g * sn * a + (c + iu * delta * sn) * b);
    }
    return out;
}

ExactObservables exact_observables(const ExactState& s, const ModelParams& p) {
    double pu = 0.0, pd = 0.0, photon = 0.0;
    cplx rho_ud{0.0, 0.0};
    for (int n = 0; n <= s.n_max; ++n) {
        pu += std::norm(s.up[n]);
        pd += std::norm(s.down[n]);
        photon += n * (std::norm(s.up[n]) + std::norm(s.down[n]));
        rho_ud += s.up[n] * std::conj(s.down[n]);
    }
    cplx b{0.0, 0.0}, inter{0.0, 0.0};
    for (int n = 0; n + 1 <= s.n_max; ++n) {
        const double r = std::sqrt(n + 1.0);
        b += r * (std::conj(s.up[n]) * s.up[n + 1] + std::conj(s.down[n]) * s.down[n + 1]);
        inter += r * std::conj(s.up[n]) * s.down[n + 1];
    }
    ExactObservables o;
    o.sigma3 = pu - pd;
    o.sigmaP = std::sqrt(o.sigma3 * o.sigma3 + 4.0 * std::norm(rho_ud));
    o.photon = photon;
    o.B = b;
    o.energy = 0.5 * p.epsilon * o.sigma3 + p.omega * photon +
               2.0 * p.coupling * inter.real();
    return o;
}

cplx exact_pair_moment(const ExactState& s) {
    cplx bb{0.0, 0.0};
    for (int n = 0; n + 2 <= s.n_max; ++n) {
        const double r = std::sqrt((n + 1.0) * (n + 2.0));
        bb += r * (std::conj(s.up[n]) * s.up[n + 2] + std::conj(s.down[n]) * s.down[n + 2]);
    }
    return bb;
}

ExactState dense_oracle_evolve(const ExactState& s, const ModelParams& p, double t) {
    if (s.n_max > 32) throw TruncationError("dense oracle cost guard: n_max must be <= 32");
    const int nb = s.n_max + 1;
    const int dim = 2 * nb;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n < nb; ++n) {
        H(n, n) = p.omega * n + 0.5 * p.epsilon;
        H(nb + n, nb + n) = p.omega * n - 0.5 * p.epsilon;
    }
    for (int n = 0; n + 1 < nb; ++n) {
        const double g = p.coupling * std::sqrt(n + 1.0);
        H(n, nb + n + 1) = g;
        H(nb + n + 1, n) = g;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    Eigen::VectorXd re(dim), im(dim);
    for (int n = 0; n < nb; ++n) {
        re(n) = s.up[n].real();
        im(n) = s.up[n].imag();
        re(nb + n) = s.down[n].real();
        im(nb + n) = s.down[n].imag();
    }
    Eigen::VectorXd cr = es.eigenvectors().transpose() * re;
    Eigen::VectorXd ci = es.eigenvectors().transpose() * im;
    Eigen::VectorXcd rot(dim);
    const cplx iu{0.0, 1.0};
    for (int k = 0; k < dim; ++k)
        rot(k) = std::exp(-iu * (es.eigenvalues()(k) * t)) * cplx{cr(k), ci(k)};
    Eigen::VectorXcd psi = es.eigenvectors().cast<cplx>() * rot;
    ExactState out = s;
    for (int n = 0; n < nb; ++n) {
        out.up[n] = psi(n);
        out.down[n] = psi(nb + n);
    }
    return out;
}

}  // namespace jcm
