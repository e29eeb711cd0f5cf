#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "fraclab/errors.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/simd/kernels.hpp"

namespace fraclab {
namespace {

using boost::math::quadrature::gauss;

constexpr int kThetaNodes = 64;

// Gauss-Legendre nodes and weights on [0, 1].
void theta_rule(std::vector<double>& t, std::vector<double>& w) {
    const auto& x = gauss<double, kThetaNodes>::abscissa();
    const auto& wt = gauss<double, kThetaNodes>::weights();
    t.clear();
    w.clear();
    // Boost stores the nonnegative half of a rule with an even node count.
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (double s : {-1.0, 1.0}) {
            if (x[i] == 0.0 && s < 0.0) continue;
            t.push_back(0.5 * (1.0 + s * x[i]));
            w.push_back(0.5 * wt[i]);
        }
    }
}

// int_0^1 int_0^1 phi_c(u) phi_e(v) (s + v - u)^gamma du dv for hat halves
// phi_0(u) = 1 - u, phi_1(u) = u, as an integral over w = v - u of
// (s + w)^gamma K(w), K(w) = int phi_c(u) phi_e(u + w) du.
double pair_moment(int c, int e, int s, double gamma) {
    auto phi = [](int k, double u) { return k == 0 ? 1.0 - u : u; };
    auto K = [&](double w) {
        const double lo = std::max(0.0, -w), hi = std::min(1.0, 1.0 - w);
        if (!(hi > lo)) return 0.0;
        const double mid = 0.5 * (lo + hi);
        // Integrand is quadratic in u, Simpson is exact.
        return (hi - lo) / 6.0 *
               (phi(c, lo) * phi(e, lo + w) + 4.0 * phi(c, mid) * phi(e, mid + w) + phi(c, hi) * phi(e, hi + w));
    };
    auto smooth = [&](double a, double b) {
        return gauss<double, 20>::integrate([&](double w) { return std::pow(s + w, gamma) * K(w); }, a, b);
    };
    if (s >= 2) return smooth(-1.0, 0.0) + smooth(0.0, 1.0);
    // s = 1, w in [-1, 0]: t = 1 + w in [0, 1] and K vanishes at t = 0.
    // K(t) = k1 t + k2 t^2 + k3 t^3; fit at three points and integrate t^gamma exactly.
    const double ts[3] = {0.25, 0.5, 1.0};
    double A[3][4];
    for (int r = 0; r < 3; ++r) {
        const double t = ts[r];
        A[r][0] = t;
        A[r][1] = t * t;
        A[r][2] = t * t * t;
        A[r][3] = K(t - 1.0);
    }
    for (int col = 0; col < 3; ++col) {
        for (int r = col + 1; r < 3; ++r) {
            const double f = A[r][col] / A[col][col];
            for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
        }
    }
    double k[3];
    for (int r = 2; r >= 0; --r) {
        double v = A[r][3];
        for (int q = r + 1; q < 3; ++q) v -= A[r][q] * k[q];
        k[r] = v / A[r][r];
    }
    double left = 0.0;
    for (int n = 1; n <= 3; ++n) left += k[n - 1] / (gamma + n + 1.0);
    return left + smooth(0.0, 1.0);
}

// int_0^1 phi_c(u) |m + u|^{alpha-1} du
double potential_moment(int c, long m, double alpha) {
    const double a = alpha;
    if (m == 0) return c == 0 ? 1.0 / a - 1.0 / (a + 1.0) : 1.0 / (a + 1.0);
    if (m == -1) return c == 0 ? 1.0 / (a + 1.0) : 1.0 / a - 1.0 / (a + 1.0);
    return gauss<double, 20>::integrate(
        [&](double u) { return (c == 0 ? 1.0 - u : u) * std::pow(std::abs(static_cast<double>(m) + u), a - 1.0); },
        0.0, 1.0);
}

}  // namespace

StressTensor eval_stress_tensor(const FunctionSpec& rho, double alpha, int d, const Point& x, const QuadratureConfig& cfg) {
    if (d < 1 || d > kMaxDim) throw ValidationError("dimension must be 1, 2 or 3");
    if (!(alpha > 0.0 && alpha < d)) throw ValidationError("alpha must lie in (0, d)");
    validate(rho);
    if (dimension(rho) != d || x.dim != d) throw ValidationError("stress tensor inputs have mismatched dimensions");
    validate(cfg, d);
    StressTensor S;
    S.d = d;
    if (is_zero(rho)) return S;

    std::vector<std::pair<int, int>> comps;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) comps.emplace_back(a, b);
    const int K = static_cast<int>(comps.size());

    std::vector<double> tn, tw;
    theta_rule(tn, tw);
    std::vector<Estimate> acc(static_cast<std::size_t>(K));
    for (std::size_t i = 0; i < tn.size(); ++i) {
        const double theta = tn[i];
        const double R = bilinear_truncation(rho, rho, theta, x);
        if (!(R > 0.0)) continue;
        RadialProblem p;
        p.dim = d;
        p.beta = alpha;
        p.radius = R;
        p.outputs = K;
        p.eval = [&](const Point& y, double* out) {
            const double a = evaluate(rho, x + (theta - 1.0) * y);
            const double v = a == 0.0 ? 0.0 : a * evaluate(rho, x + theta * y);
            const double r2 = norm_sq(y);
            for (int k = 0; k < K; ++k) {
                const auto [ca, cb] = comps[static_cast<std::size_t>(k)];
                out[k] = v == 0.0 ? 0.0 : v * (y[ca] * y[cb] / r2);
            }
        };
        p.breaks = [&](const Point& dir) {
            auto a = ray_breakpoints(rho, x, (theta - 1.0) * dir);
            auto b = ray_breakpoints(rho, x, theta * dir);
            a.insert(a.end(), b.begin(), b.end());
            std::sort(a.begin(), a.end(), [](const Breakpoint& u, const Breakpoint& v) { return u.s < v.s; });
            return a;
        };
        const auto est = integrate_radial(p, cfg);
        for (int k = 0; k < K; ++k) {
            auto& e = acc[static_cast<std::size_t>(k)];
            const auto& r = est[static_cast<std::size_t>(k)];
            const double w = 0.5 * tw[i];
            e.value += w * r.value;
            e.error_bound += w * r.error_bound;
            e.std_error = std::hypot(e.std_error, w * r.std_error);
            e.samples_used += r.samples_used;
            e.converged = e.converged && r.converged;
        }
    }
    for (int k = 0; k < K; ++k) {
        const auto [a, b] = comps[static_cast<std::size_t>(k)];
        S.at(a, b) = acc[static_cast<std::size_t>(k)];
        S.at(b, a) = acc[static_cast<std::size_t>(k)];
    }
    return S;
}

DivergenceReport check_divergence_identity(const GridFunction& rho, double alpha, int d, const QuadratureConfig& cfg) {
    (void)cfg;
    if (d != 1 || rho.dim() != 1) throw ValidationError("the divergence check is one-dimensional");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    validate(FunctionSpec{rho});
    const std::size_t N = rho.shape[0];
    if (N < 65) throw ValidationError("the divergence check needs at least 64 cells, got " + std::to_string(N - 1));
    const double h = rho.spacing;
    const double ha = std::pow(h, alpha);
    const double gamma = alpha - 2.0;

    DivergenceReport rep;
    rep.cells = N - 1;

    const double* r = rho.values.data();
    const long n = static_cast<long>(N);

    // Potential U_k = sum over cells p = k + m of sum_c V_c(m) rho_{p+c}.
    std::vector<double> U(N, 0.0);
    const double vscale = ha / (1.0 - alpha);
    for (long m = -(n - 1); m <= n - 2; ++m) {
        const long klo = std::max(0L, -m), khi = std::min(n - 1, n - 2 - m);
        if (khi < klo) continue;
        const auto len = static_cast<std::size_t>(khi - klo + 1);
        simd::axpy(vscale * potential_moment(0, m, alpha), r + klo + m, U.data() + klo, len);
        simd::axpy(vscale * potential_moment(1, m, alpha), r + klo + m + 1, U.data() + klo, len);
    }

    // S_k = sum over cells p < k <= q of the pair integral, grouped by s = q - p:
    // Q_s(p) = sum_{c,e} M_ce(s) rho_{p+c} rho_{p+s+e}, S_k += sum_{p=k-s}^{k-1} Q_s(p).
    std::vector<double> S(N, 0.0), Q(N), C(N + 1);
    for (long s = 1; s <= n - 2; ++s) {
        const auto cells = static_cast<std::size_t>(n - 1 - s);  // p = 0 .. n-2-s
        std::fill(Q.begin(), Q.end(), 0.0);
        for (int c = 0; c < 2; ++c)
            for (int e = 0; e < 2; ++e)
                simd::axpy_product(ha * pair_moment(c, e, static_cast<int>(s), gamma), r + c, r + s + e, Q.data(), cells);
        C[0] = 0.0;
        for (std::size_t p = 0; p < N; ++p) C[p + 1] = C[p] + Q[p];
        for (std::size_t k = 1; k < N; ++k) {
            const long lo = std::max(0L, static_cast<long>(k) - s);
            S[k] += C[k] - C[static_cast<std::size_t>(lo)];
        }
    }

    std::vector<double> resid(N, 0.0), rhs(N, 0.0);
    for (std::size_t k = 1; k + 1 < N; ++k) {
        const double lhs = rho.values[k] * (U[k + 1] - U[k - 1]) / (2.0 * h);
        rhs[k] = (S[k + 1] - S[k - 1]) / (2.0 * h);
        resid[k] = lhs - rhs[k];
    }
    double rmax = 0.0;
    for (double r : resid) rmax = std::max(rmax, std::abs(r));
    const double rn = std::sqrt(simd::dot(resid.data(), resid.data(), N) * h);
    const double sn = std::sqrt(simd::dot(rhs.data(), rhs.data(), N) * h);
    rep.max_residual = rmax;
    rep.rhs_l2 = sn;
    rep.relative_l2 = sn > 0.0 ? rn / sn : 0.0;
    rep.stress = std::move(S);
    rep.potential = std::move(U);
    return rep;
}

}  // namespace fraclab
