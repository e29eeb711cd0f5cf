#include "fraclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {
namespace {

constexpr int kOriginLevels = 36;
constexpr int kSingularLevels = 36;
constexpr int kMaxRefinements = 24;
constexpr std::size_t kBlock = 4096;

struct Direction {
    Point dir;
    double weight;
};

std::vector<Direction> directions(int d, int level) {
    std::vector<Direction> out;
    if (d == 1) {
        out.push_back({Point{1.0}, 1.0});
        out.push_back({Point{-1.0}, 1.0});
        return out;
    }
    const std::size_t nphi = std::size_t{8} << level;
    if (d == 2) {
        for (std::size_t k = 0; k < nphi; ++k) {
            const double phi = 2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(nphi);
            out.push_back({Point{std::cos(phi), std::sin(phi)}, 2.0 * kPi / static_cast<double>(nphi)});
        }
        return out;
    }
    // Equal-area cells: uniform in z = cos(polar angle) and in azimuth.
    const std::size_t nz = std::size_t{4} << level;
    const double w = 4.0 * kPi / static_cast<double>(nz * nphi);
    for (std::size_t i = 0; i < nz; ++i) {
        const double z = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(nz);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (std::size_t k = 0; k < nphi; ++k) {
            const double phi = 2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(nphi);
            out.push_back({Point{s * std::cos(phi), s * std::sin(phi), z}, w});
        }
    }
    return out;
}

struct Segment {
    double a, b;
    int grade_a, grade_b;  // number of geometric levels toward each end
};

std::vector<Segment> segments_for(const RadialProblem& p, const Point& dir, double inner_cut) {
    const double R = p.radius;
    std::vector<Breakpoint> bps;
    if (p.breaks) bps = p.breaks(dir);
    std::vector<Breakpoint> cuts{{0.0, false}};
    if (inner_cut > 0.0 && inner_cut < R) cuts.push_back({inner_cut, false});
    for (const Breakpoint& b : bps)
        if (b.s > 0.0 && b.s < R) cuts.push_back(b);
    cuts.push_back({R, false});
    std::sort(cuts.begin(), cuts.end(), [](const Breakpoint& x, const Breakpoint& y) { return x.s < y.s; });
    std::vector<Breakpoint> merged;
    const double eps = 1e-14 * R;
    for (const Breakpoint& c : cuts) {
        if (!merged.empty() && c.s - merged.back().s <= eps) {
            merged.back().singular = merged.back().singular || c.singular;
            continue;
        }
        merged.push_back(c);
    }
    std::vector<Segment> out;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        Segment s{merged[i].s, merged[i + 1].s, 0, 0};
        if (i == 0) s.grade_a = kOriginLevels;
        if (merged[i].singular) s.grade_a = kSingularLevels;
        if (merged[i + 1].singular) s.grade_b = kSingularLevels;
        out.push_back(s);
    }
    return out;
}

// Cells [a,b] of a segment graded geometrically (ratio 1/2) toward the marked ends.
void graded_cells(double a, double b, int levels, bool toward_a, int m, std::vector<std::pair<double, double>>& out) {
    const double len = b - a;
    auto push_uniform = [&](double lo, double hi) {
        for (int k = 0; k < m; ++k) {
            const double c0 = lo + (hi - lo) * k / m;
            const double c1 = k + 1 == m ? hi : lo + (hi - lo) * (k + 1) / m;
            out.emplace_back(c0, c1);
        }
    };
    // Distance from the graded end: [0, len 2^-L], [len 2^-(k+1), len 2^-k].
    std::vector<double> marks{0.0};
    for (int k = levels; k >= 0; --k) marks.push_back(std::ldexp(len, -k));
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
        if (toward_a)
            push_uniform(a + marks[i], i + 2 == marks.size() ? b : a + marks[i + 1]);
        else
            push_uniform(i + 2 == marks.size() ? a : b - marks[i + 1], b - marks[i]);
    }
}

std::vector<std::pair<double, double>> mesh(const std::vector<Segment>& segs, int m) {
    std::vector<std::pair<double, double>> cells;
    for (const Segment& s : segs) {
        if (s.grade_a && s.grade_b) {
            const double mid = 0.5 * (s.a + s.b);
            graded_cells(s.a, mid, s.grade_a, true, m, cells);
            graded_cells(mid, s.b, s.grade_b, false, m, cells);
        } else if (s.grade_a) {
            graded_cells(s.a, s.b, s.grade_a, true, m, cells);
        } else if (s.grade_b) {
            graded_cells(s.a, s.b, s.grade_b, false, m, cells);
        } else {
            graded_cells(s.a, s.b, 0, true, m, cells);
        }
    }
    return cells;
}

[[noreturn]] void non_finite(const Point& y) { throw QuadratureError("non-finite integrand value", "y = " + y.to_string()); }

std::vector<Estimate> deterministic(const RadialProblem& p, const QuadratureConfig& cfg) {
    const int K = p.outputs;
    std::vector<double> prev;
    std::vector<Estimate> result(static_cast<std::size_t>(K));
    std::vector<double> buf(static_cast<std::size_t>(K));
    for (int level = 0; level < kMaxRefinements; ++level) {
        const int m = 1 << level;
        const int ang_level = p.dim == 1 ? 0 : level;
        const auto dirs = directions(p.dim, ang_level);
        std::vector<std::vector<std::pair<double, double>>> meshes;
        meshes.reserve(dirs.size());
        std::size_t total = 0;
        for (const Direction& d : dirs) {
            meshes.push_back(mesh(segments_for(p, d.dir, cfg.inner_cut), m));
            total += meshes.back().size();
        }
        if (!prev.empty() && total > cfg.samples) {
            for (auto& e : result) e.converged = false;
            return result;
        }
        std::vector<double> cur(static_cast<std::size_t>(K), 0.0);
        for (std::size_t di = 0; di < dirs.size(); ++di) {
            std::vector<double> acc(static_cast<std::size_t>(K), 0.0);
            for (const auto& [a, b] : meshes[di]) {
                const double w = radial_weight(a, b, p.beta);
                if (w == 0.0) continue;
                const Point y = (0.5 * (a + b)) * dirs[di].dir;
                p.eval(y, buf.data());
                for (int k = 0; k < K; ++k) {
                    const double v = buf[static_cast<std::size_t>(k)];
                    if (!std::isfinite(v)) non_finite(y);
                    acc[static_cast<std::size_t>(k)] += w * v;
                }
            }
            for (int k = 0; k < K; ++k) cur[static_cast<std::size_t>(k)] += dirs[di].weight * acc[static_cast<std::size_t>(k)];
        }
        double diff = 0.0, mag = 0.0;
        if (!prev.empty())
            for (int k = 0; k < K; ++k) {
                diff = std::max(diff, std::abs(cur[static_cast<std::size_t>(k)] - prev[static_cast<std::size_t>(k)]));
                mag = std::max(mag, std::abs(cur[static_cast<std::size_t>(k)]));
            }
        for (int k = 0; k < K; ++k) {
            auto& e = result[static_cast<std::size_t>(k)];
            e.value = cur[static_cast<std::size_t>(k)];
            e.error_bound = prev.empty() ? 0.0 : std::abs(cur[static_cast<std::size_t>(k)] - prev[static_cast<std::size_t>(k)]);
            e.samples_used = total;
            e.std_error = 0.0;
            e.converged = true;
        }
        if (!prev.empty() && diff <= std::max(cfg.abs_tol, cfg.rel_tol * mag)) return result;
        prev = std::move(cur);
    }
    for (auto& e : result) e.converged = false;
    return result;
}

struct Moments {
    std::vector<double> sum, sumsq;
};

Moments add(const Moments& a, const Moments& b) {
    Moments r = a;
    for (std::size_t k = 0; k < r.sum.size(); ++k) {
        r.sum[k] += b.sum[k];
        r.sumsq[k] += b.sumsq[k];
    }
    return r;
}

// Fixed pairwise tree over block results.
Moments reduce(const std::vector<Moments>& blocks, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return blocks[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return add(reduce(blocks, lo, mid), reduce(blocks, mid, hi));
}

inline double unit_open(std::mt19937_64& rng) {
    // (0, 1] with 53 random bits
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

std::mt19937_64 block_rng(std::uint64_t seed, std::size_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

// Runs `draw(rng, out)` cfg.samples times in seeded blocks; returns per-output mean and SE of the mean.
template <class Draw>
void monte_carlo(std::size_t n, std::uint64_t seed, int K, Draw draw, std::vector<double>& mean, std::vector<double>& se) {
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<Moments> blocks(nblocks);
    parallel_for(nblocks, [&](std::size_t bi) {
        auto rng = block_rng(seed, bi);
        Moments m{std::vector<double>(static_cast<std::size_t>(K), 0.0), std::vector<double>(static_cast<std::size_t>(K), 0.0)};
        std::vector<double> buf(static_cast<std::size_t>(K));
        const std::size_t count = std::min(kBlock, n - bi * kBlock);
        for (std::size_t i = 0; i < count; ++i) {
            draw(rng, buf.data());
            for (int k = 0; k < K; ++k) {
                const double v = buf[static_cast<std::size_t>(k)];
                m.sum[static_cast<std::size_t>(k)] += v;
                m.sumsq[static_cast<std::size_t>(k)] += v * v;
            }
        }
        blocks[bi] = std::move(m);
    });
    const Moments total = reduce(blocks, 0, nblocks);
    mean.assign(static_cast<std::size_t>(K), 0.0);
    se.assign(static_cast<std::size_t>(K), 0.0);
    const double N = static_cast<double>(n);
    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        mean[ku] = total.sum[ku] / N;
        const double var = n > 1 ? std::max(0.0, (total.sumsq[ku] - N * mean[ku] * mean[ku]) / (N - 1.0)) : 0.0;
        se[ku] = std::sqrt(var / N);
    }
}

Point random_direction(int d, std::mt19937_64& rng) {
    if (d == 1) return Point{(rng() >> 63) ? 1.0 : -1.0};
    for (;;) {
        Point p(d);
        for (int i = 0; i < d; i += 2) {
            const double r = std::sqrt(-2.0 * std::log(unit_open(rng)));
            const double phi = 2.0 * kPi * unit_open(rng);
            p[i] = r * std::cos(phi);
            if (i + 1 < d) p[i + 1] = r * std::sin(phi);
        }
        const double n = norm(p);
        if (n > 0.0) return (1.0 / n) * p;
    }
}

std::vector<Estimate> monte_carlo_radial(const RadialProblem& p, const QuadratureConfig& cfg) {
    const int K = p.outputs;
    const double R = p.radius, beta = p.beta;
    std::vector<double> mean, se;
    monte_carlo(cfg.samples, cfg.seed, K,
                [&](std::mt19937_64& rng, double* out) {
                    const double u = R * std::pow(unit_open(rng), 1.0 / beta);
                    const Point y = u * random_direction(p.dim, rng);
                    p.eval(y, out);
                    for (int k = 0; k < K; ++k)
                        if (!std::isfinite(out[k])) non_finite(y);
                },
                mean, se);
    const double scale = unit_sphere_area(p.dim) * std::pow(R, beta) / beta;
    std::vector<Estimate> r(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        r[ku] = {scale * mean[ku], scale * se[ku], 3.0 * scale * se[ku], cfg.samples, true};
    }
    return r;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Deterministic1D: return "deterministic1d";
        case Method::MonteCarloRadial: return "monte_carlo_radial";
        case Method::TensorGrid: return "tensor_grid";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "deterministic1d" || name == "deterministic") return Method::Deterministic1D;
    if (name == "monte_carlo_radial" || name == "mc") return Method::MonteCarloRadial;
    if (name == "tensor_grid") return Method::TensorGrid;
    throw ValidationError("unknown quadrature method '" + name + "'");
}

void validate(const QuadratureConfig& cfg, int d) {
    if (cfg.samples < 1) throw ValidationError("samples must be >= 1");
    if (!(cfg.truncation_radius > 0.0) || !std::isfinite(cfg.truncation_radius))
        throw ValidationError("truncation_radius must be positive");
    if (!(cfg.inner_cut >= 0.0) || !(cfg.inner_cut < cfg.truncation_radius))
        throw ValidationError("inner_cut must satisfy 0 <= inner_cut < truncation_radius");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) throw ValidationError("tolerances must be positive");
    if (d < 1 || d > kMaxDim) throw ValidationError("dimension must be 1, 2 or 3");
    if (cfg.method == Method::Deterministic1D && d != 1)
        throw ValidationError("deterministic1d quadrature only supports d = 1");
}

double radial_weight(double a, double b, double beta) {
    if (!(b > a)) return 0.0;
    if (a <= 0.0) return std::pow(b, beta) / beta;
    return std::pow(a, beta) * std::expm1(beta * std::log1p((b - a) / a)) / beta;
}

std::vector<Estimate> integrate_radial(const RadialProblem& p, const QuadratureConfig& cfg) {
    QuadratureConfig c = cfg;
    if (c.inner_cut >= p.radius) c.inner_cut = 0.0;
    if (!(p.radius > 0.0)) return std::vector<Estimate>(static_cast<std::size_t>(p.outputs));
    if (c.method == Method::MonteCarloRadial) return monte_carlo_radial(p, c);
    if (c.method == Method::Deterministic1D && p.dim != 1)
        throw ValidationError("deterministic1d quadrature only supports d = 1");
    return deterministic(p, c);
}

Estimate integrate_singular(const Integrand& g, double alpha, int d, const QuadratureConfig& cfg) {
    validate(cfg, d);
    if (!(alpha > 0.0 && alpha < d)) throw ValidationError("alpha must lie in (0, d)");
    RadialProblem p;
    p.dim = d;
    p.beta = alpha;
    p.radius = cfg.truncation_radius;
    p.eval = [&](const Point& y, double* out) { out[0] = g(y); };
    return integrate_radial(p, cfg)[0];
}

Estimate integrate_box(const Integrand& g, const Box& box, const QuadratureConfig& cfg) {
    const int d = box.dim();
    validate(cfg, d);
    for (int i = 0; i < d; ++i)
        if (!std::isfinite(box.lo[i]) || !std::isfinite(box.hi[i]) || !(box.hi[i] >= box.lo[i]))
            throw ValidationError("integration box must be finite and nonempty");
    const double vol = box.volume();
    if (cfg.method == Method::MonteCarloRadial) {
        std::vector<double> mean, se;
        monte_carlo(cfg.samples, cfg.seed, 1,
                    [&](std::mt19937_64& rng, double* out) {
                        Point y(d);
                        for (int i = 0; i < d; ++i) y[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * unit_open(rng);
                        out[0] = g(y);
                        if (!std::isfinite(out[0])) non_finite(y);
                    },
                    mean, se);
        return {vol * mean[0], vol * se[0], 3.0 * vol * se[0], cfg.samples, true};
    }
    Estimate e;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t n = 4;; n *= 2) {
        std::size_t total = 1;
        for (int i = 0; i < d; ++i) total *= n;
        if (have_prev && total > cfg.samples) {
            e.converged = false;
            return e;
        }
        double cell = vol;
        for (int i = 0; i < d; ++i) cell /= static_cast<double>(n);
        double s = 0.0;
        for (std::size_t flat = 0; flat < total; ++flat) {
            Point y(d);
            std::size_t rest = flat;
            for (int i = d - 1; i >= 0; --i) {
                const double h = (box.hi[i] - box.lo[i]) / static_cast<double>(n);
                y[i] = box.lo[i] + h * (static_cast<double>(rest % n) + 0.5);
                rest /= n;
            }
            const double v = g(y);
            if (!std::isfinite(v)) non_finite(y);
            s += v;
        }
        const double cur = s * cell;
        e = {cur, 0.0, have_prev ? std::abs(cur - prev) : 0.0, total, true};
        if (have_prev && e.error_bound <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(cur))) return e;
        prev = cur;
        have_prev = true;
    }
}

}  // namespace fraclab
