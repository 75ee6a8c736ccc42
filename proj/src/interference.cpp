#include "relay/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relay {

namespace {

constexpr double kLn10Over10 = std::numbers::ln10 / 10.0;

// Fraction of importance-sampling draws taken from the untilted distribution.
constexpr double kDefensiveWeight = 0.2;

double sum_b_terms(Point2D target, const LinkGeometry& geom, double* sum_bsq) {
    const double d2 = squared_distance(target, geom.serving_node);
    const double half_beta = 0.5 * geom.path_loss_exponent;
    double sb = 0.0, sbsq = 0.0;
    for (const Point2D& q : geom.interferer_positions) {
        const double di2 = squared_distance(target, q);
        const double b = std::pow(d2 / di2, half_beta);
        sb += b;
        sbsq += b * b;
    }
    if (sum_bsq) *sum_bsq = sbsq;
    return sb;
}

SpatialMoments spatial_moments_impl(const LinkGeometry& geom, const QuadratureRule& quad,
                                    bool parallel) {
    geom.validate();
    if (geom.fixed_target) {
        const Point2D t = *geom.fixed_target;
        for (const Point2D& q : geom.interferer_positions) {
            if (squared_distance(t, q) == 0.0) {
                throw std::domain_error("spatial_moments: target coincides with an interferer");
            }
        }
        double sbsq = 0.0;
        const double sb = sum_b_terms(t, geom, &sbsq);
        return {sb, sb * sb, sbsq};
    }

    const std::size_t m = quad.nodes.size();
    std::vector<double> c1(m), c2(m), c3(m);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
        double sbsq = 0.0;
        const double sb = sum_b_terms(quad.nodes[i], geom, &sbsq);
        const double w = quad.weights[i];
        c1[i] = w * sb;
        c2[i] = w * sb * sb;
        c3[i] = w * sbsq;
    }
    double area = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        area += quad.weights[i];
        s1 += c1[i];
        s2 += c2[i];
        s3 += c3[i];
    }
    return {s1 / area, s2 / area, s3 / area};
}

struct IsrSampler {
    const LinkGeometry& geom;
    double a_sigma_serving;     // a * sigma (natural-log scale of the serving shadow)
    double a_sigma_interferer;  // a * sigma_i
    int n_interferers;

    explicit IsrSampler(const LinkGeometry& g)
        : geom(g),
          a_sigma_serving(kLn10Over10 * g.shadowing.sigma_serving_db),
          a_sigma_interferer(kLn10Over10 * g.shadowing.sigma_interferer_db),
          n_interferers(static_cast<int>(g.interferer_positions.size())) {}

    Point2D draw_target(std::mt19937_64& rng) const {
        if (geom.fixed_target) return *geom.fixed_target;
        return sample_point_in_hexagon(*geom.target_region, rng);
    }

    // Plain draw of I = sum B_i C_i.
    double draw(std::mt19937_64& rng) const {
        const Point2D t = draw_target(rng);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double xi = a_sigma_serving * gauss(rng);
        const double d2 = squared_distance(t, geom.serving_node);
        const double half_beta = 0.5 * geom.path_loss_exponent;
        double total = 0.0;
        for (const Point2D& q : geom.interferer_positions) {
            const double di2 = squared_distance(t, q);
            const double b = std::pow(d2 / di2, half_beta);
            total += b * std::exp(a_sigma_interferer * gauss(rng) - xi);
        }
        return total;
    }

    // Importance-sampled draw: returns (weight, I). The mixture tilts one
    // interferer shadow up and the serving shadow down, matching the
    // configurations that dominate E[I^2]; the defensive component keeps the
    // weights bounded.
    std::pair<double, double> draw_weighted(std::mt19937_64& rng, std::vector<double>& li) const {
        const Point2D t = draw_target(rng);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);

        const double s = a_sigma_serving;    // sd of ln-scale serving shadow
        const double si = a_sigma_interferer;
        const double u = unif(rng);
        int tilt = -1;  // -1: defensive component
        if (u >= kDefensiveWeight && n_interferers > 0) {
            tilt = std::min<int>(n_interferers - 1,
                                 static_cast<int>((u - kDefensiveWeight) /
                                                  (1.0 - kDefensiveWeight) * n_interferers));
        }
        double ls = s * gauss(rng);  // ln-scale serving shadow a*xi
        li.resize(n_interferers);
        for (int k = 0; k < n_interferers; ++k) li[k] = si * gauss(rng);
        if (tilt >= 0) {
            ls += -2.0 * s * s;
            li[tilt] += 2.0 * si * si;
        }

        // w = p / (alpha_0 p + sum_k alpha_k q_k)
        const double alpha_k =
            n_interferers > 0 ? (1.0 - kDefensiveWeight) / n_interferers : 0.0;
        double denom = kDefensiveWeight;
        const double base = std::exp(-2.0 * ls - 2.0 * (s * s + si * si));
        for (int k = 0; k < n_interferers; ++k) {
            denom += alpha_k * base * std::exp(2.0 * li[k]);
        }
        const double w = 1.0 / denom;

        const double d2 = squared_distance(t, geom.serving_node);
        const double half_beta = 0.5 * geom.path_loss_exponent;
        double total = 0.0;
        for (int k = 0; k < n_interferers; ++k) {
            const double di2 = squared_distance(t, geom.interferer_positions[k]);
            const double b = std::pow(d2 / di2, half_beta);
            total += b * std::exp(li[k] - ls);
        }
        return {w, total};
    }
};

constexpr std::uint64_t kBlockSize = 1 << 16;

McMoments mc_isr_moments_impl(const LinkGeometry& geom, std::uint64_t n, std::uint64_t seed,
                              bool parallel) {
    geom.validate();
    const IsrSampler sampler(geom);
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<double> s1(blocks), s2(blocks), q1(blocks), q2(blocks);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(b)));
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlockSize;
        const std::uint64_t hi = std::min<std::uint64_t>(lo + kBlockSize, n);
        double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
        std::vector<double> scratch;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const auto [w, v] = sampler.draw_weighted(rng, scratch);
            const double wv = w * v;
            const double wv2 = w * v * v;
            a1 += wv;
            a2 += wv2;
            b1 += wv * wv;
            b2 += wv2 * wv2;
        }
        s1[b] = a1;
        s2[b] = a2;
        q1[b] = b1;
        q2[b] = b2;
    }
    double t1 = 0.0, t2 = 0.0, u1 = 0.0, u2 = 0.0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        t1 += s1[b];
        t2 += s2[b];
        u1 += q1[b];
        u2 += q2[b];
    }
    McMoments out;
    out.samples = n;
    const double dn = static_cast<double>(n);
    out.m1 = t1 / dn;
    out.m2 = t2 / dn;
    out.m1_se = std::sqrt(std::max(0.0, u1 / dn - out.m1 * out.m1) / dn);
    out.m2_se = std::sqrt(std::max(0.0, u2 / dn - out.m2 * out.m2) / dn);
    return out;
}

}  // namespace

const char* link_name(LinkKind kind) {
    switch (kind) {
        case LinkKind::BsMs: return "bs_ms";
        case LinkKind::BsRs: return "bs_rs";
        case LinkKind::RsMs: return "rs_ms";
    }
    return "?";
}

void LinkGeometry::validate() const {
    if (interferer_positions.empty()) {
        throw std::invalid_argument("LinkGeometry: at least one interferer required");
    }
    if (!(path_loss_exponent > 2.0)) {
        throw std::invalid_argument("LinkGeometry: path loss exponent must exceed 2");
    }
    if (!fixed_target && !target_region) {
        throw std::invalid_argument("LinkGeometry: need a target region or a fixed target");
    }
    if (shadowing.sigma_serving_db < 0.0 || shadowing.sigma_interferer_db < 0.0) {
        throw std::invalid_argument("LinkGeometry: shadowing sigmas must be nonnegative");
    }
    if (target_region) {
        for (const Point2D& q : interferer_positions) {
            if (target_region->contains(q)) {
                throw std::domain_error("LinkGeometry: interferer inside the target region");
            }
        }
    }
}

ShadowRatioMoments shadow_ratio_moments(const ShadowingSpec& spec) {
    if (spec.sigma_serving_db < 0.0 || spec.sigma_interferer_db < 0.0) {
        throw std::invalid_argument("shadow_ratio_moments: sigmas must be nonnegative");
    }
    const double a2 = kLn10Over10 * kLn10Over10;
    const double ss = spec.sigma_serving_db * spec.sigma_serving_db;
    const double si = spec.sigma_interferer_db * spec.sigma_interferer_db;
    ShadowRatioMoments cm;
    cm.e_c = std::exp(0.5 * a2 * (si + ss));
    cm.e_c2 = std::exp(2.0 * a2 * (si + ss));
    cm.e_cc = std::exp(0.5 * a2 * (2.0 * si + 4.0 * ss));
    return cm;
}

SpatialMoments spatial_moments(const LinkGeometry& geom, const QuadratureRule& quad) {
    return spatial_moments_impl(geom, quad, true);
}

SpatialMoments spatial_moments_serial(const LinkGeometry& geom, const QuadratureRule& quad) {
    return spatial_moments_impl(geom, quad, false);
}

SpatialMoments spatial_moments_adaptive(const LinkGeometry& geom, int initial_points_per_triangle,
                                        double rel_tol, int max_points_per_triangle) {
    geom.validate();
    if (geom.fixed_target) {
        QuadratureRule dummy;
        return spatial_moments_impl(geom, dummy, false);
    }
    int pts = std::max(1, initial_points_per_triangle);
    SpatialMoments prev = spatial_moments(geom, make_quadrature(*geom.target_region, pts));
    while (pts < max_points_per_triangle) {
        pts *= 2;
        const SpatialMoments next = spatial_moments(geom, make_quadrature(*geom.target_region, pts));
        const double d1 = std::abs(next.mean_sum_b - prev.mean_sum_b) / next.mean_sum_b;
        const double d2 = std::abs(next.mean_sum_b_sq - prev.mean_sum_b_sq) / next.mean_sum_b_sq;
        const double d3 = std::abs(next.mean_sum_bsq - prev.mean_sum_bsq) / next.mean_sum_bsq;
        prev = next;
        if (std::max({d1, d2, d3}) < rel_tol) break;
    }
    return prev;
}

std::pair<double, double> isr_moments(const SpatialMoments& sm, const ShadowRatioMoments& cm) {
    const double m1 = cm.e_c * sm.mean_sum_b;
    const double m2 =
        cm.e_c2 * sm.mean_sum_bsq + cm.e_cc * (sm.mean_sum_b_sq - sm.mean_sum_bsq);
    return {m1, m2};
}

IsrModel lognormal_fit(double m1, double m2) {
    if (!(m1 > 0.0)) throw std::invalid_argument("lognormal_fit: m1 must be positive");
    if (m2 < m1 * m1) throw std::invalid_argument("lognormal_fit: m2 < m1^2 is infeasible");
    IsrModel model;
    model.m1 = m1;
    model.m2 = m2;
    model.mu = 2.0 * std::log(m1) - 0.5 * std::log(m2);
    model.sigma = std::sqrt(std::max(0.0, std::log(m2) - 2.0 * std::log(m1)));
    return model;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double isr_cdf(const IsrModel& model, double x) {
    if (!(x > 0.0)) throw std::domain_error("isr_cdf: x must be positive");
    const double lx = std::log(x);
    if (model.sigma == 0.0) return lx < model.mu ? 0.0 : 1.0;
    return standard_normal_cdf((lx - model.mu) / model.sigma);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Point2D sample_point_in_hexagon(const Hexagon& region, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> tri(0, 5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto verts = region.vertices();
    const int t = tri(rng);
    double u = unif(rng);
    double v = unif(rng);
    if (u + v > 1.0) {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    const Point2D c = region.center;
    const Point2D e1 = verts[t] - c;
    const Point2D e2 = verts[(t + 1) % 6] - c;
    return {c.x + u * e1.x + v * e2.x, c.y + u * e1.y + v * e2.y};
}

double sample_isr(const LinkGeometry& geom, std::mt19937_64& rng) {
    return IsrSampler(geom).draw(rng);
}

double sample_isr_exact(const LinkGeometry& geom, std::uint64_t seed) {
    geom.validate();
    std::mt19937_64 rng(seed);
    return sample_isr(geom, rng);
}

McMoments mc_isr_moments(const LinkGeometry& geom, std::uint64_t n, std::uint64_t seed) {
    return mc_isr_moments_impl(geom, n, seed, true);
}

McMoments mc_isr_moments_serial(const LinkGeometry& geom, std::uint64_t n, std::uint64_t seed) {
    return mc_isr_moments_impl(geom, n, seed, false);
}

SpatialMoments mc_spatial_moments(const LinkGeometry& geom, std::uint64_t n, std::uint64_t seed) {
    geom.validate();
    if (geom.fixed_target) {
        QuadratureRule dummy;
        return spatial_moments_impl(geom, dummy, false);
    }
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<double> s1(blocks), s2(blocks), s3(blocks);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(b)));
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlockSize;
        const std::uint64_t hi = std::min<std::uint64_t>(lo + kBlockSize, n);
        double a1 = 0.0, a2 = 0.0, a3 = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const Point2D t = sample_point_in_hexagon(*geom.target_region, rng);
            double sbsq = 0.0;
            const double sb = sum_b_terms(t, geom, &sbsq);
            a1 += sb;
            a2 += sb * sb;
            a3 += sbsq;
        }
        s1[b] = a1;
        s2[b] = a2;
        s3[b] = a3;
    }
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        t1 += s1[b];
        t2 += s2[b];
        t3 += s3[b];
    }
    const double dn = static_cast<double>(n);
    return {t1 / dn, t2 / dn, t3 / dn};
}

double mc_ks_distance(const LinkGeometry& geom, const IsrModel& model, std::uint64_t n,
                      std::uint64_t seed) {
    geom.validate();
    std::vector<double> samples(n);
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    const IsrSampler sampler(geom);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        std::mt19937_64 rng(split_seed(seed, static_cast<std::uint64_t>(b)));
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlockSize;
        const std::uint64_t hi = std::min<std::uint64_t>(lo + kBlockSize, n);
        for (std::uint64_t i = lo; i < hi; ++i) samples[i] = sampler.draw(rng);
    }
    std::sort(samples.begin(), samples.end());
    double d = 0.0;
    const double dn = static_cast<double>(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double f = isr_cdf(model, samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / dn));
        d = std::max(d, std::abs(f - static_cast<double>(i) / dn));
    }
    return d;
}

}  // namespace relay
