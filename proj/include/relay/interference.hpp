#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "relay/geometry.hpp"

namespace relay {

enum class LinkKind { BsMs, BsRs, RsMs };

const char* link_name(LinkKind kind);

/// Shadowing standard deviations in dB for the serving link and the
/// interfering links (equal across interferers).
struct ShadowingSpec {
    double sigma_serving_db = 0.0;
    double sigma_interferer_db = 0.0;
};

/// Everything needed to evaluate the interference-to-signal ratio on one
/// link: either a region the target moves over (BS-MS, RS-MS) or a fixed
/// target point (BS-RS), the serving node, and the first-tier interferers.
/// Transmit powers cancel out of the ratio and are deliberately absent.
struct LinkGeometry {
    LinkKind kind = LinkKind::BsMs;
    std::optional<Hexagon> target_region;
    std::optional<Point2D> fixed_target;
    Point2D serving_node;
    std::vector<Point2D> interferer_positions;
    double path_loss_exponent = 3.5;
    ShadowingSpec shadowing;

    void validate() const;
};

/// Spatial moments of the distance-ratio terms B_i = (d/d_i)^beta.
struct SpatialMoments {
    double mean_sum_b = 0.0;     // E[sum B_i]
    double mean_sum_b_sq = 0.0;  // E[(sum B_i)^2]
    double mean_sum_bsq = 0.0;   // E[sum B_i^2]
};

/// Moments of the shadow ratio C_i = 10^((xi_i - xi)/10).
struct ShadowRatioMoments {
    double e_c = 1.0;   // E[C_i]
    double e_c2 = 1.0;  // E[C_i^2]
    double e_cc = 1.0;  // E[C_i C_j], i != j
};

/// Lognormal fit of the total ISR, natural-log parameters.
struct IsrModel {
    double mu = 0.0;
    double sigma = 0.0;
    double m1 = 1.0;  // source moments the fit was derived from
    double m2 = 1.0;
};

ShadowRatioMoments shadow_ratio_moments(const ShadowingSpec& spec);

SpatialMoments spatial_moments(const LinkGeometry& geom, const QuadratureRule& quad);
SpatialMoments spatial_moments_serial(const LinkGeometry& geom, const QuadratureRule& quad);

/// Refines the quadrature (doubling point counts) until successive values of
/// all three moments change by less than rel_tol.
SpatialMoments spatial_moments_adaptive(const LinkGeometry& geom, int initial_points_per_triangle,
                                        double rel_tol, int max_points_per_triangle = 1 << 18);

std::pair<double, double> isr_moments(const SpatialMoments& sm, const ShadowRatioMoments& cm);

IsrModel lognormal_fit(double m1, double m2);

/// Phi((ln x - mu)/sigma); sigma == 0 degenerates to a step at exp(mu).
double isr_cdf(const IsrModel& model, double x);

double standard_normal_cdf(double z);

/// One exact draw of I = sum (d/d_i)^beta * 10^((xi_i - xi)/10) with the
/// target position uniform over the region (or fixed). Deterministic per seed.
double sample_isr_exact(const LinkGeometry& geom, std::uint64_t seed);

/// Engine-driven variant for bulk sampling.
double sample_isr(const LinkGeometry& geom, std::mt19937_64& rng);

/// Monte Carlo estimates of the first two ISR moments with standard errors.
/// The second moment uses a mixture importance sampler over the shadow
/// variables (the plain estimator has unusable variance at 8 dB shadowing);
/// the first moment comes from the same weighted draws. Deterministic for a
/// given (n, seed) regardless of thread count.
struct McMoments {
    double m1 = 0.0;
    double m1_se = 0.0;
    double m2 = 0.0;
    double m2_se = 0.0;
    std::uint64_t samples = 0;
};

McMoments mc_isr_moments(const LinkGeometry& geom, std::uint64_t n, std::uint64_t seed);
McMoments mc_isr_moments_serial(const LinkGeometry& geom, std::uint64_t n, std::uint64_t seed);

/// Plain area-sampling oracle for the spatial moments (no shadowing).
SpatialMoments mc_spatial_moments(const LinkGeometry& geom, std::uint64_t n, std::uint64_t seed);

/// Kolmogorov-Smirnov distance between the fitted CDF and the empirical CDF
/// of n exact samples.
double mc_ks_distance(const LinkGeometry& geom, const IsrModel& model, std::uint64_t n,
                      std::uint64_t seed);

/// SplitMix64 step, used to derive independent seeds.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform point in a hexagon (triangle-fan sampling).
Point2D sample_point_in_hexagon(const Hexagon& region, std::mt19937_64& rng);

}  // namespace relay
