// Timing comparison of the OpenMP kernels against their serial reference
// implementations, with an agreement check (the parallel paths are designed
// to be bit-identical to the serial ones).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "relay/interference.hpp"
#include "relay/scenario.hpp"
#include "relay/simulator.hpp"

namespace {

double seconds(std::function<void()> fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    fmt::print("{:<24} serial {:>8.3f} s   parallel {:>8.3f} s   speedup {:>5.2f}x   {}\n", name,
               serial_s, parallel_s, serial_s / parallel_s,
               identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP kernel benchmark"};
    std::uint64_t mc_samples = 2'000'000;
    int quad_points = 1 << 14;
    int replications = 8;
    int threads = 0;
    app.add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
    app.add_option("--quad-points", quad_points, "Quadrature points per triangle");
    app.add_option("--replications", replications, "Simulation replications");
    app.add_option("--threads", threads, "OpenMP thread count");
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    relay::ScenarioConfig cfg;
    const relay::LinkModels models = relay::fit_models(cfg);
    fmt::print("threads: {}\n", omp_get_max_threads());

    {
        const relay::QuadratureRule quad =
            relay::make_quadrature(*models.geom_bs_ms.target_region, quad_points);
        relay::SpatialMoments a, b;
        const double ts = seconds([&] { a = relay::spatial_moments_serial(models.geom_bs_ms, quad); });
        const double tp = seconds([&] { b = relay::spatial_moments(models.geom_bs_ms, quad); });
        const bool same = a.mean_sum_b == b.mean_sum_b && a.mean_sum_b_sq == b.mean_sum_b_sq &&
                          a.mean_sum_bsq == b.mean_sum_bsq;
        report("spatial_moments", ts, tp, same);
    }
    {
        relay::McMoments a, b;
        const double ts =
            seconds([&] { a = relay::mc_isr_moments_serial(models.geom_bs_ms, mc_samples, 7); });
        const double tp =
            seconds([&] { b = relay::mc_isr_moments(models.geom_bs_ms, mc_samples, 7); });
        const bool same = a.m1 == b.m1 && a.m2 == b.m2;
        report("mc_isr_moments", ts, tp, same);
    }
    {
        const relay::LinkClasses classes = relay::build_classes(cfg, models);
        const relay::SimScenario scenario = relay::make_sim_scenario(cfg, classes, 40.0);
        relay::SimConfig sim = relay::make_sim_config(cfg);
        sim.replications = replications;
        relay::BlockingEstimate a, b;
        const double ts = seconds([&] { a = relay::run_serial(scenario, sim); });
        const double tp = seconds([&] { b = relay::run(scenario, sim); });
        const bool same = a.overall.fraction == b.overall.fraction &&
                          a.overall.offered == b.overall.offered &&
                          a.overall.blocked == b.overall.blocked;
        report("simulator_run", ts, tp, same);
    }
    return 0;
}
