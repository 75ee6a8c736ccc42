#include "relay/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace relay {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& what) {
    throw std::runtime_error(fmt::format("{}:{}: {}", source, line, what));
}

double to_double(const std::string& v, const std::string& source, int line) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        fail_at(source, line, fmt::format("expected a number, got '{}'", v));
    }
    if (pos != v.size()) fail_at(source, line, fmt::format("trailing characters in number '{}'", v));
    return d;
}

long long to_int(const std::string& v, const std::string& source, int line) {
    std::size_t pos = 0;
    long long i = 0;
    try {
        i = std::stoll(v, &pos);
    } catch (const std::exception&) {
        fail_at(source, line, fmt::format("expected an integer, got '{}'", v));
    }
    if (pos != v.size())
        fail_at(source, line, fmt::format("trailing characters in integer '{}'", v));
    return i;
}

bool to_bool(const std::string& v, const std::string& source, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail_at(source, line, fmt::format("expected true/false, got '{}'", v));
}

std::string fmt_num(double v) { return fmt::format("{:.17g}", v); }

const char* tail_policy_name(TailPolicy p) {
    return p == TailPolicy::Block ? "block" : "truncate_renormalize";
}

std::map<int, double> demand_block_map(const LossSystem& sys, const BlockingVector& blocking) {
    std::map<int, double> out;
    for (std::size_t c = 0; c < sys.classes.size(); ++c) {
        out[sys.classes[c].demand] = blocking.per_class[c];
    }
    return out;
}

double averaged_blocking(const std::map<int, double>& block,
                         const std::vector<std::pair<int, double>>& masses, int capacity) {
    double p = 0.0;
    for (const auto& [demand, mass] : masses) {
        auto it = block.find(demand);
        const double b = it != block.end() ? it->second : (demand > capacity ? 1.0 : 0.0);
        p += mass * b;
    }
    return std::min(1.0, p);
}

}  // namespace

void ScenarioConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::runtime_error(fmt::format("config: {} must be positive", name));
    };
    positive(inter_bs_distance, "geometry.inter_bs_distance");
    if (subcell_circumradius < 0.0) {
        throw std::runtime_error("config: geometry.subcell_circumradius must be >= 0");
    }
    positive(system_bandwidth, "radio.system_bandwidth");
    positive(subcarrier_bandwidth, "radio.subcarrier_bandwidth");
    positive(rate_bps, "radio.rate");
    positive(mu, "traffic.mu");
    if (k_bs < 1 || k_rs < 1) throw std::runtime_error("config: radio.k_bs/k_rs must be >= 1");
    if (!(beta > 2.0)) throw std::runtime_error("config: radio.beta must exceed 2");
    if (sigma_bs_ms < 0.0 || sigma_bs_rs < 0.0 || sigma_rs_ms < 0.0) {
        throw std::runtime_error("config: shadowing sigmas must be >= 0");
    }
    if (f < 0.0 || f > 1.0) throw std::runtime_error("config: traffic.f must lie in [0, 1]");
    if (lambda.empty()) throw std::runtime_error("config: traffic.lambda must not be empty");
    for (double l : lambda) {
        if (l < 0.0) throw std::runtime_error("config: traffic.lambda values must be >= 0");
    }
    if (!(class_epsilon > 0.0) || !(class_epsilon < 1.0)) {
        throw std::runtime_error("config: classes.epsilon must lie in (0, 1)");
    }
    if (max_classes < 1) throw std::runtime_error("config: classes.max_classes must be >= 1");
    if (class_count < 0) throw std::runtime_error("config: classes.count must be >= 0");
    if (class_offset < -1) throw std::runtime_error("config: classes.offset must be >= -1");
    if (quadrature_points < 3) {
        throw std::runtime_error("config: quadrature.points_per_triangle must be >= 3");
    }
    if (!(quadrature_rel_tol > 0.0)) {
        throw std::runtime_error("config: quadrature.rel_tol must be positive");
    }
    if (!(sim_horizon > sim_warmup) || sim_warmup < 0.0) {
        throw std::runtime_error("config: need sim.horizon > sim.warmup >= 0");
    }
    if (sim_replications < 1) throw std::runtime_error("config: sim.replications must be >= 1");
    if (mc_samples < 1) throw std::runtime_error("config: fit.mc_samples must be >= 1");

    // Subcarrier budget: the BS pool plus the six RS pools must fit in the
    // system bandwidth.
    const double total = static_cast<double>(k_bs) + 6.0 * static_cast<double>(k_rs);
    const double budget = system_bandwidth / subcarrier_bandwidth;
    if (total > budget + 1e-9) {
        throw std::runtime_error(fmt::format(
            "config: constraint 'subcarrier_budget' violated: k_bs + 6*k_rs = {} exceeds "
            "system_bandwidth/subcarrier_bandwidth = {}",
            total, budget));
    }
}

std::string ScenarioConfig::canonical() const {
    std::string lam;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (i) lam += ',';
        lam += fmt_num(lambda[i]);
    }
    std::string out;
    auto put = [&](const char* key, const std::string& value) {
        out += fmt::format("{} = {}\n", key, value);
    };
    put("classes.count", std::to_string(class_count));
    put("classes.epsilon", fmt_num(class_epsilon));
    put("classes.max_classes", std::to_string(max_classes));
    put("classes.offset", std::to_string(class_offset));
    put("classes.tail_policy", tail_policy_name(tail_policy));
    put("erlang.discount_mode",
        discount_mode == DiscountMode::Aggregate ? "aggregate" : "per_pair");
    put("erlang.per_rs_split", per_rs_split ? "true" : "false");
    put("fit.mc_samples", std::to_string(mc_samples));
    put("geometry.inter_bs_distance", fmt_num(inter_bs_distance));
    put("geometry.rs_interferers", rs_interferer_nearest ? "nearest" : "same_offset");
    put("geometry.subcell_circumradius", fmt_num(subcell_circumradius));
    put("quadrature.points_per_triangle", std::to_string(quadrature_points));
    put("quadrature.rel_tol", fmt_num(quadrature_rel_tol));
    put("radio.beta", fmt_num(beta));
    put("radio.k_bs", std::to_string(k_bs));
    put("radio.k_rs", std::to_string(k_rs));
    put("radio.rate", fmt_num(rate_bps));
    put("radio.sigma_bs_ms", fmt_num(sigma_bs_ms));
    put("radio.sigma_bs_rs", fmt_num(sigma_bs_rs));
    put("radio.sigma_rs_ms", fmt_num(sigma_rs_ms));
    put("radio.subcarrier_bandwidth", fmt_num(subcarrier_bandwidth));
    put("radio.system_bandwidth", fmt_num(system_bandwidth));
    put("sim.holding", holding_model == HoldingModel::Shared ? "shared" : "split");
    put("sim.horizon", fmt_num(sim_horizon));
    put("sim.mode", sim_mode == SimMode::Decoupled ? "decoupled" : "coupled");
    put("sim.replications", std::to_string(sim_replications));
    put("sim.rs_holds_on_bs_block", rs_holds_on_bs_block ? "true" : "false");
    put("sim.seed", std::to_string(seed));
    put("sim.warmup", fmt_num(sim_warmup));
    put("traffic.f", fmt_num(f));
    put("traffic.lambda", lam);
    put("traffic.mu", fmt_num(mu));
    return out;
}

std::string ScenarioConfig::hash() const {
    const std::string text = canonical();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

std::vector<double> parse_sweep(const std::string& text) {
    const std::string v = trim(text);
    if (v.empty()) throw std::runtime_error("sweep: empty value");
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        std::istringstream ss(v);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c)) {
            throw std::runtime_error(fmt::format("sweep: expected start:stop:step, got '{}'", v));
        }
        const double start = std::stod(trim(a));
        const double stop = std::stod(trim(b));
        const double step = std::stod(trim(c));
        if (!(step > 0.0) || stop < start) {
            throw std::runtime_error(fmt::format("sweep: bad range '{}'", v));
        }
        for (int i = 0;; ++i) {
            const double x = start + i * step;
            if (x > stop + 1e-12 * std::max(1.0, std::abs(stop))) break;
            out.push_back(x);
        }
        return out;
    }
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw std::runtime_error("sweep: empty list element");
        out.push_back(std::stod(item));
    }
    return out;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source_name) {
    ScenarioConfig cfg;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const auto hash_pos = raw.find('#');
        if (hash_pos != std::string::npos) raw.erase(hash_pos);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail_at(source_name, line_no, fmt::format("expected 'key = value', got '{}'", line));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            fail_at(source_name, line_no, "empty key or value");
        }

        if (key == "geometry.inter_bs_distance") {
            cfg.inter_bs_distance = to_double(value, source_name, line_no);
        } else if (key == "geometry.subcell_circumradius") {
            cfg.subcell_circumradius = to_double(value, source_name, line_no);
        } else if (key == "geometry.rs_interferers") {
            if (value == "same_offset") cfg.rs_interferer_nearest = false;
            else if (value == "nearest") cfg.rs_interferer_nearest = true;
            else fail_at(source_name, line_no,
                         fmt::format("geometry.rs_interferers: expected same_offset|nearest, "
                                     "got '{}'", value));
        } else if (key == "radio.system_bandwidth") {
            cfg.system_bandwidth = to_double(value, source_name, line_no);
        } else if (key == "radio.subcarrier_bandwidth") {
            cfg.subcarrier_bandwidth = to_double(value, source_name, line_no);
        } else if (key == "radio.k_bs") {
            cfg.k_bs = static_cast<int>(to_int(value, source_name, line_no));
        } else if (key == "radio.k_rs") {
            cfg.k_rs = static_cast<int>(to_int(value, source_name, line_no));
        } else if (key == "radio.beta") {
            cfg.beta = to_double(value, source_name, line_no);
        } else if (key == "radio.sigma_bs_ms") {
            cfg.sigma_bs_ms = to_double(value, source_name, line_no);
        } else if (key == "radio.sigma_bs_rs") {
            cfg.sigma_bs_rs = to_double(value, source_name, line_no);
        } else if (key == "radio.sigma_rs_ms") {
            cfg.sigma_rs_ms = to_double(value, source_name, line_no);
        } else if (key == "radio.rate") {
            cfg.rate_bps = to_double(value, source_name, line_no);
        } else if (key == "traffic.f") {
            cfg.f = to_double(value, source_name, line_no);
        } else if (key == "traffic.lambda") {
            try {
                cfg.lambda = parse_sweep(value);
            } catch (const std::exception& e) {
                fail_at(source_name, line_no, e.what());
            }
        } else if (key == "traffic.mu") {
            cfg.mu = to_double(value, source_name, line_no);
        } else if (key == "classes.epsilon") {
            cfg.class_epsilon = to_double(value, source_name, line_no);
        } else if (key == "classes.max_classes") {
            cfg.max_classes = static_cast<int>(to_int(value, source_name, line_no));
        } else if (key == "classes.offset") {
            cfg.class_offset = static_cast<int>(to_int(value, source_name, line_no));
        } else if (key == "classes.count") {
            cfg.class_count = static_cast<int>(to_int(value, source_name, line_no));
        } else if (key == "classes.tail_policy") {
            if (value == "block") cfg.tail_policy = TailPolicy::Block;
            else if (value == "truncate_renormalize")
                cfg.tail_policy = TailPolicy::TruncateRenormalize;
            else fail_at(source_name, line_no,
                         fmt::format("classes.tail_policy: expected block|truncate_renormalize, "
                                     "got '{}'", value));
        } else if (key == "erlang.per_rs_split") {
            cfg.per_rs_split = to_bool(value, source_name, line_no);
        } else if (key == "erlang.discount_mode") {
            if (value == "aggregate") cfg.discount_mode = DiscountMode::Aggregate;
            else if (value == "per_pair") cfg.discount_mode = DiscountMode::PerPair;
            else fail_at(source_name, line_no,
                         fmt::format("erlang.discount_mode: expected aggregate|per_pair, got '{}'",
                                     value));
        } else if (key == "quadrature.points_per_triangle") {
            cfg.quadrature_points = static_cast<int>(to_int(value, source_name, line_no));
        } else if (key == "quadrature.rel_tol") {
            cfg.quadrature_rel_tol = to_double(value, source_name, line_no);
        } else if (key == "sim.mode") {
            if (value == "decoupled") cfg.sim_mode = SimMode::Decoupled;
            else if (value == "coupled") cfg.sim_mode = SimMode::Coupled;
            else fail_at(source_name, line_no,
                         fmt::format("sim.mode: expected decoupled|coupled, got '{}'", value));
        } else if (key == "sim.horizon") {
            cfg.sim_horizon = to_double(value, source_name, line_no);
        } else if (key == "sim.warmup") {
            cfg.sim_warmup = to_double(value, source_name, line_no);
        } else if (key == "sim.replications") {
            cfg.sim_replications = static_cast<int>(to_int(value, source_name, line_no));
        } else if (key == "sim.holding") {
            if (value == "shared") cfg.holding_model = HoldingModel::Shared;
            else if (value == "split") cfg.holding_model = HoldingModel::Split;
            else fail_at(source_name, line_no,
                         fmt::format("sim.holding: expected shared|split, got '{}'", value));
        } else if (key == "sim.rs_holds_on_bs_block") {
            cfg.rs_holds_on_bs_block = to_bool(value, source_name, line_no);
        } else if (key == "sim.seed") {
            cfg.seed = static_cast<std::uint64_t>(to_int(value, source_name, line_no));
        } else if (key == "fit.mc_samples") {
            cfg.mc_samples = static_cast<std::uint64_t>(to_int(value, source_name, line_no));
        } else {
            fail_at(source_name, line_no, fmt::format("unknown key '{}'", key));
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open config file '{}'", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

LinkModels fit_models(const ScenarioConfig& config) {
    config.validate();
    LinkModels out;
    out.layout = build_layout(config.inter_bs_distance, config.subcell_circumradius);
    const CellLayout& L = out.layout;

    out.geom_bs_ms.kind = LinkKind::BsMs;
    out.geom_bs_ms.target_region = L.base_region;
    out.geom_bs_ms.serving_node = {0.0, 0.0};
    out.geom_bs_ms.interferer_positions = L.neighbor_bs_positions;
    out.geom_bs_ms.path_loss_exponent = config.beta;
    out.geom_bs_ms.shadowing = {config.sigma_bs_ms, config.sigma_bs_ms};

    out.geom_bs_rs.kind = LinkKind::BsRs;
    out.geom_bs_rs.fixed_target = L.rs_positions[0];
    out.geom_bs_rs.serving_node = {0.0, 0.0};
    out.geom_bs_rs.interferer_positions = L.neighbor_bs_positions;
    out.geom_bs_rs.path_loss_exponent = config.beta;
    out.geom_bs_rs.shadowing = {config.sigma_bs_rs, config.sigma_bs_rs};

    out.geom_rs_ms.kind = LinkKind::RsMs;
    out.geom_rs_ms.target_region = L.relay_regions[0];
    out.geom_rs_ms.serving_node = L.rs_positions[0];
    out.geom_rs_ms.path_loss_exponent = config.beta;
    out.geom_rs_ms.shadowing = {config.sigma_rs_ms, config.sigma_rs_ms};
    for (const auto& group : L.neighbor_rs_positions) {
        if (config.rs_interferer_nearest) {
            Point2D best = group[0];
            for (const Point2D& p : group) {
                if (distance(p, out.geom_rs_ms.serving_node) <
                    distance(best, out.geom_rs_ms.serving_node)) {
                    best = p;
                }
            }
            out.geom_rs_ms.interferer_positions.push_back(best);
        } else {
            out.geom_rs_ms.interferer_positions.push_back(group[0]);
        }
    }

    auto fit = [&](const LinkGeometry& geom, double sigma_serving, double sigma_interferer) {
        const ShadowRatioMoments cm =
            shadow_ratio_moments({sigma_serving, sigma_interferer});
        const SpatialMoments sm = spatial_moments_adaptive(geom, config.quadrature_points,
                                                           config.quadrature_rel_tol);
        const auto [m1, m2] = isr_moments(sm, cm);
        return lognormal_fit(m1, m2);
    };
    out.bs_ms = fit(out.geom_bs_ms, config.sigma_bs_ms, config.sigma_bs_ms);
    out.bs_rs = fit(out.geom_bs_rs, config.sigma_bs_rs, config.sigma_bs_rs);
    out.rs_ms = fit(out.geom_rs_ms, config.sigma_rs_ms, config.sigma_rs_ms);
    return out;
}

LinkClasses build_classes(const ScenarioConfig& config, const LinkModels& models) {
    const RateSpec rate{config.rate_bps, config.subcarrier_bandwidth};
    auto build = [&](const IsrModel& model, LinkKind link) {
        const auto [lo, hi] = detect_class_range(model, rate, config.class_epsilon);
        const int offset = config.class_offset >= 0 ? config.class_offset : lo - 1;
        int count = config.class_count > 0 ? config.class_count
                                           : std::max(1, hi - offset);
        count = std::min(count, config.max_classes);
        ClassDistribution dist = class_distribution(model, rate, {offset, count}, link);
        if (config.tail_policy == TailPolicy::TruncateRenormalize) {
            dist = truncate_renormalize(dist);
        }
        return dist;
    };
    LinkClasses out;
    out.bs_ms = build(models.bs_ms, LinkKind::BsMs);
    out.bs_rs = build(models.bs_rs, LinkKind::BsRs);
    out.rs_ms = build(models.rs_ms, LinkKind::RsMs);
    out.joint = hopped_joint_distribution(out.bs_rs, out.rs_ms);
    return out;
}

BlockingReport analyze_point(const ScenarioConfig& config, const LinkClasses& classes,
                             double lambda) {
    TrafficSpec traffic{lambda, config.mu, config.f, config.per_rs_split};
    traffic.validate();

    const LossSystem rsms = rsms_system(traffic, classes.rs_ms, config.k_rs);
    std::vector<double> rsms_membership;
    for (const auto& [demand, mass] : classes.rs_ms.conditional_masses()) {
        rsms_membership.push_back(mass);
    }
    const BlockingVector rsms_blocking = per_class_blocking_recursion(rsms, rsms_membership);

    const LossSystem bs =
        bs_system(traffic, classes.bs_ms, classes.bs_rs, rsms, rsms_blocking,
                  classes.rs_ms.tail_mass, config.k_bs, config.discount_mode, &classes.joint);
    const BlockingVector bs_blocking =
        per_class_blocking_recursion(bs, std::vector<double>(bs.classes.size(), 0.0));
    const auto block = demand_block_map(bs, bs_blocking);

    const double p_b_d_cond =
        averaged_blocking(block, classes.bs_ms.conditional_masses(), config.k_bs);
    const double p_b_hbr_cond =
        averaged_blocking(block, classes.bs_rs.conditional_masses(), config.k_bs);
    const double p_b_hrm_cond = std::min(1.0, rsms_blocking.average);

    BlockingReport report =
        compose_report(traffic, p_b_d_cond, p_b_hbr_cond, p_b_hrm_cond, classes.bs_ms.tail_mass,
                       classes.bs_rs.tail_mass, classes.rs_ms.tail_mass);
    report.scenario_hash = config.hash();
    return report;
}

SimScenario make_sim_scenario(const ScenarioConfig& config, const LinkClasses& classes,
                              double lambda) {
    SimScenario s;
    s.lambda = lambda;
    s.mu = config.mu;
    s.f = config.f;
    s.k_bs = config.k_bs;
    s.k_rs = config.k_rs;
    s.rs_count = 6;
    s.direct_pmf = classes.bs_ms.demand_masses();
    s.direct_tail = classes.bs_ms.tail_mass;
    s.hopped_br_tail = classes.bs_rs.tail_mass;
    s.hopped_rm_tail = classes.rs_ms.tail_mass;
    const double pair_scale = (1.0 - s.hopped_br_tail) * (1.0 - s.hopped_rm_tail);
    for (const auto& [pair, p] : classes.joint.pairs) {
        s.hopped_pairs.emplace_back(pair.first, pair.second, p * pair_scale);
    }
    s.validate();
    return s;
}

SimConfig make_sim_config(const ScenarioConfig& config) {
    SimConfig sim;
    sim.mode = config.sim_mode;
    sim.horizon = config.sim_horizon;
    sim.warmup = config.sim_warmup;
    sim.replications = config.sim_replications;
    sim.base_seed = config.seed;
    sim.holding = config.holding_model;
    sim.rs_holds_on_bs_block = config.rs_holds_on_bs_block;
    sim.validate();
    return sim;
}

std::string resolve_out_dir(const std::string& cli_value) {
    if (!cli_value.empty()) return cli_value;
    if (const char* env = std::getenv("RELAYCAP_OUT"); env != nullptr && env[0] != '\0') {
        return env;
    }
    return ".";
}

void write_text_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
        out << content;
        if (!out.good()) throw std::runtime_error(fmt::format("write failed for '{}'", path));
    }
    fs::rename(tmp, target);
}

namespace {

void append_class_rows(std::string& out, const ClassDistribution& dist) {
    const char* link = link_name(dist.link);
    if (dist.head_mass > 0.0) {
        out += fmt::format("{},head,0,{},{:.12e}\n", link, dist.scheme.min_demand() - 1,
                           dist.head_mass);
    }
    for (int r = 1; r <= dist.scheme.class_count; ++r) {
        out += fmt::format("{},class,{},{},{:.12e}\n", link, r, dist.scheme.demand(r),
                           dist.probabilities[r - 1]);
    }
    if (dist.tail_mass > 0.0) {
        out += fmt::format("{},tail,{},{},{:.12e}\n", link, dist.scheme.class_count + 1,
                           dist.scheme.max_demand() + 1, dist.tail_mass);
    }
}

}  // namespace

std::string class_distribution_csv(const LinkClasses& classes) {
    std::string out = "link,kind,class,demand,probability\n";
    append_class_rows(out, classes.bs_ms);
    append_class_rows(out, classes.bs_rs);
    append_class_rows(out, classes.rs_ms);
    return out;
}

std::string sweep_csv(const std::vector<std::pair<double, BlockingReport>>& points) {
    std::string out =
        "lambda,p_b_d,p_b_hbr,p_b_hrm,p_b_h,p_b_overall,"
        "tail_block_bs_ms,tail_block_bs_rs,tail_block_rs_ms\n";
    for (const auto& [lambda, r] : points) {
        out += fmt::format(
            "{:.12g},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n", lambda,
            r.p_b_d, r.p_b_hbr, r.p_b_hrm, r.p_b_h, r.p_b_overall, r.tail_block_bs_ms,
            r.tail_block_bs_rs, r.tail_block_rs_ms);
    }
    return out;
}

std::string report_json(const ScenarioConfig& config, double lambda,
                        const BlockingReport& report) {
    nlohmann::ordered_json j;
    j["lambda"] = lambda;
    j["p_b_d"] = report.p_b_d;
    j["p_b_hbr"] = report.p_b_hbr;
    j["p_b_hrm"] = report.p_b_hrm;
    j["p_b_h"] = report.p_b_h;
    j["p_b_overall"] = report.p_b_overall;
    j["tail_block_bs_ms"] = report.tail_block_bs_ms;
    j["tail_block_bs_rs"] = report.tail_block_bs_rs;
    j["tail_block_rs_ms"] = report.tail_block_rs_ms;
    j["scenario_hash"] = report.scenario_hash;
    j["config_canonical"] = config.canonical();
    return j.dump(2) + "\n";
}

namespace {

void append_stream_row(std::string& out, int rep, const char* stream, const StreamCounts& c) {
    out += fmt::format("{},{},{},{},{:.12e}\n", rep, stream, c.offered, c.blocked, c.fraction());
}

struct StreamRef {
    const char* name;
    StreamEstimate BlockingEstimate::*est;
    double BlockingReport::*ana;
};

constexpr StreamRef kStreams[] = {
    {"direct", &BlockingEstimate::direct, &BlockingReport::p_b_d},
    {"hopped_bs", &BlockingEstimate::hopped_bs, &BlockingReport::p_b_hbr},
    {"hopped_rs", &BlockingEstimate::hopped_rs, &BlockingReport::p_b_hrm},
    {"hopped", &BlockingEstimate::hopped, &BlockingReport::p_b_h},
    {"overall", &BlockingEstimate::overall, &BlockingReport::p_b_overall},
};

}  // namespace

std::string replication_csv(const BlockingEstimate& estimate) {
    std::string out = "replication,stream,offered,blocked,fraction\n";
    for (std::size_t r = 0; r < estimate.replications.size(); ++r) {
        const RepResult& rep = estimate.replications[r];
        const int id = static_cast<int>(r);
        append_stream_row(out, id, "direct", rep.direct);
        append_stream_row(out, id, "hopped_bs", rep.hopped_bs);
        append_stream_row(out, id, "hopped_rs", rep.hopped_rs);
        append_stream_row(out, id, "hopped", rep.hopped);
        append_stream_row(out, id, "overall", rep.overall);
    }
    return out;
}

std::string comparison_csv(const std::vector<double>& lambdas,
                           const std::vector<BlockingReport>& analytical,
                           const std::vector<BlockingEstimate>& simulated) {
    if (lambdas.size() != analytical.size() || lambdas.size() != simulated.size()) {
        throw std::invalid_argument("comparison_csv: mismatched point counts");
    }
    std::string out =
        "lambda,stream,analytical,simulated,ci_halfwidth,offered,blocked,empty_sample\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        for (const StreamRef& s : kStreams) {
            const StreamEstimate& est = simulated[i].*(s.est);
            out += fmt::format("{:.12g},{},{:.12e},{:.12e},{:.12e},{},{},{}\n", lambdas[i], s.name,
                               analytical[i].*(s.ana), est.fraction, est.ci_halfwidth, est.offered,
                               est.blocked, est.empty_sample ? 1 : 0);
        }
    }
    return out;
}

std::string fit_csv(const std::vector<FitRow>& rows) {
    std::string out = "link,m1,m2,mu_i,sigma_i,ks_distance_vs_exact_sampling\n";
    for (const FitRow& r : rows) {
        out += fmt::format("{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n", link_name(r.link), r.m1,
                           r.m2, r.mu, r.sigma, r.ks);
    }
    return out;
}

}  // namespace relay
