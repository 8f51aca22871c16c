// SPDX-License-Identifier: Apache-2.0
#include "spwt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "spwt/rng.hpp"

namespace spwt {

ErrorModel ErrorModel::from_bounds(double dtheta_max, double dr_max) {
    ErrorModel m;
    m.dtheta_max = dtheta_max;
    m.dr_max = dr_max;
    m.sigma_theta = dtheta_max / 3.0;
    m.sigma_r = dr_max / 3.0;
    return m;
}

void ErrorModel::validate() const {
    if (dtheta_max < 0.0 || dr_max < 0.0)
        throw std::invalid_argument("error bounds must be >= 0");
    if (sigma_theta < 0.0 || sigma_r < 0.0)
        throw std::invalid_argument("error sigmas must be >= 0");
}

namespace {

double truncated_gaussian(std::mt19937_64& engine, double sigma, double bound) {
    if (sigma <= 0.0 || bound <= 0.0) return 0.0;
    std::normal_distribution<double> gauss(0.0, sigma);
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const double x = gauss(engine);
        if (std::abs(x) <= bound) return x;
    }
    throw std::runtime_error("truncated-Gaussian rejection failed to terminate");
}

}  // namespace

PositionError draw_error(const ErrorModel& model, std::uint64_t seed, std::uint64_t trial) {
    model.validate();
    auto engine = make_engine(mix_seed(seed, 0xe4404ULL, trial));
    PositionError e;
    e.dtheta = truncated_gaussian(engine, model.sigma_theta, model.dtheta_max);
    e.dr = truncated_gaussian(engine, model.sigma_r, model.dr_max);
    return e;
}

double secrecy_rate(const ScenarioConfig& cfg, const BeamformerPair& pair,
                    const std::vector<GroundPosition>& users,
                    const std::vector<GroundPosition>& eaves,
                    const SubcarrierAllocation& alloc) {
    if (users.empty()) throw std::invalid_argument("secrecy_rate needs at least one user");
    double user_capacity = std::numeric_limits<double>::infinity();
    for (const GroundPosition& u : users) {
        const double sinr = received_sinr(cfg, pair.v, pair.w, steering_vector(cfg, alloc, u));
        user_capacity = std::min(user_capacity, std::log2(1.0 + sinr));
    }
    double eaves_capacity = 0.0;
    for (const GroundPosition& e : eaves) {
        const double sinr = received_sinr(cfg, pair.v, pair.w, steering_vector(cfg, alloc, e));
        eaves_capacity = std::max(eaves_capacity, std::log2(1.0 + sinr));
    }
    return std::max(0.0, user_capacity - eaves_capacity);
}

SinrField sinr_surface(const ScenarioConfig& cfg, const BeamformerPair& pair,
                       const SubcarrierAllocation& alloc, const RegionRect& window,
                       const QuadratureSpec& grid_steps) {
    const QuadratureGrid grid = region_grid(window, grid_steps);
    SinrField field;
    field.nodes = grid.nodes;
    field.n_range = static_cast<std::size_t>(std::max(1L, std::lround(window.range_span() / grid_steps.range_step)));
    field.n_angle = grid.nodes.size() / field.n_range;
    field.sinr.resize(grid.nodes.size());

    const Eigen::MatrixXcd h = steering_matrix(cfg, alloc, grid.nodes);
    const Eigen::VectorXd signal = (h.adjoint() * pair.v).cwiseAbs2();
    const Eigen::VectorXd leak = (h.adjoint() * pair.w).cwiseAbs2();
    const double s1 = cfg.alpha1 * cfg.total_power;
    const double s2 = cfg.alpha2 * cfg.total_power;
    for (std::size_t i = 0; i < field.sinr.size(); ++i)
        field.sinr[i] = s1 * signal(static_cast<Eigen::Index>(i)) /
                        (s2 * leak(static_cast<Eigen::Index>(i)) + cfg.noise_power);
    return field;
}

double mean_sinr(const SinrField& field, const std::vector<RegionRect>& regions, bool inside) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < field.nodes.size(); ++i) {
        const bool in_any = std::any_of(regions.begin(), regions.end(),
                                        [&](const RegionRect& r) { return r.contains(field.nodes[i]); });
        if (in_any == inside) {
            sum += field.sinr[i];
            ++count;
        }
    }
    if (count == 0) throw std::invalid_argument("mean_sinr: no field nodes matched");
    return sum / static_cast<double>(count);
}

GroundPosition peak_position(const SinrField& field) {
    if (field.nodes.empty()) throw std::invalid_argument("peak_position: empty field");
    const std::size_t arg = static_cast<std::size_t>(
        std::max_element(field.sinr.begin(), field.sinr.end()) - field.sinr.begin());
    return field.nodes[arg];
}

double worst_eavesdropper_sinr(const ScenarioConfig& cfg, const BeamformerPair& pair,
                               const Eigen::MatrixXcd& eaves_steering) {
    if (eaves_steering.cols() == 0) return 0.0;
    const Eigen::VectorXd signal = (eaves_steering.adjoint() * pair.v).cwiseAbs2();
    const Eigen::VectorXd leak = (eaves_steering.adjoint() * pair.w).cwiseAbs2();
    const double s1 = cfg.alpha1 * cfg.total_power;
    const double s2 = cfg.alpha2 * cfg.total_power;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < signal.size(); ++i)
        worst = std::max(worst, s1 * signal(i) / (s2 * leak(i) + cfg.noise_power));
    return worst;
}

namespace {

void run_trial(const ScenarioConfig& base, const RegionRect& window,
               const std::vector<GroundPosition>& estimates, const SchemeSpec& scheme,
               const std::vector<double>& snr_db_list, const ErrorModel& error_model,
               const QuadratureSettings& quad, const SolverSettings& settings,
               std::uint64_t seed, int trial, int n_trials,
               std::vector<ResultRecord>& records) {
    const std::size_t n_users = estimates.size();
    const SubcarrierAllocation alloc =
        draw_allocation(base, mix_seed(seed, 0x7a110cULL, static_cast<std::uint64_t>(trial)));

    std::vector<GroundPosition> true_positions(n_users);
    for (std::size_t m = 0; m < n_users; ++m) {
        const PositionError err = draw_error(
            error_model, seed, static_cast<std::uint64_t>(trial) * n_users + m);
        true_positions[m] = clip_position(
            {estimates[m].angle + err.dtheta, estimates[m].range + err.dr}, window);
    }

    // evaluation-side wiretap grid: window minus the users' error rectangles
    std::vector<RegionRect> regions;
    regions.reserve(n_users);
    for (const GroundPosition& est : estimates)
        regions.push_back(desired_region(est, error_model.dtheta_max, error_model.dr_max, window));
    const QuadratureGrid egrid = wiretap_grid(window, regions, quad.window);
    const Eigen::MatrixXcd eaves_steering = steering_matrix(base, alloc, egrid.nodes);

    std::vector<Eigen::VectorXcd> true_steering(n_users);
    for (std::size_t m = 0; m < n_users; ++m)
        true_steering[m] = steering_vector(base, alloc, true_positions[m]);

    for (std::size_t si = 0; si < snr_db_list.size(); ++si) {
        ResultRecord& rec = records[si * static_cast<std::size_t>(n_trials) +
                                    static_cast<std::size_t>(trial)];
        rec.trial = trial;
        rec.snr_db = snr_db_list[si];
        rec.scheme = scheme;
        rec.estimates = estimates;
        rec.true_positions = true_positions;
        try {
            ScenarioConfig cfg = base;
            cfg.noise_power = noise_power_for_snr(cfg.total_power, snr_db_list[si]);
            const BeamformerPair pair = design_beamformers(
                cfg, scheme, estimates, alloc, error_model.dtheta_max, error_model.dr_max,
                window, quad, settings,
                mix_seed(seed, 0xde5173ULL, static_cast<std::uint64_t>(trial) * 1024 + si));

            rec.user_sinr.resize(n_users);
            double user_capacity = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < n_users; ++m) {
                rec.user_sinr[m] = received_sinr(cfg, pair.v, pair.w, true_steering[m]);
                user_capacity = std::min(user_capacity, std::log2(1.0 + rec.user_sinr[m]));
            }
            rec.worst_eaves_sinr = worst_eavesdropper_sinr(cfg, pair, eaves_steering);
            rec.secrecy = std::max(0.0, user_capacity - std::log2(1.0 + rec.worst_eaves_sinr));
            rec.ok = true;
        } catch (const std::exception& ex) {
            rec.ok = false;
            rec.message = ex.what();
        }
    }
}

}  // namespace

MonteCarloResult monte_carlo_sr(const ScenarioConfig& base, const RegionRect& window,
                                const std::vector<GroundPosition>& estimates,
                                const SchemeSpec& scheme,
                                const std::vector<double>& snr_db_list, int n_trials,
                                const ErrorModel& error_model, const QuadratureSettings& quad,
                                const SolverSettings& settings, std::uint64_t seed,
                                int n_threads) {
    base.validate();
    error_model.validate();
    scheme.validate();
    if (n_trials < 1) throw std::invalid_argument("monte_carlo_sr needs n_trials >= 1");
    if (snr_db_list.empty()) throw std::invalid_argument("monte_carlo_sr needs at least one SNR");
    if (estimates.empty()) throw std::invalid_argument("monte_carlo_sr needs at least one user");

    MonteCarloResult result;
    result.records.resize(snr_db_list.size() * static_cast<std::size_t>(n_trials));

    auto worker = [&](int first, int stride) {
        for (int t = first; t < n_trials; t += stride)
            run_trial(base, window, estimates, scheme, snr_db_list, error_model, quad,
                      settings, seed, t, n_trials, result.records);
    };

    const int threads = std::max(1, n_threads);
    if (threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> crew;
        crew.reserve(static_cast<std::size_t>(threads));
        for (int k = 0; k < threads; ++k) crew.emplace_back(worker, k, threads);
        for (std::thread& th : crew) th.join();
    }

    // fixed-order reduction over trials, one sweep point per SNR
    for (std::size_t si = 0; si < snr_db_list.size(); ++si) {
        SweepPoint point;
        point.snr_db = snr_db_list[si];
        double sum = 0.0;
        for (int t = 0; t < n_trials; ++t) {
            const ResultRecord& rec = result.records[si * static_cast<std::size_t>(n_trials) +
                                                     static_cast<std::size_t>(t)];
            if (!rec.ok) continue;
            sum += rec.secrecy;
            ++point.n_ok;
        }
        if (point.n_ok == 0)
            throw std::runtime_error("monte_carlo_sr: every trial failed at one SNR");
        point.mean_sr = sum / point.n_ok;
        double ssq = 0.0;
        for (int t = 0; t < n_trials; ++t) {
            const ResultRecord& rec = result.records[si * static_cast<std::size_t>(n_trials) +
                                                     static_cast<std::size_t>(t)];
            if (!rec.ok) continue;
            ssq += (rec.secrecy - point.mean_sr) * (rec.secrecy - point.mean_sr);
        }
        point.std_sr = point.n_ok > 1 ? std::sqrt(ssq / (point.n_ok - 1)) : 0.0;
        result.per_snr.push_back(point);
    }
    return result;
}

OpCountReport op_count_report(const ScenarioConfig& cfg, const RegionRect& window,
                              int n_users, const SchemeSpec& scheme,
                              const QuadratureSpec& window_quad) {
    cfg.validate();
    scheme.validate();
    if (n_users < 1) throw std::invalid_argument("op_count_report needs n_users >= 1");
    OpCountReport report;
    const std::uint64_t ops_per_node = 2ULL * static_cast<std::uint64_t>(cfg.n_antennas) - 1ULL;
    if (scheme.kind == Scheme::Regional) {
        window_quad.validate();
        const auto n_angle = static_cast<std::uint64_t>(
            std::max(1L, std::lround(window.angle_span() / window_quad.angle_step)));
        const auto n_range = static_cast<std::uint64_t>(
            std::max(1L, std::lround(window.range_span() / window_quad.range_step)));
        report.quadrature_nodes = n_angle * n_range;
        report.quad_dependent = true;
    } else {
        const int per_user = scheme.kind == Scheme::NonRobust ? 1 : scheme.n_points;
        report.quadrature_nodes = static_cast<std::uint64_t>(n_users) *
                                  static_cast<std::uint64_t>(per_user);
        report.quad_dependent = false;
    }
    report.covariance_ops = report.quadrature_nodes * ops_per_node;
    return report;
}

}  // namespace spwt
