#pragma once

// Scenario driver shared by the CLI and the test suites: prepares both
// detection branches, evolves them with one of three engines and collects
// every observable of one time point into a TimeSeriesRow.

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include "cavitycat/bath.hpp"
#include "cavitycat/coherent.hpp"
#include "cavitycat/fock.hpp"
#include "cavitycat/master.hpp"
#include "cavitycat/protocol.hpp"

namespace cavitycat {

enum class EngineKind { Microscopic, Master, Fock };

struct FockSettings {
    int n_max = 0;
    double dt = 0.0;
};

struct Scenario {
    ProtocolParams params;
    EngineKind engine = EngineKind::Master;
    std::optional<BathSpec> bath;          // microscopic
    std::optional<MasterParams> master;    // master, fock
    std::optional<FockSettings> fock;      // fock

    // Rate defining t_c = 1/gamma for the selected engine.
    double gamma() const {
        if (engine == EngineKind::Microscopic) return bath.value().target_gamma();
        return master.value().gamma;
    }
};

struct TimeSeriesRow {
    double t = 0.0;  // units of t_c
    double gamma_a = 1.0;
    double gamma_b_abs = 1.0;
    double gamma_b_arg = 0.0;
    double p_ee = 0.0, p_eg = 0.0, p_ge = 0.0, p_gg = 0.0, eta = 0.0;
    double lam_e_plus = 0.0, lam_e_minus = 0.0, lam_g_plus = 0.0, lam_g_minus = 0.0;
    double purity_e = 1.0, purity_g = 1.0, defect_e = 0.0, defect_g = 0.0;
    double n_field = 0.0, n_bath = 0.0;
    bool recurrence_warning = false;
};

struct PreparedPair {
    FieldBathSuperposition e;
    FieldBathSuperposition g;
};

inline PreparedPair prepare_pair(const ProtocolParams& p) {
    return {prepare(p, Outcome::E), prepare(p, Outcome::G)};
}

namespace detail {

struct Overlaps {
    double gamma_a = 1.0;
    Complex gamma_b{1.0, 0.0};
};

// Gamma_a / Gamma_b of the E branch, falling back to G when E has collapsed
// to a single coherent product (no cat, both factors one).
inline Overlaps branch_overlaps(const FieldBathSuperposition& e, const FieldBathSuperposition& g) {
    const FieldBathSuperposition* s = e.size() == 2 ? &e : (g.size() == 2 ? &g : nullptr);
    if (s == nullptr) return {};
    return {gamma_a(*s), gamma_b(*s)};
}

inline void fill_density_columns(TimeSeriesRow& row, const ReducedDensity& rho_e, const ReducedDensity& rho_g,
                                 const ProtocolParams& p) {
    const CorrelationRecord c = conditional_probabilities(rho_e, rho_g, p);
    row.p_ee = c.p_ee;
    row.p_eg = c.p_eg;
    row.p_ge = c.p_ge;
    row.p_gg = c.p_gg;
    row.eta = c.eta;
    const LabelledSpectrum se = labelled_eigenvalues(rho_e, p);
    const LabelledSpectrum sg = labelled_eigenvalues(rho_g, p);
    row.lam_e_plus = se.pair.plus;
    row.lam_e_minus = se.pair.minus;
    row.lam_g_plus = sg.pair.plus;
    row.lam_g_minus = sg.pair.minus;
    row.purity_e = purity(rho_e);
    row.purity_g = purity(rho_g);
    row.defect_e = 1.0 - row.purity_e;
    row.defect_g = 1.0 - row.purity_g;
}

}  // namespace detail

inline TimeSeriesRow microscopic_row(const PreparedPair& prep, const ProtocolParams& p, const BathSpec& bath,
                                     double t_over_tc) {
    const ResponseFunctions resp = propagate(bath, t_over_tc / bath.target_gamma());
    const FieldBathSuperposition se = evolve(prep.e, resp);
    const FieldBathSuperposition sg = evolve(prep.g, resp);
    const ReducedDensity rho_e = reduce(se);
    const ReducedDensity rho_g = reduce(sg);
    TimeSeriesRow row;
    row.t = t_over_tc;
    const auto ov = detail::branch_overlaps(se, sg);
    row.gamma_a = ov.gamma_a;
    row.gamma_b_abs = std::abs(ov.gamma_b);
    row.gamma_b_arg = std::arg(ov.gamma_b);
    detail::fill_density_columns(row, rho_e, rho_g, p);
    row.n_field = mean_number(rho_e);
    row.n_bath = bath_number(se);
    row.recurrence_warning = resp.recurrence_warning;
    return row;
}

inline TimeSeriesRow master_row(const PreparedPair& prep, const ProtocolParams& p, const MasterParams& m,
                                double t_over_tc) {
    const double t = t_over_tc / m.gamma;
    const ReducedDensity rho_e = me_reduce(prep.e, m, t);
    const ReducedDensity rho_g = me_reduce(prep.g, m, t);
    TimeSeriesRow row;
    row.t = t_over_tc;
    const FieldBathSuperposition* s = prep.e.size() == 2 ? &prep.e : (prep.g.size() == 2 ? &prep.g : nullptr);
    if (s != nullptr) {
        const auto& b = s->branches();
        row.gamma_a = std::abs(overlap(me_amplitude(b[1].field, m, t), me_amplitude(b[0].field, m, t)));
        const Complex gb = me_dyad_factor(b[0].field, b[1].field, m, t);
        row.gamma_b_abs = std::abs(gb);
        row.gamma_b_arg = std::arg(gb);
    }
    detail::fill_density_columns(row, rho_e, rho_g, p);
    row.n_field = mean_number(rho_e);
    row.n_bath = mean_number(me_reduce(prep.e, m, 0.0)) - row.n_field;
    return row;
}

// Number-basis images of the prepared states.
inline fock::FockVector fock_prepared(const ProtocolParams& p, Outcome o, int n_max) {
    const fock::FockVector coh = fock::coherent_to_fock(p.alpha0, n_max);
    return fock::normalized(fock::apply(reduced_op(p, o), coh));
}

namespace detail {

inline EigenPair fock_labelled_pair(const fock::FockDensity& rho, const PhaseOpSum& pe) {
    const fock::FockSpectrum sp = fock::fock_spectrum(rho);
    const double p0 = fock::fock_vector_measure(pe, sp.eigenvectors[0]);
    const double p1 = fock::fock_vector_measure(pe, sp.eigenvectors[1]);
    auto clean = [](double v) {
        if (v < -1e-8) throw PositivityViolation("fock density eigenvalue below -1e-8");
        return std::max(v, 0.0);
    };
    const double v0 = clean(sp.eigenvalues[0]), v1 = clean(sp.eigenvalues[1]);
    return p0 <= p1 ? EigenPair{v0, v1} : EigenPair{v1, v0};
}

inline double fock_probability(const PhaseOpSum& op, const fock::FockDensity& rho) {
    return detail::as_probability(fock::fock_measure(op, rho), "fock probability");
}

}  // namespace detail

// Row from number-basis densities (Lindblad integrator or Hamiltonian
// oracle). Gamma columns are not observable from a Fock density, so callers
// fill them from the corresponding closed forms.
inline TimeSeriesRow fock_row(const fock::FockDensity& rho_e, const fock::FockDensity& rho_g, const ProtocolParams& p,
                              double t_over_tc) {
    const PhaseOpSum pe = measurement_product(p, Outcome::E);
    const PhaseOpSum pg = measurement_product(p, Outcome::G);
    TimeSeriesRow row;
    row.t = t_over_tc;
    row.p_ee = detail::fock_probability(pe, rho_e);
    row.p_eg = detail::fock_probability(pg, rho_e);
    row.p_ge = detail::fock_probability(pe, rho_g);
    row.p_gg = detail::fock_probability(pg, rho_g);
    row.eta = row.p_ee - row.p_ge;
    const EigenPair le = detail::fock_labelled_pair(rho_e, pe);
    const EigenPair lg = detail::fock_labelled_pair(rho_g, pe);
    row.lam_e_plus = le.plus;
    row.lam_e_minus = le.minus;
    row.lam_g_plus = lg.plus;
    row.lam_g_minus = lg.minus;
    row.purity_e = fock::fock_purity(rho_e);
    row.purity_g = fock::fock_purity(rho_g);
    row.defect_e = 1.0 - row.purity_e;
    row.defect_g = 1.0 - row.purity_g;
    row.n_field = fock::mean_number(rho_e);
    return row;
}

// Evaluates f(i) for i in [0, n) on up to hardware_concurrency threads.
// Results land at their index, so output order never depends on scheduling.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
    std::vector<T> out(n);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    jobs.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
        }));
    }
    for (auto& j : jobs) j.get();  // rethrows the first worker failure
    return out;
}

inline std::vector<double> time_grid(double t_max_over_tc, int points) {
    if (points < 2 || !(t_max_over_tc > 0.0)) throw std::invalid_argument("time_grid: need points >= 2, t_max > 0");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) t[k] = t_max_over_tc * k / (points - 1);
    return t;
}

// Full time series for one scenario; times in units of t_c, ascending.
inline std::vector<TimeSeriesRow> run_series(const Scenario& sc, const std::vector<double>& times) {
    const PreparedPair prep = prepare_pair(sc.params);
    switch (sc.engine) {
        case EngineKind::Microscopic:
            return parallel_map<TimeSeriesRow>(times.size(), [&](std::size_t i) {
                return microscopic_row(prep, sc.params, sc.bath.value(), times[i]);
            });
        case EngineKind::Master:
            return parallel_map<TimeSeriesRow>(times.size(), [&](std::size_t i) {
                return master_row(prep, sc.params, sc.master.value(), times[i]);
            });
        case EngineKind::Fock: {
            // Sequential: each point continues the integration from the previous one.
            const MasterParams& m = sc.master.value();
            const FockSettings& fs = sc.fock.value();
            fock::FockDensity rho_e = fock::projector(fock_prepared(sc.params, Outcome::E, fs.n_max));
            fock::FockDensity rho_g = fock::projector(fock_prepared(sc.params, Outcome::G, fs.n_max));
            const double n0 = fock::mean_number(rho_e);
            std::vector<TimeSeriesRow> rows;
            double last = 0.0;
            for (double t : times) {
                const double span = (t - last) / m.gamma;
                if (span > 0.0) {
                    rho_e = fock::lindblad_evolve(rho_e, m.gamma, span, fs.dt);
                    rho_g = fock::lindblad_evolve(rho_g, m.gamma, span, fs.dt);
                }
                last = t;
                TimeSeriesRow row = fock_row(rho_e, rho_g, sc.params, t);
                const TimeSeriesRow closed = master_row(prep, sc.params, m, t);
                row.gamma_a = closed.gamma_a;
                row.gamma_b_abs = closed.gamma_b_abs;
                row.gamma_b_arg = closed.gamma_b_arg;
                row.n_bath = n0 - row.n_field;
                rows.push_back(row);
            }
            return rows;
        }
    }
    return {};
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Short-time growth exponent of defect_e on eleven log-spaced times in [1e-3, 1e-2] t_c.
inline double short_time_defect_slope(const Scenario& sc) {
    std::vector<double> times;
    for (int k = 0; k <= 10; ++k) times.push_back(1e-3 * std::pow(10.0, k / 10.0));
    const auto rows = run_series(sc, times);
    std::vector<double> d;
    for (const auto& r : rows) d.push_back(r.defect_e);
    return loglog_slope(times, d);
}

}  // namespace cavitycat
