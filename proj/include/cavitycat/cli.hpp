#pragma once

// Configuration-driven runner behind the `cavitycat` executable.
//
// Config document (JSON, unknown keys rejected):
//
//   {
//     "case": "a" | "b",
//     "alpha0": {"re": <number>, "im": <number>},
//     "phi": <number> | {"rabi": <number>, "detuning": <number>, "t_int": <number>},
//     "engine": "microscopic" | "master" | "fock",
//     "bath":   {"modes": <odd int >= 3>, "half_bandwidth": <number>, "gamma": <number>},
//     "master": {"gamma": <number>},
//     "fock":   {"n_max": <int>, "dt": <number>},
//     "time":   {"t_max_over_tc": <number > 0>, "points": <int >= 2>},
//     "output": {"format": "csv" | "json", "path": <string>}
//   }
//
// "bath" is required exactly for the microscopic engine, "master" for the
// master and fock engines, "fock" for the fock engine. `compare` needs both
// "bath" and "master". Times are reported in units of t_c = 1/gamma.
//
// Exit codes: 0 success, 1 I/O or self-audit failure, 2 config/usage error,
// 3 zero-probability preparation, 4 positivity violation (including densities
// whose weight the non-orthogonal basis cannot resolve).

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cavitycat/engine.hpp"

namespace cavitycat::cli {

using nlohmann::json;

enum ExitCode : int { Ok = 0, IoFailure = 1, ConfigInvalid = 2, ZeroState = 3, Positivity = 4 };

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("field '" + field + "': " + what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct BathConfig {
    int modes = 0;
    double half_bandwidth = 0.0;
    double gamma = 0.0;
};

struct ScenarioConfig {
    std::string protocol_case;  // "a" | "b"
    double alpha0_re = 0.0;
    double alpha0_im = 0.0;
    double phi = 0.0;
    std::optional<DispersiveCoupling> dispersive;
    std::string engine;  // "microscopic" | "master" | "fock"
    std::optional<BathConfig> bath;
    std::optional<double> master_gamma;
    std::optional<FockSettings> fock;
    double t_max_over_tc = 0.0;
    int points = 0;
    std::string format;  // "csv" | "json"
    std::string path;
};

enum class ConfigMode { Run, Compare };

namespace detail {

inline void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
    }
}

inline const json& object_at(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) throw ConfigError(path, "missing");
    const json& v = parent.at(key);
    if (!v.is_object()) throw ConfigError(path, "must be an object");
    return v;
}

inline double number_at(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) throw ConfigError(path, "missing");
    const json& v = parent.at(key);
    if (!v.is_number()) throw ConfigError(path, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
    return x;
}

inline int integer_at(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) throw ConfigError(path, "missing");
    const json& v = parent.at(key);
    if (!v.is_number_integer()) throw ConfigError(path, "must be an integer");
    return v.get<int>();
}

inline std::string string_at(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) throw ConfigError(path, "missing");
    const json& v = parent.at(key);
    if (!v.is_string()) throw ConfigError(path, "must be a string");
    return v.get<std::string>();
}

}  // namespace detail

inline ScenarioConfig parse_config(const json& doc, ConfigMode mode = ConfigMode::Run) {
    using namespace detail;
    if (!doc.is_object()) throw ConfigError("<root>", "must be an object");
    only_keys(doc, "", {"case", "alpha0", "phi", "engine", "bath", "master", "fock", "time", "output"});

    ScenarioConfig c;
    c.protocol_case = string_at(doc, "case", "case");
    if (c.protocol_case != "a" && c.protocol_case != "b") throw ConfigError("case", "must be \"a\" or \"b\"");

    const json& a0 = object_at(doc, "alpha0", "alpha0");
    only_keys(a0, "alpha0", {"re", "im"});
    c.alpha0_re = number_at(a0, "re", "alpha0.re");
    c.alpha0_im = number_at(a0, "im", "alpha0.im");

    if (!doc.contains("phi")) throw ConfigError("phi", "missing");
    if (doc.at("phi").is_object()) {
        const json& ph = doc.at("phi");
        only_keys(ph, "phi", {"rabi", "detuning", "t_int"});
        DispersiveCoupling k{number_at(ph, "rabi", "phi.rabi"), number_at(ph, "detuning", "phi.detuning"),
                             number_at(ph, "t_int", "phi.t_int")};
        if (k.detuning == 0.0) throw ConfigError("phi.detuning", "must be non-zero");
        c.dispersive = k;
        c.phi = k.phase();
    } else {
        c.phi = number_at(doc, "phi", "phi");
    }

    c.engine = string_at(doc, "engine", "engine");
    if (c.engine != "microscopic" && c.engine != "master" && c.engine != "fock") {
        throw ConfigError("engine", "must be \"microscopic\", \"master\" or \"fock\"");
    }

    const bool want_bath = mode == ConfigMode::Compare || c.engine == "microscopic";
    const bool want_master = mode == ConfigMode::Compare || c.engine == "master" || c.engine == "fock";
    const bool want_fock = c.engine == "fock";
    auto presence = [&](const char* key, bool wanted) {
        if (wanted && !doc.contains(key)) throw ConfigError(key, std::string("required for engine ") + c.engine);
        if (!wanted && doc.contains(key)) throw ConfigError(key, std::string("not used by engine ") + c.engine);
    };
    presence("bath", want_bath);
    presence("master", want_master);
    presence("fock", want_fock);

    if (want_bath) {
        const json& b = object_at(doc, "bath", "bath");
        only_keys(b, "bath", {"modes", "half_bandwidth", "gamma"});
        BathConfig bc{integer_at(b, "modes", "bath.modes"), number_at(b, "half_bandwidth", "bath.half_bandwidth"),
                      number_at(b, "gamma", "bath.gamma")};
        if (bc.modes < 3 || bc.modes % 2 == 0) throw ConfigError("bath.modes", "must be an odd integer >= 3");
        if (!(bc.gamma > 0.0)) throw ConfigError("bath.gamma", "must be > 0");
        if (!(bc.half_bandwidth >= 10.0 * bc.gamma)) throw ConfigError("bath.half_bandwidth", "must be >= 10 gamma");
        c.bath = bc;
    }
    if (want_master) {
        const json& m = object_at(doc, "master", "master");
        only_keys(m, "master", {"gamma"});
        const double g = number_at(m, "gamma", "master.gamma");
        if (!(g > 0.0)) throw ConfigError("master.gamma", "must be > 0");
        c.master_gamma = g;
    }
    if (want_fock) {
        const json& f = object_at(doc, "fock", "fock");
        only_keys(f, "fock", {"n_max", "dt"});
        FockSettings fs{integer_at(f, "n_max", "fock.n_max"), number_at(f, "dt", "fock.dt")};
        const double r = std::hypot(c.alpha0_re, c.alpha0_im);
        if (fs.n_max < fock::required_n_max(r)) {
            throw ConfigError("fock.n_max", "below tail rule |alpha0|^2 + 8|alpha0| + 10 = " +
                                                std::to_string(fock::required_n_max(r)));
        }
        if (!(fs.dt > 0.0) || fs.dt > 1e-3 / *c.master_gamma / (fs.n_max + 1)) {
            throw ConfigError("fock.dt", "must satisfy 0 < dt <= 1e-3 / gamma / (n_max + 1)");
        }
        c.fock = fs;
    }

    const json& t = object_at(doc, "time", "time");
    only_keys(t, "time", {"t_max_over_tc", "points"});
    c.t_max_over_tc = number_at(t, "t_max_over_tc", "time.t_max_over_tc");
    c.points = integer_at(t, "points", "time.points");
    if (!(c.t_max_over_tc > 0.0)) throw ConfigError("time.t_max_over_tc", "must be > 0");
    if (c.points < 2) throw ConfigError("time.points", "must be >= 2");

    const json& o = object_at(doc, "output", "output");
    only_keys(o, "output", {"format", "path"});
    c.format = string_at(o, "format", "output.format");
    if (c.format != "csv" && c.format != "json") throw ConfigError("output.format", "must be \"csv\" or \"json\"");
    c.path = string_at(o, "path", "output.path");
    if (c.path.empty()) throw ConfigError("output.path", "must be non-empty");
    return c;
}

inline ScenarioConfig load_config(const std::string& path, ConfigMode mode = ConfigMode::Run) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("not valid JSON: ") + e.what());
    }
    return parse_config(doc, mode);
}

inline Scenario build_scenario(const ScenarioConfig& c, std::optional<EngineKind> engine_override = std::nullopt) {
    const ProtocolCase pc = c.protocol_case == "a" ? ProtocolCase::CaseA : ProtocolCase::CaseB;
    const CoherentLabel a0(c.alpha0_re, c.alpha0_im);
    ProtocolParams params = c.dispersive ? ProtocolParams::dispersive(pc, a0, *c.dispersive)
                                         : ProtocolParams(pc, a0, c.phi);
    EngineKind kind = EngineKind::Master;
    if (c.engine == "microscopic") kind = EngineKind::Microscopic;
    if (c.engine == "fock") kind = EngineKind::Fock;
    if (engine_override) kind = *engine_override;
    Scenario sc{params, kind, std::nullopt, std::nullopt, c.fock};
    if (c.bath) sc.bath = discretize_flat_band(c.bath->gamma, c.bath->modes, c.bath->half_bandwidth);
    if (c.master_gamma) sc.master = MasterParams(*c.master_gamma);
    return sc;
}

// Column names, in output order.
inline const std::vector<std::string>& row_columns() {
    static const std::vector<std::string> cols = {
        "t",          "gamma_a",     "gamma_b_abs", "gamma_b_arg", "p_ee",     "p_eg",     "p_ge",
        "p_gg",       "eta",         "lam_e_plus",  "lam_e_minus", "lam_g_plus", "lam_g_minus", "purity_e",
        "purity_g",   "defect_e",    "defect_g",    "n_field",     "n_bath",   "recurrence_warning"};
    return cols;
}

inline std::vector<double> row_values(const TimeSeriesRow& r) {
    return {r.t,          r.gamma_a,     r.gamma_b_abs, r.gamma_b_arg, r.p_ee,     r.p_eg,     r.p_ge,
            r.p_gg,       r.eta,         r.lam_e_plus,  r.lam_e_minus, r.lam_g_plus, r.lam_g_minus, r.purity_e,
            r.purity_g,   r.defect_e,    r.defect_g,    r.n_field,     r.n_bath,   r.recurrence_warning ? 1.0 : 0.0};
}

// A flat table: named columns, rows of values. Boolean columns are stored as 0/1.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::set<std::string> boolean_columns;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_table(const Table& t, const std::string& format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output " + path);
    if (format == "csv") {
        for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "");
                if (t.boolean_columns.count(t.columns[c])) {
                    out << (row[c] != 0.0 ? "true" : "false");
                } else {
                    out << format_double(row[c]);
                }
            }
            out << '\n';
        }
    } else {
        json arr = json::array();
        for (const auto& row : t.rows) {
            json obj = json::object();
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (t.boolean_columns.count(t.columns[c])) {
                    obj[t.columns[c]] = row[c] != 0.0;
                } else {
                    obj[t.columns[c]] = row[c];
                }
            }
            arr.push_back(std::move(obj));
        }
        out << arr.dump(2) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline Table read_table(const std::string& format, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot reopen output " + path);
    Table t;
    if (format == "csv") {
        std::string line;
        std::getline(in, line);
        std::stringstream hs(line);
        for (std::string cell; std::getline(hs, cell, ',');) t.columns.push_back(cell);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<double> row;
            std::stringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');) {
                if (cell == "true" || cell == "false") {
                    row.push_back(cell == "true" ? 1.0 : 0.0);
                } else {
                    row.push_back(std::stod(cell));
                }
            }
            if (row.size() != t.columns.size()) throw std::runtime_error("audit: ragged CSV row");
            t.rows.push_back(std::move(row));
        }
    } else {
        const json arr = json::parse(in);
        for (const auto& obj : arr) {
            if (t.columns.empty()) {
                for (auto it = obj.begin(); it != obj.end(); ++it) t.columns.push_back(it.key());
            }
            std::vector<double> row;
            for (const auto& c : t.columns) {
                const json& v = obj.at(c);
                row.push_back(v.is_boolean() ? (v.get<bool>() ? 1.0 : 0.0) : v.get<double>());
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

// Re-checks the row invariants of a written table. `suffixes` selects the
// column groups ("" for plain runs, "_micro"/"_me" for compare); groups listed
// in `conserving` must also keep n_field + n_bath constant within each
// `group_column` value (or over the whole table when group_column is empty).
inline void audit_table(const Table& t, const std::vector<std::string>& suffixes,
                        const std::set<std::string>& conserving, const std::string& group_column = "") {
    auto col = [&](const std::string& name) {
        auto it = std::find(t.columns.begin(), t.columns.end(), name);
        if (it == t.columns.end()) throw std::runtime_error("audit: missing column " + name);
        return static_cast<std::size_t>(it - t.columns.begin());
    };
    for (const auto& s : suffixes) {
        const auto ee = col("p_ee" + s), eg = col("p_eg" + s), ge = col("p_ge" + s), gg = col("p_gg" + s);
        const auto eta = col("eta" + s), nf = col("n_field" + s), nb = col("n_bath" + s);
        std::map<double, double> reference;
        for (const auto& r : t.rows) {
            for (auto i : {ee, eg, ge, gg}) {
                if (r[i] < 0.0 || r[i] > 1.0) throw std::runtime_error("audit: probability outside [0,1]");
            }
            if (std::abs(r[ee] + r[eg] - 1.0) > 1e-9 || std::abs(r[ge] + r[gg] - 1.0) > 1e-9) {
                throw std::runtime_error("audit: conditional probabilities do not sum to one");
            }
            if (std::abs(r[eta] - (r[ee] - r[ge])) > 1e-12) throw std::runtime_error("audit: eta != p_ee - p_ge");
            if (conserving.count(s)) {
                const double key = group_column.empty() ? 0.0 : r[col(group_column)];
                const double total = r[nf] + r[nb];
                auto [it, fresh] = reference.emplace(key, total);
                if (!fresh && std::abs(total - it->second) > 1e-8) {
                    throw std::runtime_error("audit: n_field + n_bath not conserved");
                }
            }
        }
    }
}

inline Table series_table(const std::vector<TimeSeriesRow>& rows) {
    Table t{row_columns(), {}, {"recurrence_warning"}};
    for (const auto& r : rows) t.rows.push_back(row_values(r));
    return t;
}

inline bool log_enabled() {
    const char* v = std::getenv("CAVITYCAT_LOG");
    return v != nullptr && std::string(v) != "quiet" && std::string(v) != "0";
}

// Maps library failures onto the documented exit codes.
inline int guarded(const std::string& config_path, std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << config_path << ": " << e.what() << '\n';
        return ConfigInvalid;
    } catch (const ZeroStateError& e) {
        err << config_path << ": zero-probability preparation: " << e.what() << '\n';
        return ZeroState;
    } catch (const PositivityViolation& e) {
        err << config_path << ": positivity violation: " << e.what() << '\n';
        return Positivity;
    } catch (const std::invalid_argument& e) {
        err << config_path << ": invalid parameter: " << e.what() << '\n';
        return ConfigInvalid;
    } catch (const std::exception& e) {
        err << config_path << ": " << e.what() << '\n';
        return IoFailure;
    }
}

inline int run_command(const std::string& config_path, std::ostream& err = std::cerr) {
    return guarded(config_path, err, [&] {
        const ScenarioConfig cfg = load_config(config_path);
        const Scenario sc = build_scenario(cfg);
        const auto rows = run_series(sc, time_grid(cfg.t_max_over_tc, cfg.points));
        write_table(series_table(rows), cfg.format, cfg.path);
        std::set<std::string> conserving;
        if (sc.engine == EngineKind::Microscopic) conserving.insert("");
        audit_table(read_table(cfg.format, cfg.path), {""}, conserving);
        if (log_enabled()) err << "run: wrote " << rows.size() << " rows to " << cfg.path << '\n';
        return static_cast<int>(Ok);
    });
}

inline std::string summary_path(const std::string& output_path) {
    std::filesystem::path p(output_path);
    p.replace_extension(".summary.json");
    return p.string();
}

struct CompareSummary {
    double max_abs_eta_gap = 0.0;         // whole grid
    double max_abs_eta_gap_window = 0.0;  // t in [0.1, 2] t_c
    double slope_defect_e_micro = 0.0;
    double slope_defect_e_me = 0.0;
    int recurrence_warning_rows = 0;
};

inline int compare_command(const std::string& config_path, std::ostream& err = std::cerr) {
    return guarded(config_path, err, [&] {
        const ScenarioConfig cfg = load_config(config_path, ConfigMode::Compare);
        const Scenario micro = build_scenario(cfg, EngineKind::Microscopic);
        const Scenario me = build_scenario(cfg, EngineKind::Master);
        if (std::abs(micro.gamma() - me.gamma()) > 1e-12 * me.gamma()) {
            throw ConfigError("master.gamma", "must equal bath.gamma for compare");
        }
        const auto grid = time_grid(cfg.t_max_over_tc, cfg.points);
        const auto rm = run_series(micro, grid);
        const auto re = run_series(me, grid);

        Table t;
        t.columns.push_back("t");
        for (std::size_t c = 1; c < row_columns().size(); ++c) {
            t.columns.push_back(row_columns()[c] + "_micro");
            t.columns.push_back(row_columns()[c] + "_me");
        }
        t.boolean_columns = {"recurrence_warning_micro", "recurrence_warning_me"};
        CompareSummary s;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto a = row_values(rm[i]), b = row_values(re[i]);
            std::vector<double> row{grid[i]};
            for (std::size_t c = 1; c < a.size(); ++c) {
                row.push_back(a[c]);
                row.push_back(b[c]);
            }
            t.rows.push_back(std::move(row));
            const double gap = std::abs(rm[i].eta - re[i].eta);
            s.max_abs_eta_gap = std::max(s.max_abs_eta_gap, gap);
            if (grid[i] >= 0.1 - 1e-12 && grid[i] <= 2.0 + 1e-12) {
                s.max_abs_eta_gap_window = std::max(s.max_abs_eta_gap_window, gap);
            }
            s.recurrence_warning_rows += rm[i].recurrence_warning ? 1 : 0;
        }
        s.slope_defect_e_micro = short_time_defect_slope(micro);
        s.slope_defect_e_me = short_time_defect_slope(me);

        write_table(t, cfg.format, cfg.path);
        audit_table(read_table(cfg.format, cfg.path), {"_micro", "_me"}, {"_micro"});

        const json summary = {{"max_abs_eta_gap", s.max_abs_eta_gap},
                              {"max_abs_eta_gap_t_0p1_to_2", s.max_abs_eta_gap_window},
                              {"short_time_slope_defect_e_micro", s.slope_defect_e_micro},
                              {"short_time_slope_defect_e_me", s.slope_defect_e_me},
                              {"recurrence_warning_rows", s.recurrence_warning_rows}};
        std::ofstream out(summary_path(cfg.path), std::ios::binary);
        if (!out) throw std::runtime_error("cannot open summary " + summary_path(cfg.path));
        out << summary.dump(2) << '\n';
        if (log_enabled()) err << "compare: " << summary.dump() << '\n';
        return static_cast<int>(Ok);
    });
}

inline const std::vector<std::string>& sweep_params() {
    static const std::vector<std::string> names = {"phi", "alpha0_re", "gamma"};
    return names;
}

inline std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    for (std::string cell; std::getline(ss, cell, ',');) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            throw ConfigError("--values", "not a number: '" + cell + "'");
        }
        if (used != cell.size() || !std::isfinite(v)) throw ConfigError("--values", "not a number: '" + cell + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--values", "must list at least one value");
    return out;
}

inline ScenarioConfig with_param(ScenarioConfig c, const std::string& name, double v) {
    if (name == "phi") {
        c.phi = v;
        c.dispersive.reset();
    } else if (name == "alpha0_re") {
        c.alpha0_re = v;
    } else if (name == "gamma") {
        if (!(v > 0.0)) throw ConfigError("--values", "gamma must be > 0");
        if (c.bath) {
            if (!(c.bath->half_bandwidth >= 10.0 * v)) throw ConfigError("bath.half_bandwidth", "must be >= 10 gamma");
            c.bath->gamma = v;
        }
        if (c.master_gamma) c.master_gamma = v;
    } else {
        throw ConfigError("--param", "unknown parameter '" + name + "'");
    }
    return c;
}

inline int sweep_command(const std::string& config_path, const std::string& param, const std::string& values,
                         std::ostream& err = std::cerr) {
    return guarded(config_path, err, [&] {
        if (std::find(sweep_params().begin(), sweep_params().end(), param) == sweep_params().end()) {
            throw ConfigError("--param", "unknown parameter '" + param + "' (phi, alpha0_re, gamma)");
        }
        std::vector<double> vals = parse_values(values);
        const ScenarioConfig base = load_config(config_path);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        std::vector<Scenario> scenarios;
        for (double v : vals) scenarios.push_back(build_scenario(with_param(base, param, v)));
        const auto grid = time_grid(base.t_max_over_tc, base.points);
        const auto runs = parallel_map<std::vector<TimeSeriesRow>>(
            scenarios.size(), [&](std::size_t i) { return run_series(scenarios[i], grid); });

        Table t;
        t.columns.push_back(param);
        for (const auto& c : row_columns()) t.columns.push_back(c);
        t.boolean_columns = {"recurrence_warning"};
        for (std::size_t i = 0; i < vals.size(); ++i) {
            for (const auto& r : runs[i]) {
                std::vector<double> row{vals[i]};
                for (double x : row_values(r)) row.push_back(x);
                t.rows.push_back(std::move(row));
            }
        }
        write_table(t, base.format, base.path);
        std::set<std::string> conserving;
        if (base.engine == "microscopic") conserving.insert("");
        audit_table(read_table(base.format, base.path), {""}, conserving, param);
        if (log_enabled()) err << "sweep: " << vals.size() << " values, " << t.rows.size() << " rows\n";
        return static_cast<int>(Ok);
    });
}

}  // namespace cavitycat::cli
