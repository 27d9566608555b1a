// Copyright 2026 The ico-netsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * `ico_netsim` command-line driver. Exit codes: 0 success, 1 check
 * failure, 2 usage or validation error.
 *
 *   run            config.json [--format csv|json] [--feed-forward]
 *   sample         config.json --shots k --seed s
 *   table1/table2  [--inject-sign-error] [--modulo-phase]
 *   sweep-theta    config.json [--steps n]
 *   efficiency     [--n 2,3,4] [--l-max 66] [--step 1]
 *   optical-verify [--lambdas 0,15,22.5,30,45] [--theta-steps 16]
 *   graph-verify   --edges "0-1,1-2" [--vertices n] [--raw] [--sign +|-]
 *
 * Every command accepts --out (default stdout). ICO_NETSIM_MAX_QUBITS
 * overrides the qubit cap.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ico/efficiency.hpp"
#include "ico/entanglement.hpp"
#include "ico/graphstate.hpp"
#include "ico/io.hpp"
#include "ico/optical.hpp"
#include "ico/protocol.hpp"
#include "ico/protocol_tables.hpp"

namespace ico::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

using nlohmann::json;
using io::format_double;

/// Usage or validation problem; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::size_t max_qubits_from_env() {
    const char *v = std::getenv("ICO_NETSIM_MAX_QUBITS");
    if (v == nullptr || *v == '\0') {
        return kDefaultMaxQubits;
    }
    const auto n = io::detail::parse_integer(v);
    if (!n || *n < 2) {
        throw UsageError("ICO_NETSIM_MAX_QUBITS: expected an integer >= 2, got '" + std::string(v) + "'");
    }
    return static_cast<std::size_t>(*n);
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json load_config_json(const std::string &path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error &e) {
        throw UsageError("config: invalid JSON (" + std::string(e.what()) + ")");
    }
}

/// Writes to --out when given, else to `fallback`.
class Sink {
  public:
    Sink(const std::string &path, std::ostream &fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw UsageError("cannot write '" + path + "'");
            }
            os_ = &file_;
        }
    }
    std::ostream &operator*() { return *os_; }

  private:
    std::ofstream file_;
    std::ostream *os_;
};

inline json witness_json(const Witness &w) {
    json j = json::object();
    if (w.concurrence) {
        j["concurrence"] = *w.concurrence;
    }
    if (w.ghz_fidelity) {
        j["ghz_fidelity"] = *w.ghz_fidelity;
    }
    j["max_reduction_purity_deficit"] = w.max_reduction_purity_deficit;
    return j;
}

inline std::string opt_cell(const std::optional<double> &v) { return v ? format_double(*v) : ""; }

// ---------------------------------------------------------------------------

inline int cmd_run(const std::string &config_path, const std::string &format, bool feed_forward,
                   const std::string &out_path, std::ostream &out) {
    const json raw = load_config_json(config_path);
    const ProtocolConfig cfg = io::config_from_json(raw);
    const std::size_t cap = max_qubits_from_env();
    auto records = run(cfg, cap);
    if (feed_forward) {
        records = apply_feed_forward(cfg, std::move(records));
    }
    const auto manifest = io::RunManifest::make("run", raw);
    Sink sink(out_path, out);

    if (format == "json") {
        json rows = json::array();
        for (const auto &r : records) {
            const auto cls = classify(r.collapsed);
            json amps = json::array();
            if (r.collapsed) {
                for (const auto &z : r.collapsed->amplitudes()) {
                    amps.push_back(z.real());
                    amps.push_back(z.imag());
                }
            }
            rows.push_back({{"outcome", r.outcome},
                            {"parity", to_string(r.parity)},
                            {"probability", r.probability},
                            {"class", to_string(cls.state_class)},
                            {"witness", witness_json(cls.witness)},
                            {"feed_forward", r.feed_forward_applied},
                            {"state_amplitudes", r.collapsed ? amps : json(nullptr)}});
        }
        *sink << json{{"manifest", manifest.to_json()}, {"outcomes", rows}}.dump(2) << '\n';
        return kExitOk;
    }

    manifest.write_comment_header(*sink);
    *sink << "outcome,parity,probability,class,concurrence,ghz_fidelity,max_reduction_purity_deficit,"
             "feed_forward";
    const std::size_t dim = std::size_t{1} << cfg.n_parties;
    for (std::size_t i = 0; i < dim; ++i) {
        *sink << ",re_" << i << ",im_" << i;
    }
    *sink << '\n';
    for (const auto &r : records) {
        const auto cls = classify(r.collapsed);
        *sink << r.outcome << ',' << to_string(r.parity) << ',' << format_double(r.probability) << ','
              << to_string(cls.state_class) << ',' << opt_cell(cls.witness.concurrence) << ','
              << opt_cell(cls.witness.ghz_fidelity) << ','
              << format_double(cls.witness.max_reduction_purity_deficit) << ','
              << (r.feed_forward_applied ? 1 : 0);
        for (std::size_t i = 0; i < dim; ++i) {
            if (r.collapsed) {
                *sink << ',' << format_double((*r.collapsed)[i].real()) << ','
                      << format_double((*r.collapsed)[i].imag());
            } else {
                *sink << ",,";
            }
        }
        *sink << '\n';
    }
    return kExitOk;
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_draw(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int cmd_sample(const std::string &config_path, long long shots, std::uint64_t seed,
                      const std::string &out_path, std::ostream &out) {
    if (shots < 1) {
        throw UsageError("shots: must be at least 1");
    }
    const json raw = load_config_json(config_path);
    const ProtocolConfig cfg = io::config_from_json(raw);
    const auto records = run(cfg, max_qubits_from_env());

    std::vector<double> cdf;
    double acc = 0.0;
    for (const auto &r : records) {
        acc += r.probability;
        cdf.push_back(acc);
    }
    std::vector<long long> counts(records.size(), 0);
    std::mt19937_64 rng(seed);
    for (long long s = 0; s < shots; ++s) {
        const double u = unit_draw(rng) * acc;
        std::size_t k = 0;
        while (k + 1 < cdf.size() && u >= cdf[k]) {
            ++k;
        }
        ++counts[k];
    }

    json hashed = {{"config", raw}, {"shots", shots}};
    Sink sink(out_path, out);
    io::RunManifest::make("sample", hashed, seed).write_comment_header(*sink);
    *sink << "outcome,parity,probability,count,frequency\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (shots == 1 && counts[i] == 0) {
            continue;
        }
        *sink << records[i].outcome << ',' << to_string(records[i].parity) << ','
              << format_double(records[i].probability) << ',' << counts[i] << ','
              << format_double(static_cast<double>(counts[i]) / static_cast<double>(shots)) << '\n';
    }
    return kExitOk;
}

inline int cmd_table(int which, bool inject_sign_error, bool modulo_phase, const std::string &out_path,
                     std::ostream &out) {
    const auto cases = which == 1 ? table1_cases() : table2_cases();
    json hashed = {{"table", which}, {"inject_sign_error", inject_sign_error}, {"modulo_phase", modulo_phase}};
    Sink sink(out_path, out);
    io::RunManifest::make(which == 1 ? "table1" : "table2", hashed).write_comment_header(*sink);
    *sink << "row,outcome,expected,expected_class,simulated_class,fidelity,strict_fidelity,status\n";
    std::size_t failures = 0;
    std::size_t total = 0;
    for (const auto &c : cases) {
        for (const auto &chk : check_table_config(c.cfg, c.row, inject_sign_error)) {
            const bool ok = chk.class_ok && (modulo_phase ? chk.phase_free_ok : chk.strict_ok);
            failures += ok ? 0 : 1;
            ++total;
            *sink << io::csv_field(chk.row) << ',' << chk.outcome << ',' << io::csv_field(chk.entry.label) << ','
                  << to_string(chk.entry.state_class) << ',' << to_string(chk.simulated_class) << ','
                  << format_double(chk.fidelity) << ',' << format_double(chk.strict_fidelity) << ','
                  << (ok ? "PASS" : "FAIL") << '\n';
        }
    }
    *sink << "# summary: " << (total - failures) << '/' << total << " pass\n";
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

inline int cmd_sweep_theta(const std::string &config_path, long long steps, const std::string &out_path,
                           std::ostream &out) {
    if (steps < 1) {
        throw UsageError("steps: must be at least 1");
    }
    const json raw = load_config_json(config_path);
    ProtocolConfig cfg = io::config_from_json(raw);
    const std::size_t cap = max_qubits_from_env();
    validate(cfg, cap);
    Sink sink(out_path, out);
    io::RunManifest::make("sweep-theta", json{{"config", raw}, {"steps", steps}}).write_comment_header(*sink);
    *sink << "theta,even_prob,odd_prob,even_class,odd_class\n";
    for (long long k = 0; k <= steps; ++k) {
        cfg.theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(steps);
        const auto b = branch_states(cfg, cap);
        *sink << format_double(cfg.theta) << ',' << format_double(b.even_prob) << ','
              << format_double(b.odd_prob) << ',' << to_string(classify(b.even).state_class) << ','
              << to_string(classify(b.odd).state_class) << '\n';
    }
    return kExitOk;
}

inline int cmd_efficiency(const std::string &ns, double l_max, double step, double eta0, double eta_d,
                          double attenuation, const std::string &out_path, std::ostream &out) {
    std::vector<unsigned> n_list;
    for (double v : io::parse_number_list(ns, "n")) {
        if (v < 2 || v != std::floor(v) || v > 1e6) {
            throw UsageError("n: party counts must be integers >= 2");
        }
        n_list.push_back(static_cast<unsigned>(v));
    }
    const efficiency::EfficiencyParams base{eta0, eta_d, attenuation, 0.0, 2};
    std::vector<efficiency::SweepRow> rows;
    try {
        rows = efficiency::sweep(n_list, efficiency::distance_grid(l_max, step), base);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    json hashed = {{"n", ns}, {"l_max", l_max}, {"step", step}, {"eta0", eta0}, {"eta_d", eta_d},
                   {"attenuation", attenuation}};
    Sink sink(out_path, out);
    io::RunManifest::make("efficiency", hashed).write_comment_header(*sink);
    *sink << "N,L_km,eta_prior,eta_ours,enhancement\n";
    for (const auto &r : rows) {
        *sink << r.N << ',' << format_double(r.L_km) << ',' << format_double(r.eta_prior) << ','
              << format_double(r.eta_ours) << ',' << format_double(r.enhancement) << '\n';
    }
    return kExitOk;
}

inline int cmd_optical_verify(const std::string &lambdas, long long theta_steps, double arm_phase,
                              const std::string &out_path, std::ostream &out) {
    if (theta_steps < 1) {
        throw UsageError("theta-steps: must be at least 1");
    }
    const auto lams = io::parse_number_list(lambdas, "lambdas");
    json hashed = {{"lambdas", lambdas}, {"theta_steps", theta_steps}, {"arm_phase", arm_phase}};
    Sink sink(out_path, out);
    io::RunManifest::make("optical-verify", hashed).write_comment_header(*sink);
    *sink << "theta,lambda1,lambda2,detector_pair,probability,infidelity_vs_abstract\n";
    bool all_ok = true;
    for (long long k = 0; k <= theta_steps; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(theta_steps);
        for (double l1 : lams) {
            for (double l2 : lams) {
                const auto rep = optical::verify_against_abstract(theta, l1, l2, kPipelineTol, arm_phase);
                all_ok = all_ok && rep.passed;
                for (const auto &o : rep.per_outcome) {
                    *sink << format_double(theta) << ',' << format_double(l1) << ',' << format_double(l2)
                          << ',' << o.detector_pair << ',' << format_double(o.optical_probability) << ','
                          << format_double(o.infidelity) << '\n';
                }
            }
        }
    }
    return all_ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_graph_verify(const std::string &edges, std::size_t vertices, bool raw, const std::string &sign,
                            const std::string &out_path, std::ostream &out) {
    if (sign != "+" && sign != "-") {
        throw UsageError("sign: must be + or -");
    }
    const int s = sign == "+" ? 1 : -1;
    const graph::Graph g = graph::parse_graph(edges, vertices);
    const auto rep = graph::verify(g, raw, s);
    json hashed = {{"edges", edges}, {"vertices", g.vertex_count()}, {"raw", raw}, {"sign", sign}};
    json j = {{"manifest", io::RunManifest::make("graph-verify", hashed).to_json()},
              {"fidelity_to_graph_state", rep.fidelity_to_graph_state},
              {"identity_residual", rep.identity_residual},
              {"spectra_match", rep.spectra_match}};
    Sink sink(out_path, out);
    *sink << j.dump(2) << '\n';

    bool ok = rep.identity_residual <= kExactTol;
    if (!raw) {
        ok = ok && rep.fidelity_to_graph_state >= 1.0 - kExactTol;
    } else if (g.is_matching()) {
        ok = ok && rep.spectra_match;
    }
    return ok ? kExitOk : kExitCheckFailed;
}

} // namespace detail

/// In-process entry point; `out` receives artifacts, `err` diagnostics.
inline int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Switch-protocol entanglement simulator", "ico_netsim"};
    app.require_subcommand(1);
    app.set_version_flag("--version", io::kToolVersion);

    std::string out_path;
    std::string config_path;

    auto *run = app.add_subcommand("run", "Simulate one configuration and print the outcome table");
    std::string format = "csv";
    bool feed_forward = false;
    run->add_option("config", config_path, "Config JSON file")->required();
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_flag("--feed-forward", feed_forward, "Apply tabulated odd-branch corrections");
    run->add_option("--out", out_path, "Output file");

    auto *sample = app.add_subcommand("sample", "Draw seeded measurement shots");
    long long shots = 1000;
    std::uint64_t seed = 0;
    sample->add_option("config", config_path, "Config JSON file")->required();
    sample->add_option("--shots", shots, "Number of shots");
    sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--out", out_path, "Output file");

    bool inject = false;
    bool modulo_phase = false;
    auto *t1 = app.add_subcommand("table1", "Check every two-party table row");
    auto *t2 = app.add_subcommand("table2", "Check every three-party table row");
    for (auto *t : {t1, t2}) {
        t->add_flag("--inject-sign-error", inject, "Negate every expected state");
        t->add_flag("--modulo-phase", modulo_phase, "Ignore global sign when comparing states");
        t->add_option("--out", out_path, "Output file");
    }

    auto *sweep = app.add_subcommand("sweep-theta", "Branch probabilities and classes over theta");
    long long steps = 64;
    sweep->add_option("config", config_path, "Config JSON file")->required();
    sweep->add_option("--steps", steps, "Grid intervals over [0, 2pi]");
    sweep->add_option("--out", out_path, "Output file");

    auto *eff = app.add_subcommand("efficiency", "Loss-model efficiency curves");
    std::string ns = "2,3,4";
    double l_max = 66.0;
    double step = 1.0;
    efficiency::EfficiencyParams defaults;
    double eta0 = defaults.eta0;
    double eta_d = defaults.eta_d;
    double attenuation = defaults.attenuation;
    eff->add_option("--n", ns, "Comma-separated party counts");
    eff->add_option("--l-max", l_max, "Largest distance (km)");
    eff->add_option("--step", step, "Distance step (km)");
    eff->add_option("--eta0", eta0, "Source efficiency");
    eff->add_option("--eta-d", eta_d, "Detector efficiency");
    eff->add_option("--attenuation", attenuation, "Fiber loss rate (1/km)");
    eff->add_option("--out", out_path, "Output file");

    auto *opt = app.add_subcommand("optical-verify", "Compare the interferometer with the abstract protocol");
    std::string lambdas = "0,15,22.5,30,45";
    long long theta_steps = 16;
    double arm_phase = 0.0;
    opt->add_option("--lambdas", lambdas, "Comma-separated HWP angles (degrees)");
    opt->add_option("--theta-steps", theta_steps, "Grid intervals over [0, 2pi]");
    opt->add_option("--arm-phase", arm_phase, "Extra phase on path 1 (radians)");
    opt->add_option("--out", out_path, "Output file");

    auto *gv = app.add_subcommand("graph-verify", "Check switch-built graph states");
    std::string edges;
    std::size_t vertices = 0;
    bool raw = false;
    std::string sign = "+";
    gv->add_option("--edges", edges, "Edges such as 0-1,1-2")->required();
    gv->add_option("--vertices", vertices, "Vertex count (default: largest index + 1)");
    gv->add_flag("--raw", raw, "Skip the per-edge corrections");
    gv->add_option("--sign", sign, "ICO branch: + or -");
    gv->add_option("--out", out_path, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*run) {
            return detail::cmd_run(config_path, format, feed_forward, out_path, out);
        }
        if (*sample) {
            return detail::cmd_sample(config_path, shots, seed, out_path, out);
        }
        if (*t1) {
            return detail::cmd_table(1, inject, modulo_phase, out_path, out);
        }
        if (*t2) {
            return detail::cmd_table(2, inject, modulo_phase, out_path, out);
        }
        if (*sweep) {
            return detail::cmd_sweep_theta(config_path, steps, out_path, out);
        }
        if (*eff) {
            return detail::cmd_efficiency(ns, l_max, step, eta0, eta_d, attenuation, out_path, out);
        }
        if (*opt) {
            return detail::cmd_optical_verify(lambdas, theta_steps, arm_phase, out_path, out);
        }
        if (*gv) {
            return detail::cmd_graph_verify(edges, vertices, raw, sign, out_path, out);
        }
    } catch (const detail::UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace ico::cli
