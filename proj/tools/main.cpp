// Command-line front end: normalization constants for random-spectrum
// densities, average entropies, closed-form density tables, symbolic
// recognition of constants, and exact Bernoulli utilities.
//
// Exit codes: 0 success, 1 internal failure, 2 usage, 3 no result within
// budget (or value not recognized), 4 divergent request, 5 replay mismatch.

#include <CLI11.hpp>
#include <json.hpp>

#include "buresnum/common.hpp"
#include "buresnum/kernels.hpp"
#include "buresnum/manifest.hpp"
#include "buresnum/numbers.hpp"
#include "buresnum/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace buresnum;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoResult = 3;
constexpr int kExitDivergent = 4;
constexpr int kExitReplayMismatch = 5;

// ======================================================================
// shared option blocks
// ======================================================================

struct CommonOpts {
    double rel_tol = 0.0;
    std::uint64_t max_evaluations = 0;
    std::uint64_t qmc_points = 10000000;
    std::uint64_t qmc_batch = 100000;
    std::uint64_t seed = 0;
    int tensor_points = 0;
    std::vector<int> level_order;
    std::string cache_path;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--rel-tol", c.rel_tol,
                    "relative tolerance (0 = per-size default)");
    cmd->add_option("--max-evaluations", c.max_evaluations,
                    "integrand evaluation budget (0 = engine default)");
    cmd->add_option("--qmc-points", c.qmc_points, "quasi-random point budget")
        ->capture_default_str();
    cmd->add_option("--qmc-batch", c.qmc_batch, "quasi-random batch size")
        ->capture_default_str();
    cmd->add_option("--seed", c.seed,
                    "seed for the shifted quasi-random stream (0 = plain)");
    cmd->add_option("--tensor-points", c.tensor_points,
                    "per-axis grid size for the tensor route (0 = per-size default)");
    cmd->add_option("--level-order", c.level_order,
                    "nesting permutation for the full-box route")
        ->delimiter(',');
    cmd->add_option("--cache", c.cache_path,
                    "append to / reuse results from this jsonl file");
}

PipelineConfig to_config(const CommonOpts& c) {
    PipelineConfig cfg;
    cfg.rel_tol = c.rel_tol;
    cfg.max_evaluations = c.max_evaluations;
    cfg.qmc_points = c.qmc_points;
    cfg.qmc_batch = c.qmc_batch;
    cfg.seed = c.seed;
    cfg.tensor_points = c.tensor_points;
    cfg.level_order = c.level_order;
    cfg.cache_path = c.cache_path;
    return cfg;
}

struct OutOpts {
    std::string out_path;
    std::string manifest_path;
};

void add_out(CLI::App* cmd, OutOpts& o) {
    cmd->add_option("-o,--output", o.out_path,
                    "also write the result record to this file");
    cmd->add_option("--manifest", o.manifest_path,
                    "write a reproduction manifest to this file");
}

// print (or capture) the result record, then mirror it to the output file
// and manifest as requested
int finalize(const std::string& cmd, const std::vector<std::string>& argv_tokens,
             const std::string& result_text, std::int64_t wall_ms, const OutOpts& oo,
             std::string* captured, int code) {
    if (captured != nullptr) {
        *captured = result_text;
    } else {
        std::cout << result_text << "\n";
    }
    if (!oo.out_path.empty()) {
        std::ofstream f(oo.out_path);
        f << result_text << "\n";
    }
    if (!oo.manifest_path.empty()) {
        json params;
        params["argv"] = argv_tokens;
        const char* workers = std::getenv("BURESNUM_WORKERS");
        params["workers"] = workers != nullptr ? json(workers) : json(nullptr);
        RunManifest m;
        m.command = cmd;
        m.params_json = params.dump();
        m.code_version = std::string(kCodeVersion);
        m.wall_ms = wall_ms;
        m.result_digest = to_hex(fnv1a64(result_text));
        write_manifest(m, oo.manifest_path);
    }
    return code;
}

json recognition_json(const RecognitionReport& rep) {
    json j;
    j["input"] = rep.input;
    j["recognized"] = rep.recognized;
    j["ambiguous"] = rep.ambiguous;
    json cands = json::array();
    for (const auto& c : rep.all_candidates) {
        cands.push_back({{"pi_power", c.pi_power},
                         {"integer", c.integer.get_str()},
                         {"residual", c.residual},
                         {"sequence_backed", c.sequence_backed}});
    }
    j["candidates"] = cands;
    if (rep.recognized) {
        json b;
        b["pi_power"] = rep.best.pi_power;
        b["integer"] = rep.best.integer.get_str();
        b["residual"] = rep.best.residual;
        b["sequence_backed"] = rep.best.sequence_backed;
        json ms = json::array();
        for (const auto& m : rep.best.matches) {
            ms.push_back({{"entry_index", m.index},
                          {"multiplier", BigRational(m.multiplier).get_str()}});
        }
        b["sequence_matches"] = ms;
        json f;
        f["complete"] = rep.factorization.complete;
        json fs = json::array();
        for (const auto& pf : rep.factorization.factors) {
            fs.push_back({{"prime", pf.prime.get_str()}, {"exponent", pf.exponent}});
        }
        f["factors"] = fs;
        if (!rep.factorization.complete) {
            f["remaining"] = rep.factorization.remaining.get_str();
        }
        b["factorization"] = f;
        j["best"] = b;
    }
    return j;
}

// drop output/manifest options (with their values) from a stored argv so a
// replay cannot clobber the files of the original run
std::vector<std::string> strip_output_options(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        if (t == "-o" || t == "--output" || t == "--manifest") {
            ++i;  // skip the value too
            continue;
        }
        if (t.rfind("--output=", 0) == 0 || t.rfind("--manifest=", 0) == 0 ||
            t.rfind("-o=", 0) == 0) {
            continue;
        }
        out.push_back(t);
    }
    return out;
}

int run_cli(const std::vector<std::string>& tokens, int depth, std::string* captured);

// ======================================================================
// subcommand bodies
// ======================================================================

int do_replay(const std::string& path, int depth) {
    if (depth > 0) {
        std::cerr << "nested replay refused\n";
        return kExitUsage;
    }
    RunManifest m = read_manifest(path);
    json params = json::parse(m.params_json);
    std::vector<std::string> sub;
    for (const auto& t : params.at("argv")) sub.push_back(t.get<std::string>());
    std::string inner;
    int rc = run_cli(strip_output_options(sub), depth + 1, &inner);
    std::string digest = to_hex(fnv1a64(inner));
    bool match = digest == m.result_digest;
    json out{{"command", m.command},
             {"stored_digest", m.result_digest},
             {"replayed_digest", digest},
             {"match", match},
             {"inner_exit", rc}};
    std::cout << out.dump() << "\n";
    return (match && rc == kExitOk) ? kExitOk : kExitReplayMismatch;
}

// ======================================================================
// parser + dispatch
// ======================================================================

int run_cli(const std::vector<std::string>& tokens, int depth, std::string* captured) {
    CLI::App app{"normalization constants and spectral densities of random density matrices"};
    app.set_config("--config");
    app.set_version_flag("--version", std::string(kCodeVersion));
    app.require_subcommand(1);
    // app-level options (--config) are accepted after the subcommand too
    app.fallthrough();

    // ---- hall ------------------------------------------------------
    auto* hall = app.add_subcommand(
        "hall", "normalization constant of the eigenvalue density");
    int hall_n = 2;
    int hall_beta = 2;
    std::string hall_mean = "arithmetic";
    std::string hall_method = "auto";
    bool no_recognize = false;
    int recog_kmax = 6;
    double recog_residual = 0.0;
    CommonOpts hall_c;
    OutOpts hall_o;
    hall->add_option("n", hall_n, "matrix size")->required()->check(CLI::Range(2, 6));
    hall->add_option("--beta", hall_beta, "pair-gap exponent")
        ->capture_default_str()
        ->check(CLI::Range(1, 16));
    hall->add_option("--mean", hall_mean, "pair denominator mean")
        ->capture_default_str()
        ->check(CLI::IsMember({"arithmetic", "identric"}));
    hall->add_option("--method", hall_method, "integration route")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "adaptive", "adaptive-fullbox", "qmc", "tensor"}));
    hall->add_flag("--no-recognize", no_recognize,
                   "skip symbolic recognition of the constant");
    hall->add_option("--recognize-k-max", recog_kmax, "largest pi power tried")
        ->capture_default_str();
    hall->add_option("--recognize-residual", recog_residual,
                     "recognition residual cap (0 = scale with the error estimate)");
    add_common(hall, hall_c);
    add_out(hall, hall_o);

    // ---- entropy ---------------------------------------------------
    auto* entropy = app.add_subcommand(
        "entropy", "average von Neumann entropy under the eigenvalue density");
    int ent_n = 2;
    CommonOpts ent_c;
    OutOpts ent_o;
    entropy->add_option("n", ent_n, "matrix size")->required()->check(CLI::Range(2, 6));
    add_common(entropy, ent_c);
    add_out(entropy, ent_o);

    // ---- eigs ------------------------------------------------------
    auto* eigs = app.add_subcommand(
        "eigs", "expected ordered eigenvalues under the density");
    int eig_n = 2;
    CommonOpts eig_c;
    OutOpts eig_o;
    eigs->add_option("n", eig_n, "matrix size")->required()->check(CLI::Range(2, 4));
    add_common(eigs, eig_c);
    add_out(eigs, eig_o);

    // ---- density ---------------------------------------------------
    auto* density = app.add_subcommand(
        "density", "tabulate or evaluate a closed-form marginal density");
    std::string family;
    int points = 201;
    int theta_points = 65;
    int phi_points = 65;
    std::vector<double> at;
    OutOpts den_o;
    density->add_option("family", family, "which marginal")
        ->required()
        ->check(CLI::IsMember({"theta-n2", "quasi-theta-n2", "theta-n3", "phi-n3",
                               "thetaphi-n3", "quasi-thetaphi-n3"}));
    density->add_option("--points", points, "grid points for one-variable tables")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    density->add_option("--theta-points", theta_points, "grid points along theta")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000));
    density->add_option("--phi-points", phi_points, "grid points along phi")
        ->capture_default_str()
        ->check(CLI::Range(2, 100000));
    density->add_option("--at", at, "evaluate at one point instead of tabulating")
        ->expected(1, 2);
    add_out(density, den_o);

    // ---- recognize -------------------------------------------------
    auto* recognize = app.add_subcommand(
        "recognize", "express a value as integer / pi^k, tied to the sequence");
    double rec_value = 0.0;
    int rec_kmin = 0;
    int rec_kmax = 6;
    double rec_residual = 1e-8;
    int rec_entries = 20;
    unsigned rec_mult = 128;
    OutOpts rec_o;
    recognize->add_option("value", rec_value, "value to recognize")->required();
    recognize->add_option("--k-min", rec_kmin, "smallest pi power")->capture_default_str();
    recognize->add_option("--k-max", rec_kmax, "largest pi power")->capture_default_str();
    recognize->add_option("--max-residual", rec_residual, "relative residual cap")
        ->capture_default_str();
    recognize->add_option("--sequence-entries", rec_entries,
                          "denominator-sequence entries to match against (0 = none)")
        ->capture_default_str()
        ->check(CLI::Range(0, 200));
    recognize->add_option("--max-multiplier", rec_mult, "sequence multiplier cap")
        ->capture_default_str();
    add_out(recognize, rec_o);

    // ---- bernoulli -------------------------------------------------
    auto* bern = app.add_subcommand(
        "bernoulli", "exact Bernoulli numbers and partial-sum denominators");
    int bern_index = -1;
    int bern_denoms = 0;
    OutOpts bern_o;
    bern->add_option("index", bern_index, "Bernoulli index");
    bern->add_option("--denominators", bern_denoms,
                     "list the first N partial-sum denominators")
        ->check(CLI::Range(1, 2000));
    add_out(bern, bern_o);

    // ---- replay ----------------------------------------------------
    auto* replay = app.add_subcommand(
        "replay", "re-run a manifest and compare result digests");
    std::string replay_path;
    replay->add_option("manifest", replay_path, "manifest file")->required();

    // ---- parse -----------------------------------------------------
    std::vector<const char*> argv;
    argv.push_back("buresnum");
    for (const auto& t : tokens) argv.push_back(t.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int c = app.exit(e);
        return c == 0 ? kExitOk : kExitUsage;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto wall = [&t0] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    try {
        if (app.got_subcommand(hall)) {
            PipelineConfig cfg = to_config(hall_c);
            ConstantResult r;
            if (hall_mean == "identric") {
                if (hall_beta != 2) {
                    std::cerr << "identric denominators are defined for beta = 2 only\n";
                    return kExitUsage;
                }
                r = quasi_constant(hall_n, cfg);
            } else if (hall_beta == 2) {
                r = hall_constant(hall_n, cfg, hall_method);
            } else {
                r = variant_constant(hall_n, hall_beta, cfg);
            }
            json out = json::parse(to_json_string(r));
            if (!no_recognize) {
                double rel_err =
                    r.integral != 0.0 ? std::fabs(r.error_estimate / r.integral) : 0.0;
                double tol = recog_residual > 0.0 ? recog_residual
                                                  : std::max(1e-6, 10.0 * rel_err);
                auto seq = partial_sum_denominators(20);
                auto rep = recognize_pi_rational(r.constant, 0, recog_kmax, tol, &seq, 1024);
                out["recognition"] = recognition_json(rep);
            }
            return finalize("hall", tokens, out.dump(), wall(), hall_o, captured,
                            r.converged ? kExitOk : kExitNoResult);
        }

        if (app.got_subcommand(entropy)) {
            EntropyResult r = average_entropy(ent_n, to_config(ent_c));
            return finalize("entropy", tokens, to_json_string(r), wall(), ent_o, captured,
                            r.converged ? kExitOk : kExitNoResult);
        }

        if (app.got_subcommand(eigs)) {
            EigenvalueResult r = expected_eigenvalues(eig_n, to_config(eig_c));
            return finalize("eigs", tokens, to_json_string(r), wall(), eig_o, captured,
                            r.converged ? kExitOk : kExitNoResult);
        }

        if (app.got_subcommand(density)) {
            bool two_d = family == "thetaphi-n3" || family == "quasi-thetaphi-n3";
            auto eval1 = [&family](double x) {
                if (family == "theta-n2") return bures_marginal_theta_n2(x);
                if (family == "quasi-theta-n2") return quasi_marginal_theta_n2(x);
                if (family == "theta-n3") return bures_marginal_theta_n3(x);
                return bures_marginal_phi_n3(x);
            };
            auto eval2 = [&family](double t, double p) {
                return family == "thetaphi-n3" ? bures_marginal_thetaphi_n3(t, p)
                                               : quasi_marginal_thetaphi_n3(t, p);
            };
            bool half_range = family == "theta-n2" || family == "quasi-theta-n2";
            double hi = half_range ? 0.5 * kPi : kPi;

            if (!at.empty()) {
                if ((two_d && at.size() != 2) || (!two_d && at.size() != 1)) {
                    std::cerr << "--at needs " << (two_d ? 2 : 1)
                              << " coordinate(s) for " << family << "\n";
                    return kExitUsage;
                }
                double v = two_d ? eval2(at[0], at[1]) : eval1(at[0]);
                json out{{"family", family}, {"at", at}, {"value", v}};
                return finalize("density", tokens, out.dump(), wall(), den_o, captured,
                                kExitOk);
            }

            std::ostringstream csv;
            csv.precision(17);
            if (two_d) {
                csv << "theta,phi,value\n";
                for (int i = 0; i < theta_points; ++i) {
                    double t = hi * i / (theta_points - 1);
                    for (int j = 0; j < phi_points; ++j) {
                        double p = kPi * j / (phi_points - 1);
                        csv << t << "," << p << "," << eval2(t, p) << "\n";
                    }
                }
            } else {
                csv << (family == "phi-n3" ? "phi" : "theta") << ",value\n";
                for (int i = 0; i < points; ++i) {
                    double x = hi * i / (points - 1);
                    csv << x << "," << eval1(x) << "\n";
                }
            }
            std::string text = csv.str();
            text.pop_back();  // finalize appends the trailing newline
            return finalize("density", tokens, text, wall(), den_o, captured, kExitOk);
        }

        if (app.got_subcommand(recognize)) {
            std::vector<BigInt> seq;
            const std::vector<BigInt>* seq_ptr = nullptr;
            if (rec_entries > 0) {
                seq = partial_sum_denominators(static_cast<unsigned>(rec_entries));
                seq_ptr = &seq;
            }
            auto rep = recognize_pi_rational(rec_value, rec_kmin, rec_kmax, rec_residual,
                                             seq_ptr, rec_mult);
            json out = recognition_json(rep);
            return finalize("recognize", tokens, out.dump(), wall(), rec_o, captured,
                            rep.recognized ? kExitOk : kExitNoResult);
        }

        if (app.got_subcommand(bern)) {
            if (bern_index < 0 && bern_denoms <= 0) {
                std::cerr << "bernoulli needs an index and/or --denominators N\n";
                return kExitUsage;
            }
            json out;
            if (bern_index >= 0) {
                out["index"] = bern_index;
                out["value"] = bernoulli(static_cast<unsigned>(bern_index)).get_str();
            }
            if (bern_denoms > 0) {
                json arr = json::array();
                for (const auto& e :
                     partial_sum_denominators(static_cast<unsigned>(bern_denoms))) {
                    arr.push_back(e.get_str());
                }
                out["denominators"] = arr;
            }
            return finalize("bernoulli", tokens, out.dump(), wall(), bern_o, captured,
                            kExitOk);
        }

        if (app.got_subcommand(replay)) {
            return do_replay(replay_path, depth);
        }
    } catch (const DivergenceError& e) {
        std::cerr << json{{"error", "divergent"}, {"detail", e.what()}}.dump() << "\n";
        return kExitDivergent;
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", "invalid-request"}, {"detail", e.what()}}.dump()
                  << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "failure"}, {"detail", e.what()}}.dump() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(argc));
    for (int i = 1; i < argc; ++i) tokens.emplace_back(argv[i]);
    return run_cli(tokens, 0, nullptr);
}
