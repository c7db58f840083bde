#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pstomo/circuits.hpp"
#include "pstomo/reconstruct.hpp"
#include "pstomo/sampling.hpp"
#include "pstomo/sweep.hpp"
#include "pstomo/verify.hpp"

namespace {

using namespace pstomo;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

std::string with_suffix(const std::string& path, const std::string& tag) {
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "." + tag;
    return path.substr(0, dot) + "." + tag + path.substr(dot);
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PSTOMO_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

qcore::PureState load_state_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("target file " + path + ": " + e.what());
    }
    if (!j.contains("amplitudes") || !j["amplitudes"].is_array())
        throw IoError("target file " + path + ": expected an \"amplitudes\" array");
    cvec amps;
    for (const auto& entry : j["amplitudes"]) {
        if (entry.is_array() && entry.size() == 2)
            amps.emplace_back(entry[0].get<double>(), entry[1].get<double>());
        else if (entry.is_number())
            amps.emplace_back(entry.get<double>(), 0.0);
        else
            throw IoError("target file " + path + ": amplitudes must be numbers or [re,im]");
    }
    return qcore::make_state(std::move(amps));
}

std::string dump_unitary(const qcore::GateMatrix& u) {
    const std::size_t dim = u.dim();
    std::string out = std::to_string(dim) + "\n";
    char buf[96];
    for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t r = 0; r < dim; ++r) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", u.at(r, c).real(),
                          u.at(r, c).imag());
            out += buf;
        }
    return out;
}

int cmd_gen_circuit(int n, int protocol, const std::string& format,
                    const std::string& out_path) {
    struct Item {
        circuits::Circuit circuit;
        bases::MeasurementBasis basis;
        std::string path;
    };
    std::vector<Item> items;
    const int d = 1 << n;
    if (protocol == 1) {
        items.push_back({circuits::build_protocol1_circuit(n), bases::build_c1(d), out_path});
    } else {
        auto [d1c, d2c] = circuits::build_protocol2_circuits(n);
        items.push_back({std::move(d1c), bases::build_d1(d), with_suffix(out_path, "d1")});
        items.push_back({std::move(d2c), bases::build_d2(d), with_suffix(out_path, "d2")});
    }

    for (const Item& item : items) {
        if (item.circuit.n_qubits() <= 10) {
            const auto map = circuits::outcome_map(item.circuit, item.basis);
            if (map.residual >= 1e-10) {
                std::cerr << "verification failed: " << item.basis.name
                          << " factorization residual " << map.residual << "\n";
                return kExitVerification;
            }
        } else if (format == "unitary-dump") {
            std::cerr << "unitary-dump requires N+1 <= 10\n";
            return kExitUsage;
        }
        if (format == "qasm")
            write_file(item.path, circuits::emit_qasm(item.circuit, true));
        else
            write_file(item.path, dump_unitary(circuits::circuit_unitary(item.circuit)));
        std::cout << "wrote " << item.path << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const sweep::SweepConfig& cfg, const std::string& out_path) {
    const auto rows = sweep::run_sweep(cfg);
    write_file(out_path, sweep::rows_csv(rows));
    const std::string agg_path = with_suffix(out_path, "agg");
    write_file(agg_path, sweep::cells_csv(sweep::aggregate(rows)));
    std::cout << "wrote " << out_path << " and " << agg_path << "\n";
    return kExitOk;
}

int cmd_reconstruct(int protocol, int n, const std::vector<std::string>& counts_args,
                    const std::string& target_path, const std::string& out_path,
                    const std::string& convention) {
    std::map<std::string, sampling::Counts> by_setting;
    for (const std::string& arg : counts_args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--counts", "expected setting=path, got '" + arg + "'");
        const std::string setting = arg.substr(0, eq);
        const std::string path = arg.substr(eq + 1);
        auto counts = reconstruct::parse_counts_file(read_file(path));
        counts.setting = setting;
        if (!counts.complete)
            std::cout << "note: setting " << setting
                      << " lists fewer shots than declared; remainder attributed to "
                         "unlisted outcomes\n";
        by_setting[setting] = std::move(counts);
    }
    const std::vector<std::string> wanted =
        protocol == 1 ? std::vector<std::string>{"z", "c1_phi0", "c1_phi1"}
                      : std::vector<std::string>{"z", "d1", "d2"};
    for (const std::string& key : wanted)
        if (!by_setting.count(key))
            throw CLI::ValidationError("--counts", "missing setting '" + key + "'");

    reconstruct::ReconstructOptions opts;
    opts.convention = convention == "clamped" ? reconstruct::PhaseConvention::ClampedComponents
                                              : reconstruct::PhaseConvention::RawAtan2;
    const auto result =
        protocol == 1
            ? reconstruct::phases_protocol1(n, by_setting["z"], by_setting["c1_phi0"],
                                            by_setting["c1_phi1"], opts)
            : reconstruct::phases_protocol2(n, by_setting["z"], by_setting["d1"],
                                            by_setting["d2"], opts);

    std::printf("amplitudes:");
    for (double a : result.amplitudes) std::printf(" %.6f", a);
    std::printf("\nphases:    ");
    for (double t : result.phases) std::printf(" %+.6f", t);
    std::printf("\n");
    for (const auto& p : result.pairs)
        std::printf("pair (%d,%d) [%s]%s: delta=%+.6f cos=%+.4f sin=%+.4f cond=%.4f%s%s\n",
                    p.k_lo, p.k_hi, p.setting.c_str(), p.in_chain ? "" : " closure",
                    p.delta, p.cos_raw, p.sin_raw, p.conditioning,
                    p.clamped ? " clamped" : "", p.undetermined ? " undetermined" : "");
    if (result.wrap_residual)
        std::printf("wrap residual: %+.6f\n", *result.wrap_residual);

    std::optional<double> fidelity;
    if (!target_path.empty()) {
        const auto target = load_state_file(target_path);
        fidelity = qcore::fidelity(result.estimate, target);
        std::printf("fidelity: %.4f\n", *fidelity);
    }
    if (!out_path.empty()) write_file(out_path, reconstruct::result_to_json(result, fidelity));
    return kExitOk;
}

int cmd_verify(int max_n) {
    const auto results = verify::run_checks(max_n);
    for (const auto& r : results)
        std::printf("%-28s %s  (%.1f ms)%s%s\n", r.name.c_str(),
                    r.pass ? "pass" : "FAIL", r.millis, r.detail.empty() ? "" : "  ",
                    r.detail.c_str());
    return verify::all_passed(results) ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pure-state tomography via partial Fourier bases"};
    app.require_subcommand(1);

    // gen-circuit
    int gc_n = 1, gc_protocol = 1;
    std::string gc_format = "qasm", gc_out;
    auto* gen = app.add_subcommand("gen-circuit", "emit protocol circuits");
    gen->add_option("--n", gc_n, "data qubits")->required()->check(CLI::Range(1, 24));
    gen->add_option("--protocol", gc_protocol)->required()->check(CLI::Range(1, 2));
    gen->add_option("--format", gc_format)->check(CLI::IsMember({"qasm", "unitary-dump"}));
    gen->add_option("--out", gc_out, "output path")->required();

    // sweep
    sweep::SweepConfig cfg;
    std::string sw_out;
    bool sw_clamped = false;
    std::uint64_t sw_seed = default_seed();
    auto* sw = app.add_subcommand("sweep", "fidelity sweep, CSV output");
    sw->add_option("--protocol", cfg.protocol)->required()->check(CLI::Range(1, 2));
    sw->add_option("--n", cfg.n_list, "data qubit counts")->required();
    sw->add_option("--lambda", cfg.lambda_list, "noise scales")->default_val(std::vector<double>{0.0});
    sw->add_option("--shots", cfg.shots_list, "shots per setting (0 = exact)");
    sw->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    sw->add_option("--seed", sw_seed);
    sw->add_flag("--clamped", sw_clamped, "use the clamped phase convention");
    sw->add_option("--out", sw_out, "CSV path")->required();

    // reconstruct
    int rc_protocol = 1, rc_n = 1;
    std::vector<std::string> rc_counts;
    std::string rc_target, rc_out, rc_convention = "raw";
    auto* rc = app.add_subcommand("reconstruct", "reconstruct from counts files");
    rc->add_option("--protocol", rc_protocol)->required()->check(CLI::Range(1, 2));
    rc->add_option("--n", rc_n, "data qubits")->required()->check(CLI::Range(1, 12));
    rc->add_option("--counts", rc_counts, "setting=path (repeatable)")->required();
    rc->add_option("--target", rc_target, "reference state JSON for fidelity");
    rc->add_option("--out", rc_out, "write result JSON here");
    rc->add_option("--convention", rc_convention)->check(CLI::IsMember({"raw", "clamped"}));

    // verify
    int vf_max_n = 3;
    auto* vf = app.add_subcommand("verify", "run self-checks");
    vf->add_option("--max-n", vf_max_n)->check(CLI::Range(1, 6));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen_circuit(gc_n, gc_protocol, gc_format, gc_out);
        if (sw->parsed()) {
            cfg.seed = sw_seed;
            if (sw_clamped)
                cfg.reconstruct_opts.convention = reconstruct::PhaseConvention::ClampedComponents;
            return cmd_sweep(cfg, sw_out);
        }
        if (rc->parsed())
            return cmd_reconstruct(rc_protocol, rc_n, rc_counts, rc_target, rc_out,
                                   rc_convention);
        if (vf->parsed()) return cmd_verify(vf_max_n);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const circuits::CircuitBasisMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
