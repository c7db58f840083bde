#include "pstomo/sweep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <future>
#include <thread>

#include "pstomo/rng.hpp"

namespace pstomo::sweep {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double trial_fidelity(const SweepConfig& cfg, const sampling::ProtocolBases& pb,
                      int n, double lambda, std::int64_t shots, int trial) {
    const std::uint64_t state_seed =
        rng::derive_seed(cfg.seed, 0x5354'4154ULL, static_cast<std::uint64_t>(n),
                         static_cast<std::uint64_t>(trial));
    const qcore::PureState phi = qcore::haar_random_state(n, state_seed);
    const auto prep = sampling::make_preparation(phi, lambda);

    const std::uint64_t run_key =
        (static_cast<std::uint64_t>(trial) << 16) ^
        (static_cast<std::uint64_t>(n) << 8) ^ static_cast<std::uint64_t>(cfg.protocol);
    const std::uint64_t sample_seed = rng::derive_seed(
        cfg.seed, 0x5357'4545'50ULL, run_key,
        std::bit_cast<std::uint64_t>(lambda) ^ static_cast<std::uint64_t>(shots));

    const auto run = sampling::run_protocol(prep, pb, shots, sample_seed);
    const auto rec = reconstruct::reconstruct_run(run, cfg.reconstruct_opts);
    return qcore::fidelity(rec.estimate, phi);
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
    for (double l : cfg.lambda_list)
        if (l < 0.0 || l > 1.0) throw std::invalid_argument("sweep: lambda must be in [0,1]");

    std::vector<SweepRow> rows;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    for (int n : cfg.n_list) {
        const auto pb = sampling::make_protocol_bases(cfg.protocol, n);
        for (double lambda : cfg.lambda_list) {
            for (std::int64_t shots : cfg.shots_list) {
                std::vector<double> fid(cfg.trials);
                const int chunk =
                    std::max(1, (cfg.trials + static_cast<int>(hw) - 1) / static_cast<int>(hw));
                std::vector<std::future<void>> work;
                for (int start = 0; start < cfg.trials; start += chunk) {
                    const int stop = std::min(cfg.trials, start + chunk);
                    work.push_back(std::async(std::launch::async, [&, start, stop] {
                        for (int t = start; t < stop; ++t)
                            fid[t] = trial_fidelity(cfg, pb, n, lambda, shots, t);
                    }));
                }
                for (auto& w : work) w.get();
                for (int t = 0; t < cfg.trials; ++t)
                    rows.push_back({cfg.protocol, n, lambda, shots, t, fid[t]});
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.protocol, a.n, a.lambda, a.shots, a.trial) <
               std::tie(b.protocol, b.n, b.lambda, b.shots, b.trial);
    });
    return rows;
}

std::vector<SweepCell> aggregate(const std::vector<SweepRow>& rows) {
    std::vector<SweepCell> cells;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < rows.size() && rows[j].protocol == rows[i].protocol &&
               rows[j].n == rows[i].n && rows[j].lambda == rows[i].lambda &&
               rows[j].shots == rows[i].shots) {
            sum += rows[j].fidelity;
            ++j;
        }
        const int count = static_cast<int>(j - i);
        const double mean = sum / count;
        double var = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            const double dev = rows[k].fidelity - mean;
            var += dev * dev;
        }
        const double stddev = count > 1 ? std::sqrt(var / (count - 1)) : 0.0;
        cells.push_back({rows[i].protocol, rows[i].n, rows[i].lambda, rows[i].shots,
                         count, mean, stddev});
        i = j;
    }
    return cells;
}

std::string rows_csv(const std::vector<SweepRow>& rows) {
    std::string out = "protocol,N,lambda,shots,trial,fidelity\n";
    for (const SweepRow& r : rows) {
        out += std::to_string(r.protocol) + "," + std::to_string(r.n) + "," +
               fmt(r.lambda) + "," + std::to_string(r.shots) + "," +
               std::to_string(r.trial) + "," + fmt(r.fidelity) + "\n";
    }
    return out;
}

std::string cells_csv(const std::vector<SweepCell>& cells) {
    std::string out = "protocol,N,lambda,shots,trials,mean_fidelity,std_fidelity\n";
    for (const SweepCell& c : cells) {
        out += std::to_string(c.protocol) + "," + std::to_string(c.n) + "," +
               fmt(c.lambda) + "," + std::to_string(c.shots) + "," +
               std::to_string(c.trials) + "," + fmt(c.mean) + "," + fmt(c.stddev) + "\n";
    }
    return out;
}

}  // namespace pstomo::sweep
