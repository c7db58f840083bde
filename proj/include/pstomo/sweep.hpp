#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pstomo/reconstruct.hpp"
#include "pstomo/sampling.hpp"

namespace pstomo::sweep {

/// Fidelity sweep over system sizes, noise scales and shot budgets.
/// shots = 0 is exact mode. Trials run concurrently; every trial draws its
/// state and samples from substreams keyed by (seed, N, trial, ...), so the
/// output is independent of scheduling.
struct SweepConfig {
    int protocol = 1;
    std::vector<int> n_list;
    std::vector<double> lambda_list{0.0};
    std::vector<std::int64_t> shots_list{0};
    int trials = 1;
    std::uint64_t seed = 0;
    reconstruct::ReconstructOptions reconstruct_opts;
};

struct SweepRow {
    int protocol = 1;
    int n = 1;
    double lambda = 0.0;
    std::int64_t shots = 0;
    int trial = 0;
    double fidelity = 0.0;
};

struct SweepCell {
    int protocol = 1;
    int n = 1;
    double lambda = 0.0;
    std::int64_t shots = 0;
    int trials = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

/// Fidelity of one reconstructed trial against its generating state. The
/// Haar state depends only on (seed, n, trial); sampling substreams also mix
/// in protocol, lambda and shots.
double trial_fidelity(const SweepConfig& cfg, const sampling::ProtocolBases& pb,
                      int n, double lambda, std::int64_t shots, int trial);

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
std::vector<SweepCell> aggregate(const std::vector<SweepRow>& rows);

std::string rows_csv(const std::vector<SweepRow>& rows);
std::string cells_csv(const std::vector<SweepCell>& cells);

}  // namespace pstomo::sweep
