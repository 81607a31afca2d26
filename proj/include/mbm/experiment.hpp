#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbm/channel.hpp"
#include "mbm/link_analysis.hpp"
#include "mbm/signal_set.hpp"

namespace mbm {

inline constexpr const char* TOOL_NAME = "mbmsim";
inline constexpr const char* TOOL_VERSION = "1.0.0";

/// Configuration or parameter-validation failure. The CLI reports these as
/// exit code 2; runtime size caps (std::length_error) map to exit code 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scheme { Conventional, MicSq };

/// One experiment: a signal-set recipe plus channel and sweep parameters.
/// `m` is the symbol alphabet size: the starting amplitude-grid order for
/// mic-sq, the QAM/BPSK size for conventional. `n` and `k` are ignored by the
/// conventional scheme (single channel use).
struct ExperimentConfig {
    Scheme scheme = Scheme::MicSq;
    int n = 4;
    int k = 2;
    int m_rf = 4;
    int m = 2;
    int n_r = 4;
    double snr_start = 0.0;
    double snr_stop = 10.0;
    double snr_step = 1.0;
    std::uint64_t seed = 1;
    std::uint64_t min_bit_errors = 100;
    std::uint64_t max_blocks = 10'000'000;
    std::string out;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parse `key = value` lines; `#` starts a comment. Unknown or duplicate keys
/// and malformed values are rejected with the line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Check every parameter combination against the module preconditions it will
/// hit, before any compute starts. Throws ConfigError naming the violation.
void validate_config(const ExperimentConfig& cfg);

/// Serialize in the config-file syntax; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& cfg);

/// Recover the config from a CSV written by the writers below: collects the
/// commented `# key = value` echo lines and parses them.
ExperimentConfig parse_config_echo(const std::string& csv_text);

/// Shortest decimal representation that parses back to exactly `v`.
std::string format_double(double v);

std::vector<double> snr_grid(const ExperimentConfig& cfg);

/// {-1, 1} for size 2; the square grid with coordinates {+/-1, ..., +/-(side-1)}
/// for sizes 4, 16, 64; ordered by (re, im) ascending.
GaussVec qam_alphabet(int size);

MbmSignalSet build_signal_set(const ExperimentConfig& cfg);
SimConfig make_sim_config(const ExperimentConfig& cfg, unsigned workers);

/// Rate of the coded construction in bits per channel use, from the closed
/// form (k * m_rf + log2 |A|) / n. Does not require the codebook to be
/// constructible (n may exceed 2^m_rf - 1).
double mic_sq_rate(int n, int k, int m_rf, int m);

/// Rate of the single-use index-modulation set: m_rf + log2(alphabet size).
double conventional_rate(int m_rf, int m);

/// CSV writers. Each emits `# tool:` and `# workers:` lines, the config echo
/// (`# key = value`, recoverable via parse_config_echo), a header row, then
/// data rows.
void write_spectrum_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                        const DistanceSpectrum& spec);
void write_bound_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                     const BoundCurve& curve);
void write_ber_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                   const std::vector<BerPoint>& points);
void write_ber_vs_nr_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                         const std::vector<BerPoint>& points);
void write_ebn0_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                    double rate, const std::vector<BerPoint>& points);
void write_ranks_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                     const RankProfile& profile);

struct FigureOptions {
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::string out_dir = ".";
};

/// Run one of the canned result-figure experiments (3 through 9) at desk
/// scale and write its CSV files into out_dir. Returns the paths written.
///   3: BER vs SNR, 2.25 bpcu coded set vs 2 bpcu conventional, with bounds
///   4: BER vs SNR, 3.25 bpcu coded set vs 3 bpcu conventional, with bounds
///   5: BER vs receive antennas at 0 and 2 dB, 3.25 vs 3 bpcu
///   6: SNR needed for BER 1e-3 vs receive antennas, 3.25 vs 3 bpcu
///   7: bound-only deep-BER curve, 2.25 bpcu coded set
///   8: bound-only deep-BER curve, 3.25 bpcu coded set
///   9: BER vs Eb/N0 at equal mirror count, 2.25 bpcu coded vs 5 bpcu conventional
std::vector<std::string> run_figure(int figure, const FigureOptions& opts);

} // namespace mbm
