#include "mbm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "mbm/parallel.hpp"

namespace mbm {

namespace {

bool is_pow2(long long x) { return x > 0 && (x & (x - 1)) == 0; }

int ilog2(long long x) {
    int r = 0;
    while (x > 1) {
        x >>= 1;
        ++r;
    }
    return r;
}

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

long long parse_i64(const std::string& v, int line) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        fail_line(line, "not an integer: '" + v + "'");
    }
    if (pos != v.size()) fail_line(line, "trailing characters in integer '" + v + "'");
    return x;
}

int parse_int(const std::string& v, int line) {
    const long long x = parse_i64(v, line);
    if (x < -1000000000 || x > 1000000000) fail_line(line, "integer out of range: '" + v + "'");
    return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& v, int line) {
    if (!v.empty() && v[0] == '-') fail_line(line, "value must be non-negative: '" + v + "'");
    std::size_t pos = 0;
    std::uint64_t x = 0;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        fail_line(line, "not an integer: '" + v + "'");
    }
    if (pos != v.size()) fail_line(line, "trailing characters in integer '" + v + "'");
    return x;
}

double parse_f64(const std::string& v, int line) {
    std::size_t pos = 0;
    double x = 0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        fail_line(line, "not a number: '" + v + "'");
    }
    if (pos != v.size()) fail_line(line, "trailing characters in number '" + v + "'");
    if (!std::isfinite(x)) fail_line(line, "value must be finite: '" + v + "'");
    return x;
}

std::string format_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void echo_header(std::ostream& os, const ExperimentConfig& cfg, unsigned workers) {
    os << "# tool: " << TOOL_NAME << ' ' << TOOL_VERSION << "\n";
    os << "# workers: " << resolve_workers(workers) << "\n";
    std::istringstream text(dump_config(cfg));
    std::string line;
    while (std::getline(text, line)) os << "# " << line << "\n";
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail_line(line_no, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail_line(line_no, "missing key");
        if (value.empty()) fail_line(line_no, "missing value for '" + key + "'");
        if (!seen.insert(key).second) fail_line(line_no, "duplicate key '" + key + "'");

        if (key == "scheme") {
            if (value == "conventional") {
                cfg.scheme = Scheme::Conventional;
            } else if (value == "mic-sq") {
                cfg.scheme = Scheme::MicSq;
            } else {
                fail_line(line_no, "scheme must be 'conventional' or 'mic-sq'");
            }
        } else if (key == "n") {
            cfg.n = parse_int(value, line_no);
        } else if (key == "k") {
            cfg.k = parse_int(value, line_no);
        } else if (key == "m_rf") {
            cfg.m_rf = parse_int(value, line_no);
        } else if (key == "m") {
            cfg.m = parse_int(value, line_no);
        } else if (key == "n_r") {
            cfg.n_r = parse_int(value, line_no);
        } else if (key == "snr_start") {
            cfg.snr_start = parse_f64(value, line_no);
        } else if (key == "snr_stop") {
            cfg.snr_stop = parse_f64(value, line_no);
        } else if (key == "snr_step") {
            cfg.snr_step = parse_f64(value, line_no);
        } else if (key == "seed") {
            cfg.seed = parse_u64(value, line_no);
        } else if (key == "min_bit_errors") {
            cfg.min_bit_errors = parse_u64(value, line_no);
        } else if (key == "max_blocks") {
            cfg.max_blocks = parse_u64(value, line_no);
        } else if (key == "out") {
            cfg.out = value;
        } else {
            fail_line(line_no, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
    if (!is_pow2(cfg.m)) throw ConfigError("M must be a power of two");
    if (cfg.m < 2) throw ConfigError("M must be at least 2");
    if (cfg.m_rf < 1 || cfg.m_rf > 8) throw ConfigError("m_rf must be in 1..8");
    if (cfg.n_r < 1 || cfg.n_r > 1024) throw ConfigError("n_r must be in 1..1024");
    if (!(cfg.snr_step > 0)) throw ConfigError("snr_step must be positive");
    if (cfg.snr_stop < cfg.snr_start)
        throw ConfigError("snr_stop must not be below snr_start");
    if ((cfg.snr_stop - cfg.snr_start) / cfg.snr_step > 100000)
        throw ConfigError("SNR grid has more than 100000 points");
    if (cfg.min_bit_errors < 1) throw ConfigError("min_bit_errors must be at least 1");
    if (cfg.max_blocks < 1) throw ConfigError("max_blocks must be at least 1");

    if (cfg.scheme == Scheme::Conventional) {
        if (cfg.m != 2 && cfg.m != 4 && cfg.m != 16 && cfg.m != 64)
            throw ConfigError("conventional alphabet size must be 2, 4, 16, or 64");
        return;
    }
    if (cfg.n < 2) throw ConfigError("n must be at least 2");
    if (!is_pow2(cfg.n))
        throw ConfigError("n must be a power of two (each squaring stage doubles the dimension)");
    if (cfg.n > 32) throw ConfigError("n must be at most 32");
    if (cfg.n > (1 << cfg.m_rf) - 1)
        throw ConfigError("n must be at most 2^m_rf - 1 (shortened-code length limit)");
    if (cfg.k < 1 || cfg.k >= cfg.n) throw ConfigError("k must satisfy 1 <= k < n");
    const int levels = ilog2(2LL * cfg.n);
    int log2_a = 0;
    try {
        log2_a = SymbolConstellation::log2_cardinality(cfg.m, levels);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (cfg.k * cfg.m_rf + log2_a > 24)
        throw ConfigError("signal set too large to materialize (over 2^24 blocks)");
}

std::string dump_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "scheme = " << (c.scheme == Scheme::MicSq ? "mic-sq" : "conventional") << "\n";
    os << "n = " << c.n << "\n";
    os << "k = " << c.k << "\n";
    os << "m_rf = " << c.m_rf << "\n";
    os << "m = " << c.m << "\n";
    os << "n_r = " << c.n_r << "\n";
    os << "snr_start = " << format_double(c.snr_start) << "\n";
    os << "snr_stop = " << format_double(c.snr_stop) << "\n";
    os << "snr_step = " << format_double(c.snr_step) << "\n";
    os << "seed = " << c.seed << "\n";
    os << "min_bit_errors = " << c.min_bit_errors << "\n";
    os << "max_blocks = " << c.max_blocks << "\n";
    if (!c.out.empty()) os << "out = " << c.out << "\n";
    return os.str();
}

ExperimentConfig parse_config_echo(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line, buf;
    while (std::getline(in, line)) {
        const std::string s = trim(line);
        if (s.empty() || s[0] != '#') continue;
        const std::string body = trim(s.substr(1));
        if (body.find('=') == std::string::npos) continue;
        buf += body;
        buf += '\n';
    }
    return parse_config(buf);
}

std::vector<double> snr_grid(const ExperimentConfig& cfg) {
    std::vector<double> grid;
    const double slack = 1e-9 * std::max(1.0, std::abs(cfg.snr_stop));
    for (int i = 0;; ++i) {
        const double v = cfg.snr_start + i * cfg.snr_step;
        if (v > cfg.snr_stop + slack) break;
        grid.push_back(v);
    }
    return grid;
}

GaussVec qam_alphabet(int size) {
    if (size == 2) return {GaussInt{-1, 0}, GaussInt{1, 0}};
    if (size == 4 || size == 16 || size == 64) {
        const int side = size == 4 ? 2 : size == 16 ? 4 : 8;
        IntVec levels = pam_levels(side);
        std::sort(levels.begin(), levels.end());
        GaussVec out;
        out.reserve(size);
        for (int re : levels)
            for (int im : levels) out.push_back(GaussInt{re, im});
        return out;
    }
    throw ConfigError("unsupported modulation alphabet size");
}

MbmSignalSet build_signal_set(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.scheme == Scheme::Conventional)
        return MbmSignalSet::conventional(cfg.m_rf, qam_alphabet(cfg.m));
    const Field field(cfg.m_rf);
    const MapIndexCodebook code(field, cfg.n, cfg.k);
    const SymbolConstellation symbols =
        SymbolConstellation::build(cfg.m, ilog2(2LL * cfg.n));
    return MbmSignalSet::coded(code, symbols);
}

double mic_sq_rate(int n, int k, int m_rf, int m) {
    if (n < 2 || !is_pow2(n) || n > 32)
        throw ConfigError("n must be a power of two in 2..32");
    if (k < 1 || k >= n) throw ConfigError("k must satisfy 1 <= k < n");
    if (m_rf < 1 || m_rf > 8) throw ConfigError("m_rf must be in 1..8");
    int log2_a = 0;
    try {
        log2_a = SymbolConstellation::log2_cardinality(m, ilog2(2LL * n));
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return double(k * m_rf + log2_a) / n;
}

double conventional_rate(int m_rf, int m) {
    if (m_rf < 1 || m_rf > 8) throw ConfigError("m_rf must be in 1..8");
    if (m < 2 || !is_pow2(m)) throw ConfigError("M must be a power of two");
    return m_rf + ilog2(m);
}

SimConfig make_sim_config(const ExperimentConfig& cfg, unsigned workers) {
    SimConfig sc;
    sc.seed = cfg.seed;
    sc.n_r = cfg.n_r;
    sc.workers = workers;
    sc.normalize_energy = true;
    sc.stop.min_bit_errors = cfg.min_bit_errors;
    sc.stop.max_blocks = cfg.max_blocks;
    return sc;
}

void write_spectrum_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                        const DistanceSpectrum& spec) {
    echo_header(os, cfg, workers);
    os << "distance,count,percent\n";
    for (const auto& [dist, count] : spec.histogram) {
        const double pct =
            spec.total_pairs ? 100.0 * double(count) / double(spec.total_pairs) : 0.0;
        os << dist << ',' << count << ',' << format_g6(pct) << "\n";
    }
}

void write_bound_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                     const BoundCurve& curve) {
    echo_header(os, cfg, workers);
    os << "snr_db,ber_bound\n";
    for (std::size_t i = 0; i < curve.snr_db.size(); ++i)
        os << format_double(curve.snr_db[i]) << ',' << format_double(curve.ber_bound[i])
           << "\n";
}

void write_ber_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                   const std::vector<BerPoint>& points) {
    echo_header(os, cfg, workers);
    os << "snr_db,ber,bit_errors,bits,blocks,seed\n";
    for (const BerPoint& p : points)
        os << format_double(p.snr_db) << ',' << format_double(p.ber) << ',' << p.bit_errors
           << ',' << p.bits << ',' << p.blocks << ',' << cfg.seed << "\n";
}

void write_ber_vs_nr_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                         const std::vector<BerPoint>& points) {
    echo_header(os, cfg, workers);
    os << "n_r,ber,bit_errors,bits,blocks,seed\n";
    for (const BerPoint& p : points)
        os << p.n_r << ',' << format_double(p.ber) << ',' << p.bit_errors << ',' << p.bits
           << ',' << p.blocks << ',' << cfg.seed << "\n";
}

void write_ebn0_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                    double rate, const std::vector<BerPoint>& points) {
    echo_header(os, cfg, workers);
    os << "ebn0_db,ber,bit_errors,bits,blocks,seed\n";
    for (const BerPoint& p : points)
        os << format_double(ebn0_from_snr(p.snr_db, rate)) << ',' << format_double(p.ber)
           << ',' << p.bit_errors << ',' << p.bits << ',' << p.blocks << ',' << cfg.seed
           << "\n";
}

void write_ranks_csv(std::ostream& os, const ExperimentConfig& cfg, unsigned workers,
                     const RankProfile& profile) {
    echo_header(os, cfg, workers);
    os << "rank,count\n";
    for (const auto& [rank, count] : profile.histogram) os << rank << ',' << count << "\n";
}

namespace {

ExperimentConfig coded_cfg(int n, int k, int m_rf, int m, const FigureOptions& opts) {
    ExperimentConfig c;
    c.scheme = Scheme::MicSq;
    c.n = n;
    c.k = k;
    c.m_rf = m_rf;
    c.m = m;
    c.n_r = 4;
    c.seed = opts.seed;
    return c;
}

ExperimentConfig conv_cfg(int m_rf, int m, const FigureOptions& opts) {
    ExperimentConfig c;
    c.scheme = Scheme::Conventional;
    c.m_rf = m_rf;
    c.m = m;
    c.n_r = 4;
    c.seed = opts.seed;
    return c;
}

void set_grid(ExperimentConfig& c, double start, double stop, double step) {
    c.snr_start = start;
    c.snr_stop = stop;
    c.snr_step = step;
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::function<void(std::ostream&)>& emit) {
    const std::string d = dir.empty() ? "." : dir;
    std::filesystem::create_directories(d);
    const std::string path = (std::filesystem::path(d) / name).string();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    emit(os);
    return path;
}

/// Bisect for the SNR where simulated BER crosses `target` (BER decreasing
/// in SNR).
double snr_for_target_ber(const MbmSignalSet& set, SimConfig sc, double target, double lo,
                          double hi, int iters) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const BerPoint p = simulate_point(set, mid, sc);
        (p.ber > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Simulated curve plus its union bound, the layout shared by the BER-vs-SNR
/// figures.
void sim_and_bound(const ExperimentConfig& cfg, const FigureOptions& opts,
                   const std::string& stem, std::vector<std::string>& files) {
    const MbmSignalSet set = build_signal_set(cfg);
    const std::vector<double> grid = snr_grid(cfg);
    const std::vector<BerPoint> points = ber_curve(set, grid, make_sim_config(cfg, opts.workers));
    files.push_back(write_file(opts.out_dir, stem + "_sim.csv", [&](std::ostream& os) {
        write_ber_csv(os, cfg, opts.workers, points);
    }));
    LinkAnalysisOptions lopts;
    lopts.workers = opts.workers;
    const BoundCurve bound = union_bound(set, grid, cfg.n_r, lopts);
    files.push_back(write_file(opts.out_dir, stem + "_bound.csv", [&](std::ostream& os) {
        write_bound_csv(os, cfg, opts.workers, bound);
    }));
}

} // namespace

std::vector<std::string> run_figure(int figure, const FigureOptions& opts) {
    std::vector<std::string> files;
    switch (figure) {
        case 3: {
            ExperimentConfig prop = coded_cfg(4, 2, 4, 2, opts);
            set_grid(prop, 0, 10, 1);
            prop.max_blocks = 2'000'000;
            sim_and_bound(prop, opts, "fig3_mic_sq", files);

            ExperimentConfig conv = conv_cfg(1, 2, opts);
            set_grid(conv, 0, 18, 1);
            conv.max_blocks = 2'000'000;
            sim_and_bound(conv, opts, "fig3_conventional", files);
            break;
        }
        case 4: {
            ExperimentConfig prop = coded_cfg(4, 2, 6, 2, opts);
            set_grid(prop, 0, 8, 1);
            prop.max_blocks = 300'000;
            sim_and_bound(prop, opts, "fig4_mic_sq", files);

            ExperimentConfig conv = conv_cfg(2, 2, opts);
            set_grid(conv, 0, 14, 1);
            conv.max_blocks = 2'000'000;
            sim_and_bound(conv, opts, "fig4_conventional", files);
            break;
        }
        case 5: {
            std::vector<int> nrs;
            for (int r = 1; r <= 16; ++r) nrs.push_back(r);
            for (double snr : {0.0, 2.0}) {
                for (bool proposed : {true, false}) {
                    ExperimentConfig cfg =
                        proposed ? coded_cfg(4, 2, 6, 2, opts) : conv_cfg(2, 2, opts);
                    set_grid(cfg, snr, snr, 1);
                    cfg.max_blocks = proposed ? 150'000 : 2'000'000;
                    const MbmSignalSet set = build_signal_set(cfg);
                    const std::vector<BerPoint> points =
                        ber_vs_nr(set, snr, nrs, make_sim_config(cfg, opts.workers));
                    const std::string name = std::string("fig5_") +
                                             (proposed ? "mic_sq" : "conventional") + "_snr" +
                                             (snr == 0.0 ? "0" : "2") + "db.csv";
                    files.push_back(write_file(opts.out_dir, name, [&](std::ostream& os) {
                        write_ber_vs_nr_csv(os, cfg, opts.workers, points);
                    }));
                }
            }
            break;
        }
        case 6: {
            const double target = 1e-3;
            for (bool proposed : {true, false}) {
                ExperimentConfig cfg =
                    proposed ? coded_cfg(4, 2, 6, 2, opts) : conv_cfg(2, 2, opts);
                set_grid(cfg, -10, 35, 1);
                cfg.max_blocks = proposed ? 100'000 : 1'000'000;
                const MbmSignalSet set = build_signal_set(cfg);
                SimConfig sc = make_sim_config(cfg, opts.workers);
                const std::string name =
                    std::string("fig6_") + (proposed ? "mic_sq" : "conventional") + ".csv";
                files.push_back(write_file(opts.out_dir, name, [&](std::ostream& os) {
                    echo_header(os, cfg, opts.workers);
                    os << "# target_ber = " << format_double(target) << "\n";
                    os << "n_r,snr_db\n";
                    for (int r = 1; r <= 16; ++r) {
                        sc.n_r = r;
                        const double snr = snr_for_target_ber(set, sc, target, cfg.snr_start,
                                                              cfg.snr_stop, 9);
                        os << r << ',' << format_double(snr) << "\n";
                    }
                }));
            }
            break;
        }
        case 7:
        case 8: {
            ExperimentConfig cfg = figure == 7 ? coded_cfg(4, 2, 4, 2, opts)
                                               : coded_cfg(4, 2, 6, 2, opts);
            set_grid(cfg, 0, figure == 7 ? 36 : 38, 0.5);
            const MbmSignalSet set = build_signal_set(cfg);
            LinkAnalysisOptions lopts;
            lopts.workers = opts.workers;
            const BoundCurve bound = union_bound(set, snr_grid(cfg), cfg.n_r, lopts);
            const std::string name = figure == 7 ? "fig7_bound.csv" : "fig8_bound.csv";
            files.push_back(write_file(opts.out_dir, name, [&](std::ostream& os) {
                write_bound_csv(os, cfg, opts.workers, bound);
            }));
            break;
        }
        case 9: {
            for (bool proposed : {true, false}) {
                ExperimentConfig cfg =
                    proposed ? coded_cfg(4, 2, 4, 2, opts) : conv_cfg(4, 2, opts);
                set_grid(cfg, proposed ? 0 : 6, proposed ? 8 : 18, 1);
                cfg.max_blocks = 2'000'000;
                const MbmSignalSet set = build_signal_set(cfg);
                const std::vector<BerPoint> points =
                    ber_curve(set, snr_grid(cfg), make_sim_config(cfg, opts.workers));
                const std::string name =
                    std::string("fig9_") + (proposed ? "mic_sq" : "conventional") + ".csv";
                files.push_back(write_file(opts.out_dir, name, [&](std::ostream& os) {
                    write_ebn0_csv(os, cfg, opts.workers, set.rate(), points);
                }));
            }
            break;
        }
        default:
            throw ConfigError("figure must be between 3 and 9");
    }
    return files;
}

} // namespace mbm
