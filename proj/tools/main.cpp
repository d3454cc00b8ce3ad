// sparsedct command line: transforms, sparse recovery and the experiment
// harness (benchmarks and SNR studies) over plain signal files.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparsedct/periodization.hpp"
#include "sparsedct/recovery.hpp"
#include "sparsedct/sampling.hpp"
#include "sparsedct/signal_io.hpp"
#include "sparsedct/transforms.hpp"

using nlohmann::json;
using namespace sparsedct;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kBadArguments = 2, kIoFailure = 3, kInvariantViolation = 4 };

std::string iso_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", &tm);
    return buf;
}

// Per-trial RNG streams derived from (seed, configuration, trial); seed_seq
// keeps the derivation identical across platforms.
std::pair<std::uint64_t, std::uint64_t> derive_seeds(std::uint64_t base, std::uint64_t config,
                                                     std::uint64_t trial) {
    std::seed_seq seq{static_cast<unsigned>(base), static_cast<unsigned>(base >> 32),
                      static_cast<unsigned>(config), static_cast<unsigned>(config >> 32),
                      static_cast<unsigned>(trial), static_cast<unsigned>(trial >> 32)};
    std::array<std::uint32_t, 4> words{};
    seq.generate(words.begin(), words.end());
    return {(std::uint64_t{words[0]} << 32) | words[1], (std::uint64_t{words[2]} << 32) | words[3]};
}

double l2_error_over_n(const Signal& truth, const Signal& found) {
    double s = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = truth[i] - found[i];
        s += d * d;
    }
    return std::sqrt(s) / static_cast<double>(truth.size());
}

bool support_contained(const SupportInfo& truth, const std::optional<SupportInfo>& found) {
    return found && found->mu <= truth.mu && found->nu >= truth.nu;
}

std::string fmt(double v, int precision = 17) {
    std::ostringstream ss;
    ss << std::setprecision(precision) << v;
    return ss.str();
}

struct TrialRecord {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t bound = 0;
    double snr_db = std::numeric_limits<double>::infinity();
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    long trial = 0;
    double error_l2_over_n = 0.0;
    std::uint64_t samples_distinct = 0;
    std::uint64_t samples_total = 0;
    double elapsed_seconds = 0.0;
    double baseline_seconds = 0.0;
    double baseline_error_l2_over_n = 0.0;
    bool support_correct = false;
    bool support_within_3m = false;
    int collision_branches = 0;
    bool empty_support = false;
};

const char* kCsvHeader =
    "record,n,m,bound,snr_db,epsilon,seed,trial,error_l2_over_n,samples_distinct,"
    "samples_total,elapsed_seconds,baseline_seconds,baseline_error_l2_over_n,"
    "support_correct,support_within_3m,collision_branches,empty_support";

void write_row(std::ostream& out, const TrialRecord& r) {
    out << "trial," << r.n << ',' << r.m << ',' << r.bound << ',' << fmt(r.snr_db, 10) << ','
        << fmt(r.epsilon, 10) << ',' << r.seed << ',' << r.trial << ','
        << fmt(r.error_l2_over_n) << ',' << r.samples_distinct << ',' << r.samples_total << ','
        << fmt(r.elapsed_seconds, 9) << ',' << fmt(r.baseline_seconds, 9) << ','
        << fmt(r.baseline_error_l2_over_n) << ',' << (r.support_correct ? 1 : 0) << ','
        << (r.support_within_3m ? 1 : 0) << ',' << r.collision_branches << ','
        << (r.empty_support ? 1 : 0) << '\n';
}

// Mean/rate summary over one configuration; the support columns carry the
// rates as fractions in [0,1], the trial column carries the trial count.
void write_aggregate(std::ostream& out, const std::vector<TrialRecord>& rows) {
    if (rows.empty()) return;
    TrialRecord a = rows.front();
    double err = 0, base_err = 0, el = 0, base_el = 0, corr = 0, within = 0;
    double samples = 0, total = 0;
    int collisions = 0, empties = 0;
    for (const auto& r : rows) {
        err += r.error_l2_over_n;
        base_err += r.baseline_error_l2_over_n;
        el += r.elapsed_seconds;
        base_el += r.baseline_seconds;
        corr += r.support_correct ? 1.0 : 0.0;
        within += r.support_within_3m ? 1.0 : 0.0;
        samples += static_cast<double>(r.samples_distinct);
        total += static_cast<double>(r.samples_total);
        collisions = std::max(collisions, r.collision_branches);
        empties += r.empty_support ? 1 : 0;
    }
    const double k = static_cast<double>(rows.size());
    out << "aggregate," << a.n << ',' << a.m << ',' << a.bound << ',' << fmt(a.snr_db, 10) << ','
        << fmt(a.epsilon, 10) << ',' << a.seed << ',' << rows.size() << ',' << fmt(err / k) << ','
        << fmt(samples / k, 10) << ',' << fmt(total / k, 10) << ',' << fmt(el / k, 9) << ','
        << fmt(base_el / k, 9) << ',' << fmt(base_err / k) << ',' << fmt(corr / k, 6) << ','
        << fmt(within / k, 6) << ',' << collisions << ',' << empties << '\n';
}

void write_manifest(const std::string& csv_path, const std::string& command, json parameters) {
    json manifest{{"command", command},
                  {"parameters", std::move(parameters)},
                  {"rng_algorithm", kRngAlgorithm},
                  {"tool_version", kVersion},
                  {"timestamp", iso_timestamp()}};
    const std::string path = csv_path + ".manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << manifest.dump(2) << '\n';
    if (!out.flush()) throw IoError("write error on " + path);
}

json stats_json(const RecoveryStats& stats, std::size_t n, std::size_t bound, double epsilon,
                RecoveryVariant variant) {
    json j{{"n", n},
           {"bound", bound},
           {"variant", variant == RecoveryVariant::Bounded ? "bounded" : "exact"},
           {"epsilon", epsilon},
           {"samples_distinct", stats.samples_distinct},
           {"samples_total", stats.samples_total},
           {"elapsed_seconds", stats.elapsed_seconds},
           {"collision_branches", stats.collision_branches},
           {"empty_support", stats.empty_support},
           {"fallback_dense", stats.fallback_dense},
           {"branches", stats.branches_string()}};
    if (stats.support) {
        j["support"] = {{"mu", stats.support->mu}, {"length", stats.support->length}};
    } else {
        j["support"] = nullptr;
    }
    return j;
}

TransformKind kind_from_string(const std::string& name) {
    if (name == "dct2") return TransformKind::Dct2;
    if (name == "dct3") return TransformKind::Dct3;
    if (name == "dct4") return TransformKind::Dct4;
    if (name == "dst4") return TransformKind::Dst4;
    throw std::invalid_argument("unknown transform kind: " + name);
}

// Noise thresholds per SNR used when none are given on the command line;
// known for support lengths 100 and 1000.
std::map<double, double> default_epsilon_table(std::size_t m) {
    if (m == 100) {
        return {{0, 2.50}, {10, 2.00}, {20, 1.00}, {30, 0.40}, {40, 0.15}, {50, 0.05}};
    }
    if (m == 1000) {
        return {{0, 2.50}, {10, 2.10}, {20, 1.50}, {30, 0.85}, {40, 0.20}, {50, 0.10}};
    }
    return {};
}

double lookup_epsilon(const std::map<double, double>& table, double snr) {
    for (const auto& [key, value] : table) {
        if (std::abs(key - snr) < 1e-9) return value;
    }
    throw std::invalid_argument("no epsilon configured for SNR " + fmt(snr, 6) +
                                "; pass --epsilon-for " + fmt(snr, 6) + "=<value>");
}

// ---------------------------------------------------------------- commands

struct GenOptions {
    std::size_t n = 0;
    std::size_t m = 0;
    std::optional<std::size_t> mu;
    double epsilon = 1e-4;
    std::uint64_t seed = 0;
    std::string out;
    std::string spectrum_out;
    std::string format = "text";
};

int cmd_gen(const GenOptions& opt) {
    const SignalFormat format = format_from_string(opt.format);
    const int level = level_of_length(opt.n);
    Signal x = generate_signal({level, opt.m, opt.mu, opt.epsilon, opt.seed});
    auto support = detect_support(x, 0.0);
    std::ostringstream header;
    header << "sparsedct gen v" << kVersion << "\nn=" << opt.n << " m=" << opt.m
           << " mu=" << support->mu << " epsilon=" << opt.epsilon << " seed=" << opt.seed
           << " rng=" << kRngAlgorithm;
    write_signal(opt.out, x, format, header.str());
    if (!opt.spectrum_out.empty()) {
        write_signal(opt.spectrum_out, dct2_fast(x), format, header.str() + "\nspectrum (dct2)");
    }
    return kOk;
}

struct TransformOptions {
    std::string input;
    std::string kind = "dct2";
    bool naive = false;
    std::string out;
    std::string format = "text";
};

int cmd_transform(const TransformOptions& opt) {
    const SignalFormat format = format_from_string(opt.format);
    Signal x = read_signal(opt.input, format);
    require_signal(x, opt.input.c_str());
    Signal y = apply_transform(kind_from_string(opt.kind), x, !opt.naive);
    write_signal(opt.out, y, format);
    return kOk;
}

struct RecoverOptions {
    std::string input;
    std::size_t bound = 0;
    std::optional<std::size_t> exact_m;
    double epsilon = 1e-4;
    std::string out;
    std::string stats_out;
    std::string format = "text";
};

int cmd_recover(const RecoverOptions& opt) {
    const SignalFormat format = format_from_string(opt.format);
    Signal spectrum = read_signal(opt.input, format);
    require_signal(spectrum, opt.input.c_str());
    SpectrumSource source(std::move(spectrum));

    RecoveryResult result;
    std::size_t bound = 0;
    RecoveryVariant variant = RecoveryVariant::Bounded;
    if (opt.exact_m) {
        bound = *opt.exact_m;
        variant = RecoveryVariant::ExactLength;
        result = sparse_idct_exact(source, source.size(), bound, opt.epsilon);
    } else {
        if (opt.bound == 0) {
            throw std::invalid_argument("recover: pass --bound M or --exact-m m");
        }
        bound = opt.bound;
        result = sparse_idct(source, source.size(), {bound, opt.epsilon, variant});
    }
    write_signal(opt.out, result.x, format);

    const json stats = stats_json(result.stats, source.size(), bound, opt.epsilon, variant);
    if (opt.stats_out.empty()) {
        std::cout << stats.dump() << '\n';
    } else {
        std::ofstream out(opt.stats_out, std::ios::app);
        if (!out) throw IoError("cannot open " + opt.stats_out + " for writing");
        out << stats.dump() << '\n';
    }
    return kOk;
}

struct BenchOptions {
    std::size_t n = 0;
    std::vector<std::size_t> m_list;
    std::string bound_rule = "3m";
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    double epsilon = 1e-4;
    std::string out;
};

TrialRecord run_trial(std::size_t n, std::size_t m, std::size_t bound, RecoveryVariant variant,
                      double epsilon, double snr_db, std::uint64_t base_seed,
                      std::uint64_t config_id, std::uint64_t trial, bool with_baseline) {
    const int level = level_of_length(n);
    const auto [sig_seed, noise_seed] = derive_seeds(base_seed, config_id, trial);
    Signal x = generate_signal({level, m, std::nullopt, epsilon, sig_seed});
    const SupportInfo truth = *detect_support(x, 0.0);
    Signal spectrum = dct2_fast(x);
    if (std::isfinite(snr_db)) {
        spectrum = add_noise(spectrum, {snr_db, noise_seed});
    }

    TrialRecord r;
    r.n = n;
    r.m = m;
    r.bound = bound;
    r.snr_db = snr_db;
    r.epsilon = epsilon;
    r.seed = sig_seed;
    r.trial = static_cast<long>(trial);

    SpectrumSource source(spectrum);
    RecoveryResult result = variant == RecoveryVariant::ExactLength
                                ? sparse_idct_exact(source, n, bound, epsilon)
                                : sparse_idct(source, n, {bound, epsilon, variant});
    r.error_l2_over_n = l2_error_over_n(x, result.x);
    r.samples_distinct = result.stats.samples_distinct;
    r.samples_total = result.stats.samples_total;
    r.elapsed_seconds = result.stats.elapsed_seconds;
    r.collision_branches = result.stats.collision_branches;
    r.empty_support = result.stats.empty_support;
    r.support_correct = support_contained(truth, result.stats.support);
    r.support_within_3m =
        r.support_correct && result.stats.support->length <= 3 * truth.length;

    if (with_baseline) {
        const auto t0 = std::chrono::steady_clock::now();
        Signal dense = dct3_fast(spectrum);
        r.baseline_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.baseline_error_l2_over_n = l2_error_over_n(x, dense);
    }
    return r;
}

int cmd_bench(const BenchOptions& opt) {
    const bool exact_rule = opt.bound_rule == "exact";
    std::ofstream csv(opt.out);
    if (!csv) throw IoError("cannot open " + opt.out + " for writing");
    csv << kCsvHeader << '\n';

    std::uint64_t config_id = 0;
    for (std::size_t m : opt.m_list) {
        const std::size_t bound = exact_rule ? m : 3 * m;
        ++config_id;
        if (bound > opt.n) {
            std::cerr << "note: skipping m=" << m << " (bound " << bound << " exceeds n=" << opt.n
                      << ")\n";
            continue;
        }
        std::vector<TrialRecord> rows;
        rows.reserve(opt.trials);
        for (std::uint64_t trial = 0; trial < opt.trials; ++trial) {
            TrialRecord r = run_trial(
                opt.n, m, bound,
                exact_rule ? RecoveryVariant::ExactLength : RecoveryVariant::Bounded, opt.epsilon,
                std::numeric_limits<double>::infinity(), opt.seed, config_id, trial, true);
            write_row(csv, r);
            rows.push_back(r);
        }
        write_aggregate(csv, rows);
    }
    if (!csv.flush()) throw IoError("write error on " + opt.out);

    write_manifest(opt.out, "bench",
                   json{{"n", opt.n},
                        {"m", opt.m_list},
                        {"bound_rule", opt.bound_rule},
                        {"trials", opt.trials},
                        {"seed", opt.seed},
                        {"epsilon", opt.epsilon}});
    return kOk;
}

struct NoiseStudyOptions {
    std::size_t n = 0;
    std::size_t m = 0;
    std::string bound_rule = "3m";
    std::vector<double> snr_list = {0, 10, 20, 30, 40, 50};
    std::vector<std::string> epsilon_for;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_noise_study(const NoiseStudyOptions& opt) {
    const bool exact_rule = opt.bound_rule == "exact";
    const std::size_t bound = exact_rule ? opt.m : 3 * opt.m;
    if (bound > opt.n) {
        throw std::invalid_argument("noise-study: bound " + std::to_string(bound) +
                                    " exceeds n=" + std::to_string(opt.n));
    }

    std::map<double, double> table = default_epsilon_table(opt.m);
    for (const std::string& entry : opt.epsilon_for) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--epsilon-for expects SNR=epsilon, got: " + entry);
        }
        table[std::stod(entry.substr(0, eq))] = std::stod(entry.substr(eq + 1));
    }
    // fail before any work if a requested SNR has no threshold
    for (double snr : opt.snr_list) {
        if (std::isfinite(snr)) lookup_epsilon(table, snr);
    }

    std::ofstream csv(opt.out);
    if (!csv) throw IoError("cannot open " + opt.out + " for writing");
    csv << kCsvHeader << '\n';

    std::uint64_t config_id = 0;
    for (double snr : opt.snr_list) {
        const double epsilon = std::isfinite(snr) ? lookup_epsilon(table, snr) : 1e-4;
        ++config_id;
        std::vector<TrialRecord> rows;
        rows.reserve(opt.trials);
        for (std::uint64_t trial = 0; trial < opt.trials; ++trial) {
            TrialRecord r = run_trial(
                opt.n, opt.m, bound,
                exact_rule ? RecoveryVariant::ExactLength : RecoveryVariant::Bounded, epsilon, snr,
                opt.seed, config_id, trial, false);
            write_row(csv, r);
            rows.push_back(r);
        }
        write_aggregate(csv, rows);
    }
    if (!csv.flush()) throw IoError("write error on " + opt.out);

    write_manifest(opt.out, "noise-study",
                   json{{"n", opt.n},
                        {"m", opt.m},
                        {"bound_rule", opt.bound_rule},
                        {"snr", opt.snr_list},
                        {"epsilon_for", opt.epsilon_for},
                        {"trials", opt.trials},
                        {"seed", opt.seed}});
    return kOk;
}

template <typename Fn>
int run_guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArguments;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvariantViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse fast DCT toolkit: transforms, short-support recovery, experiments"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a short-support signal and its spectrum");
    gen_cmd->add_option("--n", gen.n, "signal length (power of two)")->required();
    gen_cmd->add_option("--m", gen.m, "support length")->required();
    gen_cmd->add_option("--mu", gen.mu, "first support index (random when omitted)");
    gen_cmd->add_option("--epsilon", gen.epsilon, "floor for the endpoint entries");
    gen_cmd->add_option("--seed", gen.seed, "RNG seed");
    gen_cmd->add_option("--out", gen.out, "signal output path")->required();
    gen_cmd->add_option("--spectrum-out", gen.spectrum_out, "also write the DCT-II spectrum");
    gen_cmd->add_option("--format", gen.format, "text|bin");

    TransformOptions tr;
    auto* tr_cmd = app.add_subcommand("transform", "apply a transform to a signal file");
    tr_cmd->add_option("input", tr.input, "input signal path")->required();
    tr_cmd->add_option("--kind", tr.kind, "dct2|dct3|dct4|dst4")->required();
    auto* fast_flag = tr_cmd->add_flag("--fast", "use the fast algorithm (default)");
    tr_cmd->add_flag("--naive", tr.naive, "use the dense O(n^2) algorithm")->excludes(fast_flag);
    tr_cmd->add_option("--out", tr.out, "output path")->required();
    tr_cmd->add_option("--format", tr.format, "text|bin");

    RecoverOptions rec;
    auto* rec_cmd = app.add_subcommand("recover", "sparse inverse DCT-II of a spectrum file");
    rec_cmd->add_option("input", rec.input, "spectrum path")->required();
    rec_cmd->add_option("--bound", rec.bound, "upper bound M on the support length");
    rec_cmd->add_option("--exact-m", rec.exact_m, "exactly known support length");
    rec_cmd->add_option("--epsilon", rec.epsilon, "noise threshold");
    rec_cmd->add_option("--out", rec.out, "recovered signal path")->required();
    rec_cmd->add_option("--stats-out", rec.stats_out, "append a JSON stats line here");
    rec_cmd->add_option("--format", rec.format, "text|bin");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "runtime/error benchmark vs the dense inverse");
    bench_cmd->add_option("--n", bench.n, "signal length (power of two)")->required();
    bench_cmd->add_option("--m", bench.m_list, "support length (repeatable)")->required();
    bench_cmd->add_option("--bound-rule", bench.bound_rule, "exact|3m")
        ->check(CLI::IsMember({"exact", "3m"}));
    bench_cmd->add_option("--trials", bench.trials, "trials per configuration");
    bench_cmd->add_option("--seed", bench.seed, "base seed");
    bench_cmd->add_option("--epsilon", bench.epsilon, "recovery threshold");
    bench_cmd->add_option("--out", bench.out, "CSV output path")->required();

    NoiseStudyOptions study;
    auto* study_cmd = app.add_subcommand("noise-study", "recovery rates across SNR levels");
    study_cmd->add_option("--n", study.n, "signal length (power of two)")->required();
    study_cmd->add_option("--m", study.m, "support length")->required();
    study_cmd->add_option("--bound-rule", study.bound_rule, "exact|3m")
        ->check(CLI::IsMember({"exact", "3m"}));
    study_cmd->add_option("--snr", study.snr_list, "SNR levels in dB (repeatable)");
    study_cmd->add_option("--epsilon-for", study.epsilon_for,
                          "per-SNR threshold as SNR=epsilon (repeatable)");
    study_cmd->add_option("--trials", study.trials, "trials per SNR");
    study_cmd->add_option("--seed", study.seed, "base seed");
    study_cmd->add_option("--out", study.out, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadArguments;
    }

    if (gen_cmd->parsed()) return run_guarded([&] { return cmd_gen(gen); });
    if (tr_cmd->parsed()) return run_guarded([&] { return cmd_transform(tr); });
    if (rec_cmd->parsed()) return run_guarded([&] { return cmd_recover(rec); });
    if (bench_cmd->parsed()) return run_guarded([&] { return cmd_bench(bench); });
    if (study_cmd->parsed()) return run_guarded([&] { return cmd_noise_study(study); });
    return kBadArguments;
}
