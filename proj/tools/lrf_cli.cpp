// lrf: design, analyze, run, detect and simulate from the command line.
// Exit codes: 0 success, 2 usage error, 3 validation or numerical rejection.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrf/csv_io.hpp"
#include "lrf/design_document.hpp"
#include "lrf/detectors.hpp"
#include "lrf/response_analysis.hpp"
#include "lrf/scenario_sim.hpp"
#include "lrf/streaming_estimator.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRejected = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "-" or empty means stdin/stdout.
class Input {
public:
    explicit Input(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path);
        if (!file_) throw UsageError("cannot open input file: " + path);
    }
    std::istream& stream() { return file_.is_open() ? file_ : std::cin; }

private:
    std::ifstream file_;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_.open(path);
        if (!file_) throw UsageError("cannot open output file: " + path);
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

lrf::DesignDocument load_doc(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw UsageError("cannot open design document: " + path);
    return lrf::load_design_document(path);
}

std::shared_ptr<const lrf::FilterRealization> shared_realization(const std::string& path) {
    return std::make_shared<const lrf::FilterRealization>(load_doc(path).realization);
}

double parse_real(const std::string& text, const char* what) {
    const auto v = lrf::parse_number(text);
    if (!v) throw UsageError(std::string(what) + " is not a number: " + text);
    return *v;
}

// design --------------------------------------------------------------------

struct DesignArgs {
    int kappa = 0;
    double p = 0.0;
    int kx = 2;
    int kt = 1;
    std::string q = "auto";
    double ts = 1.0;
    std::string out;
};

void cmd_design(const DesignArgs& a) {
    lrf::DesignSpec spec{
        .weight = lrf::WeightSpec::make(a.kappa, a.p),
        .model_order = a.kx,
        .derivative_count = a.kt,
        .delay = a.q == "auto" ? std::nullopt : std::optional<double>(parse_real(a.q, "--q")),
        .sample_period = a.ts,
    };
    const auto doc = lrf::make_design_document(spec);
    Output out(a.out);
    out.stream() << lrf::to_json(doc);
}

// analyze -------------------------------------------------------------------

struct AnalyzeArgs {
    std::string design;
    int grid = lrf::kDefaultGridSize;
    std::string out;
    std::string summary;
};

void cmd_analyze(const AnalyzeArgs& a) {
    const auto doc = load_doc(a.design);
    const auto& r = doc.realization;
    const auto report = lrf::response_report(r, a.grid);

    Output out(a.out);
    std::vector<std::string> names{"f"};
    for (int k = 0; k < r.spec.derivative_count; ++k) {
        names.push_back("re_h" + std::to_string(k));
        names.push_back("im_h" + std::to_string(k));
    }
    names.push_back("distortion");
    lrf::write_header(out.stream(), names);
    std::vector<double> row;
    for (std::size_t i = 0; i < report.freqs.size(); ++i) {
        row.assign({report.freqs[i]});
        for (const auto& h : report.H[i]) {
            row.push_back(h.real());
            row.push_back(h.imag());
        }
        row.push_back(report.distortion[i]);
        lrf::write_row(out.stream(), row);
    }

    const nlohmann::json summary = {
        {"resolved_q", r.delay()},
        {"vrf_diagonal", std::vector<double>(r.vrf.diagonal().begin(), r.vrf.diagonal().end())},
        {"f_c", report.f_c ? nlohmann::json(*report.f_c) : nlohmann::json(nullptr)},
        {"group_delay_dc", report.group_delay_dc},
        {"grid", a.grid},
    };
    if (!a.summary.empty()) {
        Output s(a.summary);
        s.stream() << summary.dump(2) << '\n';
    } else if (!a.out.empty() && a.out != "-") {
        std::cout << summary.dump(2) << '\n';
    }
}

// run -----------------------------------------------------------------------

struct StreamArgs {
    std::string input;
    std::string out;
    std::optional<int> column;
    double sigma0 = 0.0;
};

void cmd_run(const std::string& design, const StreamArgs& a) {
    auto realization = shared_realization(design);
    const int kt = realization->spec.derivative_count;
    lrf::StreamingEstimator estimator(realization, a.sigma0);

    Input in(a.input);
    Output out(a.out);
    lrf::CsvColumnReader reader(in.stream(), a.column);
    std::vector<std::string> names{"n"};
    for (int k = 0; k < kt; ++k) names.push_back("estimate_" + std::to_string(k));
    names.push_back("sigma_eps2");
    for (int k = 0; k < kt; ++k) names.push_back("variance_" + std::to_string(k));

    bool first = true;
    std::vector<double> row;
    while (const auto x = reader.next()) {
        if (first) lrf::write_header(out.stream(), names);
        first = false;
        const auto frame = estimator.push(*x);
        row.assign({static_cast<double>(frame.n)});
        for (int k = 0; k < kt; ++k) row.push_back(frame.estimates(k));
        row.push_back(frame.sigma_eps2);
        for (int k = 0; k < kt; ++k) row.push_back(frame.variance(k));
        lrf::write_row(out.stream(), row);
    }
}

// detect --------------------------------------------------------------------

struct DetectArgs {
    std::string kind;
    std::string design;
    std::string design_a;
    std::string design_b;
    std::string threshold;
};

template <typename Detector>
void drain(Detector& detector, lrf::CsvColumnReader& reader, std::ostream& out) {
    const std::vector<std::string> names{"n", "z", "event"};
    bool first = true;
    auto emit = [&](const std::vector<lrf::DetectorOutput>& rows) {
        for (const auto& r : rows) {
            out << r.n << ',' << lrf::format_number(r.z) << ',' << (r.event ? lrf::to_string(*r.event) : "")
                << '\n';
        }
    };
    while (const auto x = reader.next()) {
        if (first) lrf::write_header(out, names);
        first = false;
        emit(detector.push(*x));
    }
    emit(detector.finish());
}

void cmd_detect(const DetectArgs& d, const StreamArgs& a) {
    const double threshold = parse_real(d.threshold, "--threshold");
    const bool change = d.kind == "change";
    if (change && (d.design_a.empty() || d.design_b.empty())) {
        throw UsageError("change detection needs --design-a and --design-b");
    }
    if (!change && d.design.empty()) throw UsageError(d.kind + " detection needs --design");

    Input in(a.input);
    Output out(a.out);
    lrf::CsvColumnReader reader(in.stream(), a.column);
    if (d.kind == "edge") {
        lrf::EdgeDetector det(shared_realization(d.design), threshold, a.sigma0);
        drain(det, reader, out.stream());
    } else if (d.kind == "peak") {
        lrf::PeakDetector det(shared_realization(d.design), threshold, a.sigma0);
        drain(det, reader, out.stream());
    } else {
        lrf::ChangeDetector det(shared_realization(d.design_a), shared_realization(d.design_b), threshold, a.sigma0);
        drain(det, reader, out.stream());
    }
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
    std::string scenario;
    std::uint64_t seed = 1;
    std::optional<int> samples;
    std::optional<double> noise_std;
    std::string out;
};

void cmd_simulate(const SimulateArgs& a) {
    Output out(a.out);
    auto& os = out.stream();
    if (a.scenario == "target-constant-accel" || a.scenario == "target-random-accel") {
        auto s = a.scenario == "target-constant-accel" ? lrf::constant_accel_scenario(a.seed)
                                                       : lrf::random_accel_scenario(a.seed);
        if (a.samples) s.samples = *a.samples;
        if (a.noise_std) s.noise_std = *a.noise_std;
        const auto track = lrf::simulate_target(s);
        const std::vector<std::string> names{"n", "position", "velocity", "acceleration", "measurement"};
        lrf::write_header(os, names);
        for (int n = 0; n < s.samples; ++n) {
            const double row[] = {static_cast<double>(n), track.truth(n, 0), track.truth(n, 1), track.truth(n, 2),
                                  track.measurements(n)};
            lrf::write_row(os, row);
        }
        return;
    }
    if (a.samples) throw UsageError("--samples applies to target scenarios only");
    const double noise = a.noise_std.value_or(lrf::kDefaultWaveformNoise);
    std::vector<double> x;
    if (a.scenario == "edge") x = lrf::synth_edge_waveform(a.seed, noise);
    else if (a.scenario == "peak") x = lrf::synth_peak_waveform(a.seed, noise);
    else x = lrf::synth_change_waveform(a.seed, noise);
    const std::vector<std::string> names{"n", "measurement"};
    lrf::write_header(os, names);
    for (std::size_t n = 0; n < x.size(); ++n) {
        const double row[] = {static_cast<double>(n), x[n]};
        lrf::write_row(os, row);
    }
}

void add_stream_options(CLI::App* cmd, StreamArgs& a) {
    cmd->add_option("--input", a.input, "input CSV (default stdin)");
    cmd->add_option("--out", a.out, "output CSV (default stdout)");
    cmd->add_option("--column", a.column, "0-based input column (default last)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--sigma0", a.sigma0, "coarse initial noise variance")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recursive Erlang-weighted polynomial regression filters"};
    app.require_subcommand(1);

    DesignArgs design;
    auto* design_cmd = app.add_subcommand("design", "synthesize a filter and write its design document");
    design_cmd->add_option("--kappa", design.kappa, "weight shape")->required();
    design_cmd->add_option("--p", design.p, "smoothing parameter in (0, 1)")->required();
    design_cmd->add_option("--kx", design.kx, "polynomial model order (degree + 1)")->required();
    design_cmd->add_option("--kt", design.kt, "number of derivative outputs")->capture_default_str();
    design_cmd->add_option("--q", design.q, "delay in samples, or auto")->capture_default_str();
    design_cmd->add_option("--ts", design.ts, "sample period in seconds")->capture_default_str();
    design_cmd->add_option("--out", design.out, "output JSON (default stdout)");

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "frequency response CSV and JSON summary");
    analyze_cmd->add_option("--design", analyze.design, "design document")->required();
    analyze_cmd->add_option("--grid", analyze.grid, "frequency grid size")->capture_default_str();
    analyze_cmd->add_option("--out", analyze.out, "response CSV (default stdout)");
    analyze_cmd->add_option("--summary", analyze.summary, "summary JSON path");

    std::string run_design;
    StreamArgs run;
    auto* run_cmd = app.add_subcommand("run", "stream samples through a designed filter");
    run_cmd->add_option("--design", run_design, "design document")->required();
    add_stream_options(run_cmd, run);

    DetectArgs detect;
    StreamArgs detect_io;
    auto* detect_cmd = app.add_subcommand("detect", "edge, peak or change detection");
    detect_cmd->add_option("--kind", detect.kind, "edge | peak | change")
        ->required()
        ->check(CLI::IsMember({"edge", "peak", "change"}));
    detect_cmd->add_option("--design", detect.design, "design document (edge, peak)");
    detect_cmd->add_option("--design-a", detect.design_a, "new-data filter (change)");
    detect_cmd->add_option("--design-b", detect.design_b, "old-data filter (change)");
    detect_cmd->add_option("--threshold", detect.threshold, "detection threshold, may be inf")->required();
    add_stream_options(detect_cmd, detect_io);

    SimulateArgs simulate;
    auto* simulate_cmd = app.add_subcommand("simulate", "generate a synthetic scenario");
    simulate_cmd->add_option("--scenario", simulate.scenario)
        ->required()
        ->check(CLI::IsMember({"target-constant-accel", "target-random-accel", "edge", "peak", "change"}));
    simulate_cmd->add_option("--seed", simulate.seed)->capture_default_str();
    simulate_cmd->add_option("--samples", simulate.samples, "target scenarios only")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--noise-std", simulate.noise_std)->check(CLI::NonNegativeNumber);
    simulate_cmd->add_option("--out", simulate.out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*design_cmd) cmd_design(design);
        else if (*analyze_cmd) cmd_analyze(analyze);
        else if (*run_cmd) cmd_run(run_design, run);
        else if (*detect_cmd) cmd_detect(detect, detect_io);
        else if (*simulate_cmd) cmd_simulate(simulate);
    } catch (const UsageError& e) {
        std::cerr << "lrf: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "lrf: " << e.what() << '\n';
        return kExitRejected;
    }
    return 0;
}
