#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include "wavkan/artifacts.hpp"
#include "wavkan/checkpoint.hpp"
#include "wavkan/error.hpp"

namespace wavkan::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class Artifacts {
public:
    explicit Artifacts(const ExperimentConfig& cfg) : dir_(cfg.output_dir), config_(to_json(cfg)) {
        fs::create_directories(dir_);
        std::ofstream(dir_ / "config.json") << config_.dump(2) << '\n';
        base_ = {{"config", config_.dump()}, {"seed", std::to_string(cfg.seed)}};
    }

    [[nodiscard]] HeaderFields header(const HeaderFields& extra = {}) const {
        HeaderFields h = base_;
        h.insert(h.end(), extra.begin(), extra.end());
        return h;
    }

    std::ofstream open(const std::string& name) const {
        std::ofstream os(dir_ / name);
        if (!os) throw Error(Errc::Io, "cannot write '" + (dir_ / name).string() + "'");
        return os;
    }

    void checkpoint(const std::string& name, const WavKanNet& net, const HeaderFields& extra = {}) const {
        auto os = open(name);
        write_comment_header(os, header(extra));
        save_checkpoint(os, net);
    }

    void metrics(ordered_json m, double wall_time) const {
        m["seed"] = config_["seed"];
        m["wall_time_seconds"] = wall_time;
        open("metrics.json") << m.dump(2) << '\n';
    }

    [[nodiscard]] const fs::path& dir() const noexcept { return dir_; }

private:
    fs::path dir_;
    ordered_json config_;
    HeaderFields base_;
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

HeaderFields net_fields(const WavKanNet& net) {
    std::string shape;
    for (std::size_t n : net.shape()) shape += (shape.empty() ? "" : ",") + std::to_string(n);
    return {{"shape", "[" + shape + "]"},
            {"wavelet", net.wavelet().describe()},
            {"policy", std::string(to_string(net.policy()))}};
}

WavKanNet build_net(const ExperimentConfig& cfg, const std::vector<std::size_t>& shape, const MotherWavelet& wavelet) {
    return init(shape, wavelet, cfg.seed, cfg.network.policy, cfg.network.translation_domain);
}

std::vector<std::size_t> with_hidden(const std::vector<std::size_t>& shape, std::size_t n) {
    return {shape.front(), n, shape.back()};
}

std::string tag(double v) { return format_double(v); }

}  // namespace

void cmd_fit(const ExperimentConfig& cfg) {
    const Stopwatch clock;
    const Artifacts out(cfg);
    const FitData data = make_fit_data(cfg.data.target, cfg.data.points);
    WavKanNet net = build_net(cfg, cfg.network.shape, cfg.network.wavelet);
    const TrainReport report = train(net, data.X, data.Y, cfg.training);

    HeaderFields fields = net_fields(net);
    const auto tf = describe(cfg.training);
    fields.insert(fields.end(), tf.begin(), tf.end());
    fields.emplace_back("target", std::string(to_string(cfg.data.target)));
    {
        auto os = out.open("loss.csv");
        write_loss_csv(os, report, out.header(fields));
    }
    {
        auto os = out.open("prediction.csv");
        write_comment_header(os, out.header(fields));
        os << "x,prediction,target\n";
        const Matrix pred = forward_batch(net, data.X);
        for (std::size_t r = 0; r < data.X.rows(); ++r)
            os << format_double(data.X(r, 0)) << ',' << format_double(pred(r, 0)) << ',' << format_double(data.Y[r])
               << '\n';
    }
    out.checkpoint("checkpoint.txt", net, fields);

    const double mse = mse_loss(net, data.X, data.Y);
    out.metrics({{"experiment", "fit"},
                 {"target", std::string(to_string(cfg.data.target))},
                 {"final_mse", mse},
                 {"epochs", cfg.training.epochs},
                 {"loss_evaluations", report.loss_evaluations}},
                clock.seconds());
    std::cout << "fit " << to_string(cfg.data.target) << ": final MSE " << format_double(mse) << " -> "
              << out.dir().string() << '\n';
}

void cmd_ntk_sweep(const ExperimentConfig& cfg) {
    const Stopwatch clock;
    const Artifacts out(cfg);
    const FitData data = make_fit_data(cfg.data.target, cfg.data.points);
    const double a = cfg.network.wavelet.a();

    auto decay = out.open("decay.csv");
    write_comment_header(decay, out.header());
    decay << "scope,b,threshold,first_index_below\n";

    ordered_json rows = ordered_json::array();
    for (double b : cfg.ntk.b_list) {
        WavKanNet net = build_net(cfg, cfg.network.shape, MotherWavelet::morlet(a, b));
        HeaderFields fields = net_fields(net);
        fields.emplace_back("b", tag(b));
        fields.emplace_back("data", std::string(to_string(cfg.data.target)) + ", " + std::to_string(cfg.data.points) +
                                        " equally spaced points");
        ordered_json row{{"b", b}};
        for (NtkScope scope : cfg.ntk.scopes) {
            const std::string scope_name(to_string(scope));
            const NtkAssembly assembly = assemble_ntk(net, data.X, scope);
            const NtkSpectrum spec = eigendecompose(assembly.K);
            HeaderFields scope_fields = fields;
            scope_fields.emplace_back("scope", scope_name);
            scope_fields.emplace_back("max_asymmetry", format_double(assembly.max_asymmetry));
            {
                auto os = out.open("spectrum_b" + tag(b) + "_" + scope_name + ".csv");
                write_spectrum_csv(os, spec.eigenvalues, out.header(scope_fields));
            }
            ordered_json idx = ordered_json::object();
            for (const auto& d : spectrum_decay_report(spec.eigenvalues, cfg.ntk.thresholds)) {
                decay << scope_name << ',' << tag(b) << ',' << format_double(d.threshold) << ','
                      << d.first_index_below << '\n';
                idx[format_double(d.threshold)] = d.first_index_below;
            }
            row[scope_name] = ordered_json{{"decay_index", idx},
                                           {"lambda_1", spec.eigenvalues.size() > 0 ? spec.eigenvalues(0) : 0.0}};
            std::cout << "ntk-sweep b=" << tag(b) << " " << scope_name << ": lambda_1 "
                      << format_double(row[scope_name]["lambda_1"].get<double>()) << '\n';
        }
        if (cfg.ntk.train) {
            const TrainReport report = train(net, data.X, data.Y, cfg.training);
            const auto tf = describe(cfg.training);
            fields.insert(fields.end(), tf.begin(), tf.end());
            auto os = out.open("loss_b" + tag(b) + ".csv");
            write_loss_csv(os, report, out.header(fields));
            row["final_mse"] = mse_loss(net, data.X, data.Y);
        }
        rows.push_back(row);
    }
    out.metrics({{"experiment", "ntk-sweep"}, {"runs", rows}}, clock.seconds());
}

void cmd_hidden_sweep(const ExperimentConfig& cfg) {
    const Stopwatch clock;
    const Artifacts out(cfg);
    const FitData data = make_fit_data(cfg.data.target, cfg.data.points);
    constexpr double kDecayThreshold = 1e-6;

    auto summary = out.open("summary.csv");
    write_comment_header(summary, out.header({{"decay_threshold", format_double(kDecayThreshold)}}));
    summary << "n,final_mse,decay_index\n";

    ordered_json rows = ordered_json::array();
    for (std::size_t n : cfg.hidden.n_list) {
        WavKanNet net = build_net(cfg, with_hidden(cfg.network.shape, n), cfg.network.wavelet);
        const NtkSpectrum spec = eigendecompose(ntk_matrix(net, data.X));
        const std::size_t idx = decay_index(spec.eigenvalues, kDecayThreshold);
        HeaderFields fields = net_fields(net);
        fields.emplace_back("n", std::to_string(n));
        {
            auto os = out.open("spectrum_n" + std::to_string(n) + ".csv");
            write_spectrum_csv(os, spec.eigenvalues, out.header(fields));
        }
        const TrainReport report = train(net, data.X, data.Y, cfg.training);
        const auto tf = describe(cfg.training);
        fields.insert(fields.end(), tf.begin(), tf.end());
        {
            auto os = out.open("loss_n" + std::to_string(n) + ".csv");
            write_loss_csv(os, report, out.header(fields));
        }
        const double mse = mse_loss(net, data.X, data.Y);
        summary << n << ',' << format_double(mse) << ',' << idx << '\n';
        rows.push_back({{"n", n}, {"final_mse", mse}, {"decay_index", idx}});
        std::cout << "hidden-sweep n=" << n << ": final MSE " << format_double(mse) << ", decay index " << idx
                  << '\n';
    }
    out.metrics({{"experiment", "hidden-sweep"}, {"runs", rows}}, clock.seconds());
}

void cmd_bound_grid(const ExperimentConfig& cfg) {
    const Stopwatch clock;
    const Artifacts out(cfg);
    const auto rows = bound_grid(cfg.bound.b_list, cfg.bound.T_list, cfg.bound.a, cfg.bound.n_quad);
    auto os = out.open("bound_grid.csv");
    write_comment_header(os, out.header({{"S", "1"}, {"bound", "(1/4) exp(-4 (b (1 - T))^2)"}}));
    os << "b,T,lambda,bound,relative_change,holds\n";
    bool all = true;
    for (const auto& r : rows) {
        os << format_double(r.b) << ',' << format_double(r.T) << ',' << format_double(r.lambda) << ','
           << format_double(r.bound) << ',' << format_double(r.relative_change) << ',' << (r.holds ? "pass" : "fail")
           << '\n';
        all = all && r.holds;
    }
    out.metrics({{"experiment", "bound-grid"}, {"rows", rows.size()}, {"all_hold", all}}, clock.seconds());
    std::cout << "bound-grid: " << rows.size() << " rows, " << (all ? "all hold" : "some rows FAIL") << '\n';
}

void cmd_dynamics_check(const ExperimentConfig& cfg) {
    const Stopwatch clock;
    const Artifacts out(cfg);
    const auto r = run_dynamics_check(cfg.dynamics);
    const std::string convention =
        "t = eta * steps for gradient descent on 0.5 * sum (f - y)^2; a loss with a 1/N factor maps to t = 2 * eta * "
        "steps / N";
    auto os = out.open("dynamics.csv");
    write_comment_header(os, out.header({{"time_convention", convention}, {"t", format_double(r.t)}}));
    os << "mode,eigenvalue,convergence_time,empirical,predicted\n";
    bool monotone = true;
    double prev_time = 0.0;
    for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
        const double lam = r.eigenvalues(i);
        const double time = lam > 0.0 ? 1.0 / lam : std::numeric_limits<double>::infinity();
        monotone = monotone && time >= prev_time;
        prev_time = time;
        os << (i + 1) << ',' << format_double(lam) << ',' << (std::isinf(time) ? "inf" : format_double(time)) << ','
           << format_double(r.empirical_modes(i)) << ',' << format_double(r.predicted_modes(i)) << '\n';
    }
    out.metrics({{"experiment", "dynamics-check"},
                 {"t", r.t},
                 {"time_convention", convention},
                 {"deviation", r.deviation},
                 {"max_mode_deviation", r.max_mode_deviation},
                 {"convergence_times_ordered", monotone}},
                clock.seconds());
    std::cout << "dynamics-check: relative deviation " << format_double(r.deviation) << " at t=" << format_double(r.t)
              << '\n';
}

void cmd_pinn(const ExperimentConfig& cfg) {
    const Stopwatch clock;
    const Artifacts out(cfg);
    const PdeProblem& problem = cfg.pinn.problem;
    NetSpec spec{cfg.network.shape, cfg.network.wavelet, cfg.network.policy, cfg.seed, cfg.network.translation_domain};
    WavKanNet net = init({1, 1}, MotherWavelet::morlet(1.0, 1.0), 0);
    const PinnResult result = solve(problem, spec, cfg.training, &net);

    HeaderFields fields = describe(problem);
    const auto nf = net_fields(net);
    const auto tf = describe(cfg.training);
    fields.insert(fields.end(), nf.begin(), nf.end());
    fields.insert(fields.end(), tf.begin(), tf.end());
    {
        auto os = out.open("loss.csv");
        write_loss_csv(os, result.report, out.header(fields));
    }
    {
        auto os = out.open("solution.csv");
        write_solution_csv(os, problem, result, out.header(fields));
    }
    out.checkpoint("checkpoint.txt", net, fields);

    ordered_json losses = ordered_json::object();
    losses["total"] = result.final_loss.total;
    for (PinnTerm term : {PinnTerm::Domain, PinnTerm::Boundary, PinnTerm::Initial, PinnTerm::Neumann})
        if (problem.has_term(term)) losses[std::string(to_string(term))] = result.final_loss.term(term);
    out.metrics({{"experiment", "pinn"},
                 {"benchmark", std::string(to_string(problem.kind))},
                 {"weighted", cfg.pinn.weighted},
                 {"rel_l2", result.metrics.rel_l2},
                 {"max_abs", result.metrics.max_abs},
                 {"final_losses", losses},
                 {"loss_evaluations", result.report.loss_evaluations}},
                clock.seconds());
    std::cout << "pinn " << to_string(problem.kind) << ": rel L2 " << format_double(result.metrics.rel_l2)
              << ", max abs " << format_double(result.metrics.max_abs) << '\n';
}

void run(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::Fit: cmd_fit(cfg); break;
        case ExperimentKind::NtkSweep: cmd_ntk_sweep(cfg); break;
        case ExperimentKind::HiddenSweep: cmd_hidden_sweep(cfg); break;
        case ExperimentKind::BoundGrid: cmd_bound_grid(cfg); break;
        case ExperimentKind::DynamicsCheck: cmd_dynamics_check(cfg); break;
        case ExperimentKind::Pinn: cmd_pinn(cfg); break;
    }
}

}  // namespace wavkan::cli
