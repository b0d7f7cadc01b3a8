#include "config.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>

#include "wavkan/error.hpp"

namespace wavkan::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr PinnTerm kTerms[] = {PinnTerm::Domain, PinnTerm::Boundary, PinnTerm::Initial, PinnTerm::Neumann};

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!j.is_object()) bad(where + " must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            bad("unknown key '" + key + "' in " + (where.empty() ? std::string("config") : where));
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        bad("bad value for '" + std::string(key) + "' in " + where);
    }
}

bool has_section(const ExperimentKind kind, std::string_view section) {
    using K = ExperimentKind;
    if (section == "network") return kind != K::BoundGrid && kind != K::DynamicsCheck;
    if (section == "training") return kind != K::BoundGrid && kind != K::DynamicsCheck;
    if (section == "data") return kind == K::Fit || kind == K::NtkSweep || kind == K::HiddenSweep;
    if (section == "ntk") return kind == K::NtkSweep;
    if (section == "hidden") return kind == K::HiddenSweep;
    if (section == "bound") return kind == K::BoundGrid;
    if (section == "dynamics") return kind == K::DynamicsCheck;
    if (section == "pinn") return kind == K::Pinn;
    return false;
}

ordered_json wavelet_json(const MotherWavelet& w) {
    ordered_json j;
    j["kind"] = std::string(to_string(w.kind()));
    switch (w.kind()) {
        case WaveletKind::Morlet:
            j["a"] = w.a();
            j["b"] = w.b();
            break;
        case WaveletKind::Shannon:
            j["omega1"] = w.omega1();
            j["omega2"] = w.omega2();
            break;
        case WaveletKind::MexicanHat:
        case WaveletKind::DoG: j["sigma"] = w.sigma(); break;
    }
    return j;
}

MotherWavelet wavelet_from_json(const json& j, const MotherWavelet& current, const std::string& where) {
    check_keys(j, {"kind", "a", "b", "omega1", "omega2", "sigma"}, where);
    WaveletKind kind = current.kind();
    if (j.contains("kind")) {
        std::string name;
        read(j, "kind", name, where);
        kind = wavelet_kind_from_string(name);
    }
    const bool same = kind == current.kind();
    auto param = [&](const char* key, double fallback) {
        if (!j.contains(key) && !same) bad(where + " needs '" + key + "' for this wavelet kind");
        double v = fallback;
        read(j, key, v, where);
        return v;
    };
    switch (kind) {
        case WaveletKind::Morlet: return MotherWavelet::morlet(param("a", current.a()), param("b", current.b()));
        case WaveletKind::Shannon:
            return MotherWavelet::shannon(param("omega1", current.omega1()), param("omega2", current.omega2()));
        case WaveletKind::MexicanHat: return MotherWavelet::mexican_hat(param("sigma", current.sigma()));
        case WaveletKind::DoG: return MotherWavelet::dog(param("sigma", current.sigma()));
    }
    bad(where + ": unknown wavelet");
}

ordered_json interval_json(const Interval& iv) { return ordered_json::array({iv.lo, iv.hi}); }

Interval interval_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        bad(where + " must be a [lo, hi] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json training_json(const TrainConfig& t) {
    ordered_json j;
    if (const auto* adam = std::get_if<AdamConfig>(&t.optimizer)) {
        j["optimizer"] = "adam";
        j["lr"] = adam->lr;
        j["beta1"] = adam->beta1;
        j["beta2"] = adam->beta2;
        j["eps"] = adam->eps;
    } else {
        const auto& l = std::get<LbfgsConfig>(t.optimizer);
        j["optimizer"] = "lbfgs";
        j["history_size"] = l.history_size;
        j["max_linesearch"] = l.max_linesearch;
        j["c1"] = l.c1;
        j["c2"] = l.c2;
        j["initial_step"] = l.initial_step;
    }
    j["epochs"] = t.epochs;
    j["record_every"] = t.record_every;
    return j;
}

void read_training(const json& j, TrainConfig& t) {
    const std::string where = "training";
    check_keys(j,
               {"optimizer", "lr", "beta1", "beta2", "eps", "history_size", "max_linesearch", "c1", "c2",
                "initial_step", "epochs", "record_every"},
               where);
    if (j.contains("optimizer")) {
        std::string name;
        read(j, "optimizer", name, where);
        if (name == "adam" && !std::holds_alternative<AdamConfig>(t.optimizer))
            t.optimizer = AdamConfig{};
        else if (name == "lbfgs" && !std::holds_alternative<LbfgsConfig>(t.optimizer))
            t.optimizer = LbfgsConfig{};
        else if (name != "adam" && name != "lbfgs")
            bad("unknown optimizer '" + name + "' (expected adam or lbfgs)");
    }
    if (auto* adam = std::get_if<AdamConfig>(&t.optimizer)) {
        for (const char* key : {"history_size", "max_linesearch", "c1", "c2", "initial_step"})
            if (j.contains(key)) bad(std::string("'") + key + "' only applies to lbfgs");
        read(j, "lr", adam->lr, where);
        read(j, "beta1", adam->beta1, where);
        read(j, "beta2", adam->beta2, where);
        read(j, "eps", adam->eps, where);
    } else {
        auto& l = std::get<LbfgsConfig>(t.optimizer);
        for (const char* key : {"lr", "beta1", "beta2", "eps"})
            if (j.contains(key)) bad(std::string("'") + key + "' only applies to adam");
        read(j, "history_size", l.history_size, where);
        read(j, "max_linesearch", l.max_linesearch, where);
        read(j, "c1", l.c1, where);
        read(j, "c2", l.c2, where);
        read(j, "initial_step", l.initial_step, where);
    }
    read(j, "epochs", t.epochs, where);
    read(j, "record_every", t.record_every, where);
}

void read_network(const json& j, NetworkSection& n) {
    const std::string where = "network";
    check_keys(j, {"shape", "wavelet", "policy", "translation_domain"}, where);
    read(j, "shape", n.shape, where);
    if (j.contains("wavelet")) n.wavelet = wavelet_from_json(j["wavelet"], n.wavelet, "network.wavelet");
    if (j.contains("policy")) {
        std::string name;
        read(j, "policy", name, where);
        n.policy = init_policy_from_string(name);
    }
    if (j.contains("translation_domain"))
        n.translation_domain = interval_from_json(j["translation_domain"], "network.translation_domain");
}

ordered_json problem_json(const PinnSection& s) {
    const PdeProblem& p = s.problem;
    ordered_json j;
    j["benchmark"] = std::string(to_string(p.kind));
    j["weighted"] = s.weighted;
    ordered_json dom = ordered_json::array();
    for (const auto& iv : p.domain) dom.push_back(interval_json(iv));
    j["domain"] = dom;
    switch (p.kind) {
        case PdeKind::Poisson1D: break;
        case PdeKind::Heat1D: j["diffusivity"] = p.diffusivity; break;
        case PdeKind::Helmholtz2D:
            j["a1"] = p.a1;
            j["a2"] = p.a2;
            j["k"] = p.k;
            break;
        case PdeKind::Wave1D: j["speed_sq"] = p.speed_sq; break;
    }
    j["n_domain"] = p.n_domain;
    j["n_bc"] = p.n_bc;
    if (p.has_term(PinnTerm::Initial)) j["n_ic"] = p.n_ic;
    if (p.has_term(PinnTerm::Neumann)) j["n_nbc"] = p.n_nbc;
    ordered_json w;
    for (PinnTerm term : kTerms)
        if (p.has_term(term)) w[std::string(to_string(term))] = p.weight(term);
    j["weights"] = w;
    return j;
}

void read_problem(const json& j, PdeProblem& p) {
    const std::string where = "pinn";
    check_keys(j,
               {"benchmark", "weighted", "domain", "diffusivity", "a1", "a2", "k", "speed_sq", "n_domain", "n_bc",
                "n_ic", "n_nbc", "weights"},
               where);
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        if (!d.is_array() || d.size() != p.domain.size())
            bad("pinn.domain needs one [lo, hi] pair per coordinate");
        for (std::size_t c = 0; c < p.domain.size(); ++c) p.domain[c] = interval_from_json(d[c], "pinn.domain");
    }
    read(j, "diffusivity", p.diffusivity, where);
    read(j, "a1", p.a1, where);
    read(j, "a2", p.a2, where);
    read(j, "k", p.k, where);
    read(j, "speed_sq", p.speed_sq, where);
    read(j, "n_domain", p.n_domain, where);
    read(j, "n_bc", p.n_bc, where);
    read(j, "n_ic", p.n_ic, where);
    read(j, "n_nbc", p.n_nbc, where);
    if (j.contains("weights")) {
        const auto& w = j["weights"];
        if (!w.is_object()) bad("pinn.weights must be an object keyed by loss term");
        for (const auto& [key, value] : w.items()) {
            bool found = false;
            for (PinnTerm term : kTerms) {
                if (key != to_string(term)) continue;
                if (!p.has_term(term)) bad("pinn.weights: " + key + " is not a term of this benchmark");
                if (!value.is_number()) bad("pinn.weights: " + key + " must be a number");
                p.weights[static_cast<std::size_t>(term)] = value.get<double>();
                found = true;
            }
            if (!found) bad("pinn.weights: unknown term '" + key + "'");
        }
    }
}

template <class T>
std::vector<T> dedupe(const std::vector<T>& v) {
    std::vector<T> out;
    for (const T& x : v)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
}

void finalize(ExperimentConfig& cfg) {
    cfg.training.seed = cfg.seed;
    cfg.dynamics.seed = cfg.seed;
    cfg.pinn.problem.seed = cfg.seed;
    cfg.hidden.n_list = dedupe(cfg.hidden.n_list);
    cfg.ntk.b_list = dedupe(cfg.ntk.b_list);
    cfg.ntk.scopes = dedupe(cfg.ntk.scopes);

    using K = ExperimentKind;
    if (cfg.kind == K::NtkSweep && cfg.ntk.b_list.empty()) bad("ntk.b_list must not be empty");
    if (cfg.kind == K::NtkSweep && cfg.ntk.scopes.empty()) bad("ntk.scopes must not be empty");
    if (cfg.kind == K::HiddenSweep && cfg.hidden.n_list.empty()) bad("hidden.n_list must not be empty");
    if (cfg.kind == K::BoundGrid && (cfg.bound.b_list.empty() || cfg.bound.T_list.empty()))
        bad("bound.b_list and bound.T_list must not be empty");
    if ((cfg.kind == K::NtkSweep || cfg.kind == K::HiddenSweep) && cfg.network.shape.size() != 3)
        bad("sweeps need a [1, n, 1] network shape");
    if ((cfg.kind == K::NtkSweep || cfg.kind == K::HiddenSweep) && cfg.network.wavelet.kind() != WaveletKind::Morlet)
        bad("sweeps vary the Morlet frequency b and need a Morlet wavelet");
    if (has_section(cfg.kind, "training")) cfg.training.validate();
    if (cfg.kind == K::Pinn) {
        cfg.pinn.problem.validate();
        if (cfg.network.shape.empty() || cfg.network.shape.front() != cfg.pinn.problem.dim() ||
            cfg.network.shape.back() != 1)
            bad("pinn network shape must map the problem coordinates to one output");
    }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
        case ExperimentKind::Fit: return "fit";
        case ExperimentKind::NtkSweep: return "ntk-sweep";
        case ExperimentKind::HiddenSweep: return "hidden-sweep";
        case ExperimentKind::BoundGrid: return "bound-grid";
        case ExperimentKind::DynamicsCheck: return "dynamics-check";
        case ExperimentKind::Pinn: return "pinn";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
    for (auto k : {ExperimentKind::Fit, ExperimentKind::NtkSweep, ExperimentKind::HiddenSweep,
                   ExperimentKind::BoundGrid, ExperimentKind::DynamicsCheck, ExperimentKind::Pinn})
        if (name == to_string(k)) return k;
    bad("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig default_config(ExperimentKind kind, FitTarget target, PdeKind benchmark, bool weighted) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    switch (kind) {
        case ExperimentKind::Fit: {
            const FitPreset p = fit_preset(target);
            cfg.network = {p.shape, p.wavelet, InitPolicy::AllTrainable, target_domain(target)};
            cfg.data.target = target;
            cfg.training = p.train;
            break;
        }
        case ExperimentKind::NtkSweep:
        case ExperimentKind::HiddenSweep: {
            const FitPreset p = fit_preset(FitTarget::TwoTone);
            const double b = kind == ExperimentKind::NtkSweep ? 15.0 : 5.0;
            cfg.network = {p.shape, MotherWavelet::morlet(1.0, b), InitPolicy::AllTrainable,
                           target_domain(FitTarget::TwoTone)};
            cfg.data.target = FitTarget::TwoTone;
            cfg.training = p.train;
            break;
        }
        case ExperimentKind::BoundGrid:
        case ExperimentKind::DynamicsCheck: break;
        case ExperimentKind::Pinn: {
            cfg.pinn.problem = PdeProblem::preset(benchmark, weighted);
            cfg.pinn.weighted = weighted;
            const NetSpec spec = preset_net(benchmark);
            cfg.network = {spec.shape, spec.wavelet, spec.policy, cfg.pinn.problem.domain.front()};
            cfg.training = preset_training(benchmark);
            break;
        }
    }
    finalize(cfg);
    return cfg;
}

ExperimentConfig config_from_json(const json& j) {
    check_keys(j, {"experiment", "seed", "output_dir", "network", "data", "training", "ntk", "hidden", "bound",
                   "dynamics", "pinn"},
               "");
    if (!j.contains("experiment")) bad("config needs an 'experiment' field");
    std::string kind_name;
    read(j, "experiment", kind_name, "config");
    const ExperimentKind kind = experiment_kind_from_string(kind_name);

    for (const char* section : {"network", "data", "training", "ntk", "hidden", "bound", "dynamics", "pinn"})
        if (j.contains(section) && !has_section(kind, section))
            bad(std::string("section '") + section + "' does not apply to " + kind_name);

    FitTarget target = FitTarget::Quintic;
    if (j.contains("data") && j["data"].contains("target")) {
        std::string name;
        read(j["data"], "target", name, "data");
        target = fit_target_from_string(name);
    }
    PdeKind benchmark = PdeKind::Poisson1D;
    bool weighted = false;
    if (j.contains("pinn")) {
        if (j["pinn"].contains("benchmark")) {
            std::string name;
            read(j["pinn"], "benchmark", name, "pinn");
            benchmark = pde_kind_from_string(name);
        }
        read(j["pinn"], "weighted", weighted, "pinn");
    }

    ExperimentConfig cfg = default_config(kind, target, benchmark, weighted);
    read(j, "seed", cfg.seed, "config");
    read(j, "output_dir", cfg.output_dir, "config");
    if (j.contains("network")) read_network(j["network"], cfg.network);
    if (j.contains("data")) {
        check_keys(j["data"], {"target", "points"}, "data");
        read(j["data"], "points", cfg.data.points, "data");
    }
    if (j.contains("training")) read_training(j["training"], cfg.training);
    if (j.contains("ntk")) {
        const auto& s = j["ntk"];
        check_keys(s, {"b_list", "thresholds", "scopes", "train"}, "ntk");
        read(s, "b_list", cfg.ntk.b_list, "ntk");
        read(s, "thresholds", cfg.ntk.thresholds, "ntk");
        read(s, "train", cfg.ntk.train, "ntk");
        if (s.contains("scopes")) {
            std::vector<std::string> names;
            read(s, "scopes", names, "ntk");
            cfg.ntk.scopes.clear();
            for (const auto& name : names) cfg.ntk.scopes.push_back(ntk_scope_from_string(name));
        }
    }
    if (j.contains("hidden")) {
        check_keys(j["hidden"], {"n_list"}, "hidden");
        read(j["hidden"], "n_list", cfg.hidden.n_list, "hidden");
    }
    if (j.contains("bound")) {
        const auto& s = j["bound"];
        check_keys(s, {"b_list", "T_list", "a", "n_quad"}, "bound");
        read(s, "b_list", cfg.bound.b_list, "bound");
        read(s, "T_list", cfg.bound.T_list, "bound");
        read(s, "a", cfg.bound.a, "bound");
        read(s, "n_quad", cfg.bound.n_quad, "bound");
    }
    if (j.contains("dynamics")) {
        const auto& s = j["dynamics"];
        check_keys(s, {"inputs", "points", "wavelet", "eta", "steps"}, "dynamics");
        read(s, "inputs", cfg.dynamics.inputs, "dynamics");
        read(s, "points", cfg.dynamics.points, "dynamics");
        read(s, "eta", cfg.dynamics.eta, "dynamics");
        read(s, "steps", cfg.dynamics.steps, "dynamics");
        if (s.contains("wavelet")) cfg.dynamics.wavelet = wavelet_from_json(s["wavelet"], cfg.dynamics.wavelet, "dynamics.wavelet");
    }
    if (j.contains("pinn")) read_problem(j["pinn"], cfg.pinn.problem);
    finalize(cfg);
    return cfg;
}

ordered_json to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["experiment"] = std::string(to_string(cfg.kind));
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    if (has_section(cfg.kind, "network")) {
        ordered_json n;
        n["shape"] = cfg.network.shape;
        n["wavelet"] = wavelet_json(cfg.network.wavelet);
        n["policy"] = std::string(to_string(cfg.network.policy));
        n["translation_domain"] = interval_json(cfg.network.translation_domain);
        j["network"] = n;
    }
    if (has_section(cfg.kind, "data")) {
        j["data"] = ordered_json{{"target", std::string(to_string(cfg.data.target))}, {"points", cfg.data.points}};
    }
    if (has_section(cfg.kind, "training")) j["training"] = training_json(cfg.training);
    if (has_section(cfg.kind, "ntk")) {
        ordered_json s;
        s["b_list"] = cfg.ntk.b_list;
        s["thresholds"] = cfg.ntk.thresholds;
        s["scopes"] = ordered_json::array();
        for (NtkScope scope : cfg.ntk.scopes) s["scopes"].push_back(std::string(to_string(scope)));
        s["train"] = cfg.ntk.train;
        j["ntk"] = s;
    }
    if (has_section(cfg.kind, "hidden")) j["hidden"] = ordered_json{{"n_list", cfg.hidden.n_list}};
    if (has_section(cfg.kind, "bound")) {
        ordered_json s;
        s["b_list"] = cfg.bound.b_list;
        s["T_list"] = cfg.bound.T_list;
        s["a"] = cfg.bound.a;
        s["n_quad"] = cfg.bound.n_quad;
        j["bound"] = s;
    }
    if (has_section(cfg.kind, "dynamics")) {
        ordered_json s;
        s["inputs"] = cfg.dynamics.inputs;
        s["points"] = cfg.dynamics.points;
        s["wavelet"] = wavelet_json(cfg.dynamics.wavelet);
        s["eta"] = cfg.dynamics.eta;
        s["steps"] = cfg.dynamics.steps;
        j["dynamics"] = s;
    }
    if (has_section(cfg.kind, "pinn")) j["pinn"] = problem_json(cfg.pinn);
    return j;
}

}  // namespace wavkan::cli
