#include "zgsopt/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "zgsopt/oracle.hpp"

namespace zgs {

using json = nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

Vec to_vec(const json& arr, const std::string& what) {
    if (!arr.is_array()) throw ValidationError(what + ": expected an array of numbers");
    Vec v(arr.size());
    for (std::size_t k = 0; k < arr.size(); ++k) {
        if (!arr[k].is_number()) throw ValidationError(what + ": expected numbers");
        v(static_cast<Eigen::Index>(k)) = arr[k].get<double>();
    }
    return v;
}

Mat to_mat(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.empty()) throw ValidationError(what + ": expected a matrix");
    const auto rows = arr.size();
    const auto cols = arr[0].size();
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        Vec row = to_vec(arr[r], what);
        if (static_cast<std::size_t>(row.size()) != cols) {
            throw ValidationError(what + ": ragged matrix");
        }
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

Topology graph_from_json(const json& g) {
    std::string kind = g.value("kind", "ring");
    int n = g.value("n", 0);
    double w = g.value("weight", 1.0);
    if (kind == "ring") return ring_topology(n, w);
    if (kind == "complete") return complete_topology(n, w);
    if (kind == "star") return star_topology(n, w);
    if (kind == "path") return path_topology(n, w);
    if (kind == "random_connected") {
        return random_connected_topology(n, g.value("edge_prob", 0.1),
                                         g.value("seed", std::uint64_t{1}), w);
    }
    if (kind == "edges") {
        std::vector<Edge> edges;
        for (const auto& e : g.at("edges")) {
            if (!e.is_array() || e.size() < 2) {
                throw ValidationError("graph.edges: expected [i, j, weight] entries");
            }
            edges.push_back({e[0].get<int>(), e[1].get<int>(),
                             e.size() > 2 ? e[2].get<double>() : 1.0});
        }
        return Topology::from_edges(n, edges);
    }
    throw ValidationError("graph.kind '" + kind + "' unknown (ring, complete, star, path, "
                          "random_connected, edges)");
}

TargetTrajectory default_tracking_target() {
    TargetTrajectory t;
    t.position = [](double s) {
        Vec v(2);
        v << 2.0 * std::sin(s) + 0.5 * s, s;
        return v;
    };
    t.velocity = [](double s) {
        Vec v(2);
        v << 2.0 * std::cos(s) + 0.5, 1.0;
        return v;
    };
    return t;
}

Scenario scenario_from_inline(const json& spec) {
    Scenario sc;
    sc.name = spec.value("name", "custom");
    sc.description = "inline scenario";

    if (spec.contains("schedule")) {
        std::vector<SwitchingSchedule::Segment> segs;
        for (const auto& seg : spec.at("schedule")) {
            segs.push_back({seg.at("start").get<double>(), graph_from_json(seg.at("graph"))});
        }
        sc.schedule = SwitchingSchedule::from_segments(std::move(segs));
    } else if (spec.contains("graph")) {
        sc.schedule = SwitchingSchedule::single(graph_from_json(spec.at("graph")));
    } else {
        throw ValidationError("inline scenario: needs \"graph\" or \"schedule\"");
    }
    const int n = sc.schedule.n_agents();

    const json& costs = spec.at("costs");
    std::string kind = costs.value("kind", "");
    if (kind == "suiteA") {
        auto suite = benchmark_suite_A();
        if (n == 6) {
            sc.costs = suite;
        } else if (n % 6 == 0) {
            for (int i = 0; i < n; ++i) sc.costs.push_back(suite[i / (n / 6)]);
        } else {
            throw ValidationError("costs.kind suiteA: agent count must be 6 or a multiple");
        }
    } else if (kind == "quadratic") {
        for (const auto& term : costs.at("terms")) {
            sc.costs.push_back(quadratic_cost(to_mat(term.at("Q"), "costs.Q"),
                                              to_vec(term.at("b"), "costs.b"),
                                              term.value("c", 0.0)));
        }
        if (static_cast<int>(sc.costs.size()) != n) {
            throw ValidationError("costs.kind quadratic: one term per agent required");
        }
    } else if (kind == "tracking") {
        TargetTrajectory target = default_tracking_target();
        std::vector<Vec> biases;
        for (const auto& b : costs.at("biases")) biases.push_back(to_vec(b, "costs.biases"));
        if (static_cast<int>(biases.size()) != n) {
            throw ValidationError("costs.kind tracking: one bias per agent required");
        }
        for (const Vec& b : biases) sc.costs.push_back(quadratic_tracking(target, b));
        sc.params.variant = Variant::time_varying;
        sc.tol.settle = 5e-2;
        sc.reference = tracking_reference(biases, target);
    } else {
        throw ValidationError("costs.kind '" + kind +
                              "' unknown (suiteA, quadratic, tracking)");
    }

    const int dim = sc.costs.front().dim;
    sc.seed = spec.value("seed", std::uint64_t{1});
    if (spec.contains("x0")) {
        const json& x0 = spec.at("x0");
        if (x0.is_array()) {
            for (const auto& row : x0) sc.x0.push_back(to_vec(row, "x0"));
        } else if (x0.is_object() && x0.value("kind", "") == "uniform") {
            double lo = x0.value("lo", -5.0);
            double hi = x0.value("hi", 5.0);
            std::mt19937_64 rng(x0.value("seed", sc.seed));
            std::uniform_real_distribution<double> unif(lo, hi);
            for (int i = 0; i < n; ++i) {
                Vec v(dim);
                for (int k = 0; k < dim; ++k) v(k) = unif(rng);
                sc.x0.push_back(v);
            }
        } else {
            throw ValidationError("x0: expected an array of vectors or {kind: uniform, ...}");
        }
    } else {
        throw ValidationError("inline scenario: needs \"x0\"");
    }

    if (spec.contains("params")) {
        const json& p = spec.at("params");
        if (p.contains("variant")) {
            sc.params.variant = variant_from_string(p.at("variant").get<std::string>());
        }
        sc.params.eta = p.value("eta", sc.params.eta);
        sc.params.p = p.value("p", sc.params.p);
        sc.params.T_m = p.value("T_m", sc.params.T_m);
        sc.params.c = p.value("c", sc.params.c);
        sc.params.mu = p.value("mu", sc.params.mu);
        sc.params.k = p.value("k", sc.params.k);
        sc.params.exp_clamp = p.value("exp_clamp", sc.params.exp_clamp);
        sc.params.deadzone = p.value("deadzone", sc.params.deadzone);
        sc.params.boundary_layer = p.value("boundary_layer", sc.params.boundary_layer);
        sc.params.eps0 = p.value("eps0", sc.params.eps0);
    }
    sc.t_end = spec.value("t_end", std::max(sc.params.T_m + 0.5, 2.5));
    sc.step = spec.value("step", 1e-3);

    if (spec.contains("disturbance")) {
        const json& d = spec.at("disturbance");
        Vec amp = d.contains("amp") ? to_vec(d.at("amp"), "disturbance.amp")
                                    : Vec::Constant(dim, 0.4);
        Vec freq = d.contains("freq") ? to_vec(d.at("freq"), "disturbance.freq")
                                      : Vec::Constant(dim, 3.0);
        if (amp.size() != dim || freq.size() != dim) {
            throw ValidationError("disturbance: amp/freq dimension mismatch");
        }
        Disturbance dist;
        dist.d = [amp, freq, dim](int agent, double t) {
            Vec v(dim);
            for (int k = 0; k < dim; ++k) {
                double phase = freq(k) * t + (agent + 1);
                v(k) = amp(k) * (k % 2 == 0 ? std::sin(phase) : std::cos(phase));
            }
            return v;
        };
        dist.bound_D = d.value("bound_D", amp.cwiseAbs().sum());
        sc.disturbance = dist;
    }

    if (spec.contains("tol")) {
        const json& t = spec.at("tol");
        sc.tol.settle = t.value("settle", sc.tol.settle);
        sc.tol.zgs = t.value("zgs", sc.tol.zgs);
        sc.tol.slide = t.value("slide", sc.tol.slide);
    }
    return sc;
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ValidationError("override " + key + ": expected a number");
    return v.get<double>();
}

bool as_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) throw ValidationError("override " + key + ": expected true/false");
    return v.get<bool>();
}

// dotted or aliased override keys applied onto a built scenario
void apply_scenario_override(Scenario& sc, const std::string& key, const json& v) {
    auto is = [&](const char* a, const char* b = nullptr, const char* c = nullptr) {
        return key == a || (b && key == b) || (c && key == c);
    };
    if (is("params.eta", "eta")) sc.params.eta = as_number(v, key);
    else if (is("params.p", "p")) sc.params.p = as_number(v, key);
    else if (is("params.T_m", "T_m", "Tm")) sc.params.T_m = as_number(v, key);
    else if (is("params.c", "c")) sc.params.c = as_number(v, key);
    else if (is("params.mu", "mu")) sc.params.mu = as_number(v, key);
    else if (is("params.k", "k")) sc.params.k = as_number(v, key);
    else if (is("params.exp_clamp", "exp_clamp")) sc.params.exp_clamp = as_number(v, key);
    else if (is("params.deadzone", "deadzone")) sc.params.deadzone = as_number(v, key);
    else if (is("params.eps0", "eps0")) sc.params.eps0 = as_number(v, key);
    else if (is("params.boundary_layer", "boundary_layer"))
        sc.params.boundary_layer = as_bool(v, key);
    else if (is("params.variant", "variant"))
        sc.params.variant = variant_from_string(v.get<std::string>());
    else if (is("step")) sc.step = as_number(v, key);
    else if (is("t_end")) sc.t_end = as_number(v, key);
    else if (is("tol.settle", "settle_tol")) sc.tol.settle = as_number(v, key);
    else if (is("tol.zgs", "zgs_tol")) sc.tol.zgs = as_number(v, key);
    else if (is("tol.slide", "slide_tol")) sc.tol.slide = as_number(v, key);
    else if (is("strict", "strict_mode")) sc.strict = as_bool(v, key);
    else if (is("seed")) sc.seed = static_cast<std::uint64_t>(as_number(v, key));
    else throw ValidationError("unknown override key '" + key + "'");
}

}  // namespace

RunConfig parse_config_string(const std::string& text) {
    json j = parse_json(text, "config");
    if (!j.is_object()) throw ValidationError("config: top level must be an object");
    RunConfig cfg;
    if (j.contains("scenario")) {
        const json& s = j.at("scenario");
        if (s.is_string()) {
            cfg.scenario = s.get<std::string>();
        } else if (s.is_object()) {
            cfg.scenario.clear();
            cfg.inline_scenario = s.dump();
        } else {
            throw ValidationError("config.scenario: expected a name or an object");
        }
    }
    if (j.contains("overrides")) {
        if (!j.at("overrides").is_object()) {
            throw ValidationError("config.overrides: expected an object");
        }
        cfg.overrides = j.at("overrides").dump();
    }
    cfg.output_dir = j.value("output_dir", "");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_string(buf.str());
}

std::string config_to_json(const RunConfig& cfg) {
    json j;
    if (cfg.inline_scenario.empty()) {
        j["scenario"] = cfg.scenario;
    } else {
        j["scenario"] = parse_json(cfg.inline_scenario, "config.scenario");
    }
    j["overrides"] = parse_json(cfg.overrides, "config.overrides");
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") {
        cfg.scenario = value;
        cfg.inline_scenario.clear();
        return;
    }
    if (key == "output_dir") {
        cfg.output_dir = value;
        return;
    }
    json v;
    if (value == "true" || value == "false") {
        v = (value == "true");
    } else {
        try {
            std::size_t pos = 0;
            double num = std::stod(value, &pos);
            if (pos == value.size()) v = num;
        } catch (...) {
        }
        if (v.is_null()) v = value;
    }
    json ov = parse_json(cfg.overrides, "config.overrides");
    ov[key] = v;
    cfg.overrides = ov.dump();
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& pairs) {
    for (const std::string& kv : pairs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ValidationError("override '" + kv + "' is not of the form key=value");
        }
        apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

Scenario build_scenario(const RunConfig& cfg) {
    json ov = parse_json(cfg.overrides, "config.overrides");

    Scenario sc;
    if (!cfg.inline_scenario.empty()) {
        sc = scenario_from_inline(parse_json(cfg.inline_scenario, "config.scenario"));
    } else if (cfg.scenario == "scale_60" && ov.contains("seed")) {
        // the seed shapes the generated graph and initial values
        sc = scenario_scale_60(static_cast<std::uint64_t>(as_number(ov.at("seed"), "seed")));
    } else {
        sc = make_scenario(cfg.scenario);
    }

    for (const auto& [key, value] : ov.items()) apply_scenario_override(sc, key, value);
    check_param_ranges(sc.params);
    return sc;
}

bool strict_mode(const RunConfig& cfg) {
    json ov = parse_json(cfg.overrides, "config.overrides");
    for (const char* key : {"strict", "strict_mode"}) {
        if (ov.contains(key)) return as_bool(ov.at(key), key);
    }
    return true;
}

}  // namespace zgs
