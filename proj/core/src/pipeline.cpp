#include "topomd/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "topomd/lammps_io.hpp"
#include "topomd/plot.hpp"
#include "topomd/report.hpp"

namespace fs = std::filesystem;

namespace topomd {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_long(const std::string& s, long& out) {
    try {
        std::size_t pos = 0;
        out = std::stol(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const char* kSweepableKeys[] = {"eps_pp", "eps_ss", "eps_sp", "sigma_g",
                                "n_s",    "T",      "gamma",  "B"};

bool sweepable(const std::string& key) {
    for (const char* k : kSweepableKeys)
        if (key == k) return true;
    return false;
}

} // namespace

std::string set_pipeline_key(PipelineSpec& spec, const std::string& key,
                             const std::string& raw_value) {
    const std::string value = trim(raw_value);
    auto bad_value = [&]() { return "invalid value '" + value + "' for " + key; };

    auto set_int = [&](int& field) -> std::string {
        long v = 0;
        if (!parse_long(value, v)) return bad_value();
        field = static_cast<int>(v);
        return "";
    };
    auto set_double = [&](double& field) -> std::string {
        double v = 0.0;
        if (!parse_double(value, v)) return bad_value();
        field = v;
        return "";
    };

    if (key == "architecture") {
        try {
            spec.gen.architecture = architecture_from_string(value);
        } catch (const Error&) {
            return "unknown architecture '" + value + "'";
        }
        return "";
    }
    if (key == "N") return set_int(spec.gen.N);
    if (key == "N_b") return set_int(spec.gen.N_b);
    if (key == "sigma_g") return set_double(spec.gen.sigma_g);
    if (key == "N_s") return set_int(spec.gen.N_s);
    if (key == "N_a") return set_int(spec.gen.N_a);
    if (key == "m") return set_int(spec.gen.m);
    if (key == "G") return set_int(spec.gen.G);
    if (key == "b") return set_int(spec.gen.b);
    if (key == "B") return set_double(spec.gen.B);
    if (key == "n_s") return set_double(spec.gen.n_s);
    if (key == "eps_pp") return set_double(spec.interactions.eps_pp);
    if (key == "eps_ss") return set_double(spec.interactions.eps_ss);
    if (key == "eps_sp") return set_double(spec.interactions.eps_sp);
    if (key == "thermostat") {
        if (value == "langevin") {
            spec.thermostat.kind = ThermostatSpec::Kind::Langevin;
        } else if (value == "nose-hoover") {
            spec.thermostat.kind = ThermostatSpec::Kind::NoseHoover;
        } else {
            return "thermostat must be 'langevin' or 'nose-hoover', got '" + value + "'";
        }
        return "";
    }
    if (key == "T") return set_double(spec.thermostat.T);
    if (key == "gamma") return set_double(spec.thermostat.gamma);
    if (key == "Q") return set_double(spec.thermostat.Q);
    if (key == "steps") {
        long v = 0;
        if (!parse_long(value, v)) return bad_value();
        spec.run.steps = v;
        return "";
    }
    if (key == "dt") return set_double(spec.run.dt);
    if (key == "dump_every") {
        long v = 0;
        if (!parse_long(value, v)) return bad_value();
        spec.run.dump_every = v;
        return "";
    }
    if (key == "seed") {
        long v = 0;
        if (!parse_long(value, v) || v < 0) return bad_value();
        spec.gen.seed = static_cast<std::uint64_t>(v);
        spec.run.seed = static_cast<std::uint64_t>(v);
        return "";
    }
    if (key == "out") {
        if (value.empty()) return "out directory must not be empty";
        spec.out_dir = value;
        return "";
    }
    return "unknown key '" + key + "'";
}

std::string get_pipeline_key(const PipelineSpec& spec, const std::string& key) {
    if (key == "architecture") return to_string(spec.gen.architecture);
    if (key == "N") return std::to_string(spec.gen.N);
    if (key == "N_b") return std::to_string(spec.gen.N_b);
    if (key == "sigma_g") return fmt(spec.gen.sigma_g);
    if (key == "N_s") return std::to_string(spec.gen.N_s);
    if (key == "N_a") return std::to_string(spec.gen.N_a);
    if (key == "m") return std::to_string(spec.gen.m);
    if (key == "G") return std::to_string(spec.gen.G);
    if (key == "b") return std::to_string(spec.gen.b);
    if (key == "B") return fmt(spec.gen.B);
    if (key == "n_s") return fmt(spec.gen.n_s);
    if (key == "eps_pp") return fmt(spec.interactions.eps_pp);
    if (key == "eps_ss") return fmt(spec.interactions.eps_ss);
    if (key == "eps_sp") return fmt(spec.interactions.eps_sp);
    if (key == "thermostat") return to_string(spec.thermostat.kind);
    if (key == "T") return fmt(spec.thermostat.T);
    if (key == "gamma") return fmt(spec.thermostat.gamma);
    if (key == "Q") return fmt(spec.thermostat.Q);
    if (key == "steps") return std::to_string(spec.run.steps);
    if (key == "dt") return fmt(spec.run.dt);
    if (key == "dump_every") return std::to_string(spec.run.dump_every);
    if (key == "seed") return std::to_string(spec.gen.seed);
    if (key == "out") return spec.out_dir;
    return "";
}

std::vector<std::pair<std::string, std::string>> describe(const PipelineSpec& spec) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("architecture", to_string(spec.gen.architecture));
    switch (spec.gen.architecture) {
        case Architecture::Linear:
        case Architecture::Ring:
            kv.emplace_back("N", std::to_string(spec.gen.N));
            break;
        case Architecture::Brush:
            kv.emplace_back("N_b", std::to_string(spec.gen.N_b));
            kv.emplace_back("sigma_g", fmt(spec.gen.sigma_g));
            kv.emplace_back("N_s", std::to_string(spec.gen.N_s));
            break;
        case Architecture::Star:
            kv.emplace_back("N_a", std::to_string(spec.gen.N_a));
            kv.emplace_back("m", std::to_string(spec.gen.m));
            break;
        case Architecture::Dendrimer:
            kv.emplace_back("G", std::to_string(spec.gen.G));
            kv.emplace_back("b", std::to_string(spec.gen.b));
            kv.emplace_back("N_s", std::to_string(spec.gen.N_s));
            break;
    }
    kv.emplace_back("B", fmt(spec.gen.B));
    kv.emplace_back("n_s", fmt(spec.gen.n_s));
    kv.emplace_back("eps_pp", fmt(spec.interactions.eps_pp));
    kv.emplace_back("eps_ss", fmt(spec.interactions.eps_ss));
    kv.emplace_back("eps_sp", fmt(spec.interactions.eps_sp));
    kv.emplace_back("thermostat", to_string(spec.thermostat.kind));
    kv.emplace_back("T", fmt(spec.thermostat.T));
    if (spec.thermostat.kind == ThermostatSpec::Kind::Langevin)
        kv.emplace_back("gamma", fmt(spec.thermostat.gamma));
    if (spec.thermostat.kind == ThermostatSpec::Kind::NoseHoover)
        kv.emplace_back("Q", spec.thermostat.Q > 0.0 ? fmt(spec.thermostat.Q)
                                                     : std::string("auto (0.1 g)"));
    kv.emplace_back("steps", std::to_string(spec.run.steps));
    kv.emplace_back("dt", fmt(spec.run.dt));
    kv.emplace_back("dump_every", std::to_string(spec.run.dump_every));
    kv.emplace_back("seed", std::to_string(spec.gen.seed));
    kv.emplace_back("out", spec.out_dir);
    if (spec.is_sweep()) {
        std::string vals;
        for (double v : spec.sweep_values) vals += (vals.empty() ? "" : ", ") + fmt(v);
        kv.emplace_back("sweep", spec.sweep_key + " in [" + vals + "]");
    }
    return kv;
}

std::vector<std::string> PipelineSpec::validate() const {
    std::vector<std::string> bad = gen.validate();
    auto check = [&bad](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    check(std::isfinite(interactions.eps_pp) && interactions.eps_pp >= 0.0,
          "eps_pp must be finite and >= 0");
    check(std::isfinite(interactions.eps_ss) && interactions.eps_ss >= 0.0,
          "eps_ss must be finite and >= 0");
    check(std::isfinite(interactions.eps_sp) && interactions.eps_sp >= 0.0,
          "eps_sp must be finite and >= 0");
    check(thermostat.T > 0.0, "T must be positive");
    if (thermostat.kind == ThermostatSpec::Kind::Langevin)
        check(thermostat.gamma > 0.0, "gamma must be positive");
    check(thermostat.Q >= 0.0, "Q must be positive (or omitted for the 0.1 g default)");
    check(run.steps > 0, "steps must be positive");
    check(run.dt > 0.0, "dt must be positive");
    check(run.dump_every > 0, "dump_every must be positive");
    check(!out_dir.empty(), "out directory required (key 'out' or --out)");
    if (is_sweep()) {
        check(sweepable(sweep_key), "parameter '" + sweep_key + "' cannot be swept");
        check(!sweep_values.empty(), "sweep list for '" + sweep_key + "' is empty");
    }
    return bad;
}

ParsedPipeline parse_pipeline(std::istream& is) {
    ParsedPipeline out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        auto sep = line.find('=');
        if (sep == std::string::npos) sep = line.find(':');
        if (sep == std::string::npos) {
            out.errors.push_back("line " + std::to_string(lineno) +
                                 ": expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, sep));
        const std::string value = trim(line.substr(sep + 1));

        if (!value.empty() && value.front() == '[') {
            // list value: expands into a parameter sweep
            if (value.back() != ']') {
                out.errors.push_back("line " + std::to_string(lineno) +
                                     ": unterminated list for " + key);
                continue;
            }
            if (!sweepable(key)) {
                out.errors.push_back("line " + std::to_string(lineno) + ": parameter '" +
                                     key + "' cannot be swept");
                continue;
            }
            if (!out.spec.sweep_key.empty()) {
                out.errors.push_back("line " + std::to_string(lineno) +
                                     ": only one list-valued parameter is allowed ('" +
                                     out.spec.sweep_key + "' already set)");
                continue;
            }
            std::vector<double> values;
            std::string item;
            std::istringstream ls(value.substr(1, value.size() - 2));
            bool ok = true;
            while (std::getline(ls, item, ',')) {
                double v = 0.0;
                if (!parse_double(trim(item), v)) {
                    out.errors.push_back("line " + std::to_string(lineno) +
                                         ": bad list entry '" + trim(item) + "' for " + key);
                    ok = false;
                    break;
                }
                values.push_back(v);
            }
            if (ok && values.empty()) {
                out.errors.push_back("line " + std::to_string(lineno) + ": empty list for " +
                                     key);
                ok = false;
            }
            if (ok) {
                out.spec.sweep_key = key;
                out.spec.sweep_values = std::move(values);
            }
            continue;
        }

        const std::string err = set_pipeline_key(out.spec, key, value);
        if (!err.empty())
            out.errors.push_back("line " + std::to_string(lineno) + ": " + err);
    }
    return out;
}

ParsedPipeline parse_pipeline_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        ParsedPipeline out;
        out.errors.push_back("cannot open spec file '" + path + "'");
        return out;
    }
    return parse_pipeline(is);
}

std::string data_path(const PipelineSpec& spec) { return spec.out_dir + "/config.data"; }
std::string topology_path(const PipelineSpec& spec) { return spec.out_dir + "/config.topo"; }
std::string dump_path(const PipelineSpec& spec) { return spec.out_dir + "/traj.dump"; }
std::string report_path(const PipelineSpec& spec) { return spec.out_dir + "/report.md"; }

SystemState stage_generate(const PipelineSpec& spec) { return generate(spec.gen); }

void write_config_outputs(const PipelineSpec& spec, const SystemState& state) {
    fs::create_directories(spec.out_dir);
    fs::create_directories(spec.out_dir + "/plots");
    write_lammps_data(state, data_path(spec));
    write_topology(state.topology, topology_path(spec));

    // xy projection of the as-built polymer
    PlotSeries poly{"polymer", {}, {}};
    for (const auto& b : state.beads) {
        if (b.species != Species::Polymer) continue;
        const Vec3 p = b.unwrapped(state.box);
        poly.x.push_back(p.x);
        poly.y.push_back(p.y);
    }
    emit_plot({poly}, PlotKind::Scatter,
              {"Initial configuration (" + to_string(spec.gen.architecture) + ")", "x", "y"},
              spec.out_dir + "/plots/config.svg");
}

Simulation make_simulation(const PipelineSpec& spec, SystemState state) {
    return Simulation(std::move(state), spec.interactions, FeneParams{}, spec.thermostat,
                      spec.run.dt, Rng(spec.run.seed, 2));
}

void write_trajectory_output(const PipelineSpec& spec, const Trajectory& trajectory) {
    fs::create_directories(spec.out_dir);
    write_dump(trajectory, dump_path(spec));
}

ObservableSet stage_analyze(const PipelineSpec& spec, const Trajectory& trajectory,
                            const Topology& topology) {
    AnalysisOptions options;
    options.dt = spec.run.dt;
    return analyze(trajectory, topology, options);
}

void write_analysis_outputs(const PipelineSpec& spec, const ObservableSet& obs) {
    const std::string plots = spec.out_dir + "/plots";
    fs::create_directories(plots);
    fs::create_directories(spec.out_dir + "/analysis");

    auto series_of = [](const std::vector<std::pair<long, double>>& src,
                        const std::string& name) {
        PlotSeries s{name, {}, {}};
        for (const auto& [step, v] : src) {
            s.x.push_back(static_cast<double>(step));
            s.y.push_back(v);
        }
        return s;
    };

    emit_plot({series_of(obs.rg2_series, "Rg^2")}, PlotKind::Line,
              {"Radius of gyration", "step", "Rg^2"}, plots + "/rg2.svg");

    if (obs.ree_series)
        emit_plot({series_of(*obs.ree_series, "R_ee")}, PlotKind::Line,
                  {"End-to-end distance", "step", "R_ee"}, plots + "/ree.svg");

    {
        PlotSeries msd{"MSD", {}, {}};
        for (const auto& [t, v] : obs.msd.curve) {
            msd.x.push_back(t);
            msd.y.push_back(v);
        }
        PlotSeries fit{"6 D t", {}, {}};
        for (const auto& [t, v] : obs.msd.curve) {
            fit.x.push_back(t);
            fit.y.push_back(6.0 * obs.msd.diffusion * t);
        }
        emit_plot({msd, fit}, PlotKind::Line,
                  {"Mean square displacement, D = " + fmt(obs.msd.diffusion), "t", "MSD"},
                  plots + "/msd.svg");
    }

    {
        PlotSeries pq{"P(q)", {}, {}};
        for (const auto& [q, v] : obs.form_factor)
            if (v > 0.0) {  // log-log plot; the non-positive tail is not drawable
                pq.x.push_back(q);
                pq.y.push_back(v);
            }
        if (!pq.x.empty())
            emit_plot({pq}, PlotKind::LogLog, {"Form factor", "q", "P(q)"},
                      plots + "/pq.svg");
    }

    if (!obs.rdf.empty()) {
        PlotSeries gr{"g(r)", {}, {}};
        for (const auto& [r, v] : obs.rdf) {
            gr.x.push_back(r);
            gr.y.push_back(v);
        }
        emit_plot({gr}, PlotKind::Line, {"Pair distance distribution", "r", "g(r)"},
                  plots + "/gr.svg");
    }

    if (obs.lp) {
        PlotSeries corr{"<cos theta(s)>", {}, {}};
        for (const auto& [s, c] : obs.lp->correlation) {
            corr.x.push_back(static_cast<double>(s));
            corr.y.push_back(c);
        }
        std::vector<PlotSeries> series{corr};
        if (!obs.lp->infinite) {
            PlotSeries fit{"exp(-s/l_p)", {}, {}};
            for (const auto& [s, c] : obs.lp->correlation) {
                fit.x.push_back(static_cast<double>(s));
                fit.y.push_back(std::exp(-static_cast<double>(s) / obs.lp->lp));
            }
            series.push_back(std::move(fit));
        }
        const std::string lp_label =
            obs.lp->infinite ? std::string("inf") : fmt(obs.lp->lp);
        emit_plot(series, PlotKind::Line,
                  {"Bond correlation, l_p = " + lp_label, "s", "<cos theta(s)>"},
                  plots + "/bond_corr.svg");
    }

    std::ofstream summary(spec.out_dir + "/analysis/summary.tsv");
    if (!summary) throw Error("cannot write analysis summary");
    summary << "# observable\tvalue\n";
    summary << "rg2_mean\t" << fmt(obs.rg2_mean) << '\n';
    if (obs.ree_mean) summary << "ree_mean\t" << fmt(*obs.ree_mean) << '\n';
    if (obs.lp)
        summary << "lp\t" << (obs.lp->infinite ? std::string("inf") : fmt(obs.lp->lp))
                << '\n';
    summary << "D\t" << fmt(obs.msd.diffusion) << '\n';
}

namespace {

ReportContext make_context(const PipelineSpec& spec, const SystemState& initial) {
    ReportContext ctx;
    ctx.title = "Simulation report: " + to_string(spec.gen.architecture) + " polymer";
    std::ostringstream os;
    os << "Coarse-grained molecular dynamics of a " << to_string(spec.gen.architecture)
       << " polymer in a periodic box of side " << fmt(spec.gen.B)
       << " with solvent number density " << fmt(spec.gen.n_s)
       << ". The configuration was built from seed " << spec.gen.seed
       << ", integrated under a " << to_string(spec.thermostat.kind)
       << " thermostat for " << spec.run.steps << " steps at dt = " << fmt(spec.run.dt)
       << ", and averaged observables use the second half of the trajectory.";
    ctx.narrative = os.str();

    for (const auto& [k, v] : describe(spec)) {
        if (k == "eps_pp" || k == "eps_ss" || k == "eps_sp" || k == "thermostat" ||
            k == "T" || k == "gamma" || k == "Q" || k == "steps" || k == "dt" ||
            k == "dump_every" || k == "seed") {
            ctx.parameters.emplace_back(k, v);
        } else if (k != "out" && k != "sweep") {
            ctx.configuration.emplace_back(k, v);
        }
    }
    ctx.configuration.emplace_back("polymer beads", std::to_string(initial.polymer_count()));
    ctx.configuration.emplace_back("solvent beads", std::to_string(initial.solvent_count()));
    ctx.configuration.emplace_back("bonds", std::to_string(initial.bonds.size()));
    return ctx;
}

} // namespace

std::string stage_report(const PipelineSpec& spec, const SystemState& initial,
                         const ObservableSet& obs) {
    std::vector<std::pair<std::string, std::string>> plots;
    auto add_if = [&](const std::string& caption, const std::string& rel) {
        if (fs::exists(fs::path(spec.out_dir) / rel)) plots.emplace_back(caption, rel);
    };
    add_if("Initial configuration", "plots/config.svg");
    add_if("Radius of gyration", "plots/rg2.svg");
    add_if("End-to-end distance", "plots/ree.svg");
    add_if("Mean square displacement", "plots/msd.svg");
    add_if("Form factor", "plots/pq.svg");
    add_if("Pair distance distribution", "plots/gr.svg");
    add_if("Bond correlation", "plots/bond_corr.svg");

    const std::string path = report_path(spec);
    write_report(make_context(spec, initial), obs, plots, path);
    return path;
}

namespace {

int run_single(const PipelineSpec& spec, std::ostream& log, ObservableSet* obs_out) {
    try {
        fs::create_directories(spec.out_dir);
        log << "[generate] " << to_string(spec.gen.architecture) << " polymer, seed "
            << spec.gen.seed << '\n';
        SystemState initial = stage_generate(spec);
        write_config_outputs(spec, initial);
        log << "[generate] " << initial.polymer_count() << " polymer beads, "
            << initial.solvent_count() << " solvent beads, " << initial.bonds.size()
            << " bonds -> " << data_path(spec) << '\n';

        log << "[simulate] " << spec.run.steps << " steps under "
            << to_string(spec.thermostat.kind) << " thermostat\n";
        Simulation sim = make_simulation(spec, initial);
        sim.run(spec.run.steps, spec.run.dump_every);
        write_trajectory_output(spec, sim.trajectory());
        log << "[simulate] " << sim.trajectory().frames.size() << " frames -> "
            << dump_path(spec) << '\n';

        log << "[analyze] second-half window\n";
        const ObservableSet obs =
            stage_analyze(spec, sim.trajectory(), initial.topology);
        write_analysis_outputs(spec, obs);
        if (obs_out) *obs_out = obs;

        const std::string report = stage_report(spec, initial, obs);
        log << "[report] " << report << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        std::ofstream marker(spec.out_dir + "/FAILED");
        marker << e.what() << '\n';
        return kExitRuntime;
    }
}

std::string sweep_dir_name(const std::string& key, double value) {
    std::string v = fmt(value);
    for (auto& c : v)
        if (c == '.') c = 'p';
    return key + "_" + v;
}

} // namespace

int run_pipeline(const PipelineSpec& spec, std::ostream& log) {
    const auto bad = spec.validate();
    if (!bad.empty()) {
        log << "invalid pipeline spec:\n";
        for (const auto& m : bad) log << "  - " << m << '\n';
        return kExitValidation;
    }

    if (!spec.is_sweep()) return run_single(spec, log, nullptr);

    // one sub-run per sweep value, then a combined summary
    struct Row {
        double value;
        std::string dir;
        ObservableSet obs;
    };
    std::vector<Row> rows;
    for (double v : spec.sweep_values) {
        PipelineSpec sub = spec;
        sub.sweep_key.clear();
        sub.sweep_values.clear();
        const std::string err = set_pipeline_key(sub, spec.sweep_key, fmt(v));
        if (!err.empty()) {
            log << "sweep error: " << err << '\n';
            return kExitValidation;
        }
        const std::string leaf = sweep_dir_name(spec.sweep_key, v);
        sub.out_dir = spec.out_dir + "/" + leaf;
        log << "== sweep " << spec.sweep_key << " = " << fmt(v) << " ==\n";
        Row row{v, leaf, {}};
        const int rc = run_single(sub, log, &row.obs);
        if (rc != kExitOk) return rc;
        rows.push_back(std::move(row));
    }

    fs::create_directories(spec.out_dir);
    std::ofstream summary(spec.out_dir + "/summary.tsv");
    summary << "# " << spec.sweep_key << "\trg2_mean\tree_mean\tlp\tD\n";
    for (const auto& row : rows) {
        summary << fmt(row.value) << '\t' << fmt(row.obs.rg2_mean) << '\t'
                << (row.obs.ree_mean ? fmt(*row.obs.ree_mean) : std::string("-")) << '\t';
        if (row.obs.lp)
            summary << (row.obs.lp->infinite ? std::string("inf") : fmt(row.obs.lp->lp));
        else
            summary << '-';
        summary << '\t' << fmt(row.obs.msd.diffusion) << '\n';
    }

    std::ofstream md(spec.out_dir + "/report.md");
    md << "# Sweep report: " << spec.sweep_key << "\n\n";
    md << "One sub-run per value of `" << spec.sweep_key
       << "`; all other parameters shared.\n\n";
    md << "| " << spec.sweep_key << " | mean Rg^2 | mean R_ee | l_p | D | report |\n";
    md << "|---|---|---|---|---|---|\n";
    for (const auto& row : rows) {
        md << "| " << fmt(row.value) << " | " << fmt(row.obs.rg2_mean) << " | "
           << (row.obs.ree_mean ? fmt(*row.obs.ree_mean) : std::string("—")) << " | ";
        if (row.obs.lp)
            md << (row.obs.lp->infinite ? std::string("inf") : fmt(row.obs.lp->lp));
        else
            md << "—";
        md << " | " << fmt(row.obs.msd.diffusion) << " | [" << row.dir << "](" << row.dir
           << "/report.md) |\n";
    }
    log << "[sweep] " << rows.size() << " runs -> " << spec.out_dir << "/report.md\n";
    return kExitOk;
}

int run_pipeline(const std::string& spec_path, const PipelineOverrides& overrides,
                 std::ostream& log) {
    ParsedPipeline parsed = parse_pipeline_file(spec_path);
    if (overrides.out_dir) parsed.spec.out_dir = *overrides.out_dir;
    if (overrides.seed) {
        parsed.spec.gen.seed = *overrides.seed;
        parsed.spec.run.seed = *overrides.seed;
    }
    if (!parsed.errors.empty()) {
        log << "spec file errors:\n";
        for (const auto& m : parsed.errors) log << "  - " << m << '\n';
        return kExitValidation;
    }
    return run_pipeline(parsed.spec, log);
}

} // namespace topomd
