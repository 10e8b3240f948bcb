// Batch front-end: indices, le, phase-diagram, eigen, gordon, lemma-check.
// Exit codes: 0 success, 1 violated lemma, 2 config error, 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mosaic/config.hpp"
#include "mosaic/harness_suite.hpp"
#include "mosaic/io.hpp"
#include "mosaic/parallel.hpp"
#include "mosaic/spectral.hpp"
#include "mosaic/svg.hpp"

namespace fs = std::filesystem;
using namespace mosaic;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    int threads = 1;
    double seed_phase = -1.0;
    int precision_bits = 0;
};

Json load_config_json(const GlobalOpts& g, const Json& fallback) {
    Json j = fallback;
    if (!g.config_path.empty()) {
        std::ifstream in(g.config_path);
        if (!in) throw ConfigError("cannot read config '" + g.config_path + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        try {
            j = Json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config parse: ") + e.what());
        }
    }
    if (g.seed_phase >= 0.0) j["seed_phase"] = g.seed_phase;
    if (g.precision_bits > 0 && j.contains("frequency")) j["frequency"]["precision_bits"] = g.precision_bits;
    return j;
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

Json default_golden_config() {
    Json j;
    j["frequency"] = {{"coeffs", std::vector<int>(30, 1)}, {"precision_bits", 256}};
    j["phase"] = {{"real", 0.1}};
    j["model"] = {{"E", {{"min", -3.0}, {"max", 3.0}, {"count", 61}}}, {"lambda", {1.0}}};
    return j;
}

int cmd_indices(const GlobalOpts& g) {
    Json j = load_config_json(g, default_golden_config());
    RunConfig rc = parse_config(j);
    int depth = rc.task.value("depth", rc.cf.depth() - 1);
    int n_min = rc.task.value("n_min", depth / 2 + 1);
    ArithmeticProfile prof = arithmetic_profile(rc.cf, rc.theta, depth, n_min);

    CsvWriter csv(out_path(g, "profile.csv"), {"n", "q_n", "beta_n", "delta_n"}, rc.hash);
    for (int n = 1; n <= depth; ++n)
        csv.row({std::to_string(n), rc.cf.qn(n).get_str(), format_double(prof.beta(n)),
                 format_double(prof.delta(n))});

    Json summary;
    summary["beta_hat"] = prof.beta_hat;
    summary["delta_hat"] = prof.delta_hat;
    summary["delta_alt_hat"] = prof.delta_alt_hat;
    summary["depth"] = depth;
    summary["n_min"] = n_min;
    summary["config"] = rc.hash;
    write_text_file(out_path(g, "profile_summary.json"), summary.dump(2) + "\n");
    std::cout << "indices: beta_hat=" << prof.beta_hat << " delta_hat=" << prof.delta_hat << "\n";
    return 0;
}

int cmd_le(const GlobalOpts& g, long steps, int phases, bool svg) {
    Json j = load_config_json(g, default_golden_config());
    RunConfig rc = parse_config(j);
    if (rc.energies.empty() || rc.lambdas.empty()) throw ConfigError("le: model.E and model.lambda required");
    long per_phase = std::max<long>(1000, steps / std::max(1, phases));

    struct Cell { double E, lam, c, d, dyn, se; };
    std::vector<std::pair<double, double>> cells;
    for (double lam : rc.lambdas)
        for (double E : rc.energies) cells.push_back({E, lam});

    std::vector<Cell> rows = parallel_map<Cell>(cells.size(), g.threads, [&](size_t i) {
        auto [E, lam] = cells[i];
        Cell c{E, lam, 0, 0, 0, 0};
        c.c = lyapunov_closed_form(E, lam).L2;
        c.d = lyapunov_dinf(E, lam).L2;
        ModelParams p = make_params(E, lam, rc.cf, rc.theta);
        LyapunovResult dyn = lyapunov_dynamical(p, per_phase, phases, rc.seed_phase);
        c.dyn = dyn.L2;
        c.se = dyn.std_error;
        return c;
    });

    CsvWriter csv(out_path(g, "le.csv"),
                  {"E", "lambda", "L2_closed", "L2_dinf", "L2_dyn", "std_error", "n_steps"}, rc.hash);
    for (auto& r : rows)
        csv.row({format_double(r.E), format_double(r.lam), format_double(r.c), format_double(r.d),
                 format_double(r.dyn), format_double(r.se), std::to_string(per_phase * phases)});

    if (svg) {
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
        std::vector<SvgSeries> series;
        size_t li = 0;
        for (double lam : rc.lambdas) {
            SvgSeries s;
            s.label = "lambda=" + format_double(lam);
            s.color = colors[li % 5];
            for (auto& r : rows)
                if (r.lam == lam) s.points.push_back({r.E, r.c});
            series.push_back(std::move(s));
            ++li;
        }
        write_text_file(out_path(g, "le.svg"),
                        svg_polyline_chart(series, "two-step Lyapunov exponent", "E", "L2"));
    }
    std::cout << "le: " << rows.size() << " cells -> " << out_path(g, "le.csv") << "\n";
    return 0;
}

int cmd_phase_diagram(const GlobalOpts& g, bool both, bool svg) {
    Json j = load_config_json(g, default_golden_config());
    RunConfig rc = parse_config(j);
    if (rc.energies.empty() || rc.lambdas.empty()) throw ConfigError("phase-diagram: model grids required");
    int depth = rc.task.value("depth", rc.cf.depth() - 1);
    int n_min = rc.task.value("n_min", 1);
    ArithmeticProfile prof = arithmetic_profile(rc.cf, rc.theta, depth, n_min);

    std::vector<ThresholdConvention> convs{ThresholdConvention::SectionTwoLDelta};
    if (both) convs.push_back(ThresholdConvention::TheoremHalfDelta);
    std::string conv_name = rc.task.value("convention", std::string("section4"));
    if (!both) convs[0] = conv_name == "theorem" ? ThresholdConvention::TheoremHalfDelta
                                                 : ThresholdConvention::SectionTwoLDelta;

    CsvWriter csv(out_path(g, "phase_diagram.csv"),
                  {"E", "lambda", "L2", "delta_hat", "convention", "verdict", "margin"}, rc.hash);
    std::vector<HeatCell> heat;
    for (auto conv : convs) {
        auto cells = phase_diagram(rc.energies, rc.lambdas, prof, conv);
        for (auto& c : cells) {
            csv.row({format_double(c.E), format_double(c.lambda), format_double(c.verdict.L2),
                     format_double(prof.delta_hat), to_string(conv), to_string(c.verdict.kind),
                     format_double(c.verdict.margin)});
            if (conv == convs[0]) {
                const char* col = "#808080";
                switch (c.verdict.kind) {
                    case SpectralKind::PurePoint: col = "#1f77b4"; break;
                    case SpectralKind::SingularContinuous: col = "#d62728"; break;
                    case SpectralKind::Boundary: col = "#ffbf00"; break;
                    case SpectralKind::ZeroEnergy: col = "#222222"; break;
                }
                heat.push_back({c.E, c.lambda, col});
            }
        }
    }
    if (svg && rc.energies.size() > 1) {
        double dx = rc.energies.size() > 1 ? rc.energies[1] - rc.energies[0] : 1.0;
        double dy = rc.lambdas.size() > 1 ? rc.lambdas[1] - rc.lambdas[0] : 1.0;
        write_text_file(out_path(g, "phase_diagram.svg"),
                        svg_heatmap(heat, dx, dy, "spectral type", "E", "lambda",
                                    {{"pp", "#1f77b4"}, {"sc", "#d62728"}, {"boundary", "#ffbf00"},
                                     {"zero", "#222222"}}));
    }
    std::cout << "phase-diagram: delta_hat=" << prof.delta_hat << "\n";
    return 0;
}

int cmd_eigen(const GlobalOpts& g, long boxN, std::vector<double> window, bool dump_vectors) {
    Json j = load_config_json(g, default_golden_config());
    RunConfig rc = parse_config(j);
    if (rc.lambdas.empty()) throw ConfigError("eigen: model.lambda required");
    double lam = rc.lambdas.front();
    ModelParams p = make_params(0.0, lam, rc.cf, rc.theta);
    FiniteBox box = build_box(p, boxN);
    std::optional<std::pair<double, double>> win;
    if (window.size() == 2) win = std::make_pair(window[0], window[1]);
    EigenSolveResult eig = eigensolve(box, win);

    int n_scale = 1;
    for (int n = 1; n + 1 < static_cast<int>(rc.cf.q.size()); ++n)
        if (rc.cf.qn(n) * 4 <= boxN) n_scale = n;
    double epsilon = rc.task.value("epsilon", 0.002);
    ArithmeticProfile prof = arithmetic_profile(rc.cf, rc.theta, std::max(n_scale, 1));

    CsvWriter csv(out_path(g, "eigen_decay.csv"),
                  {"pair", "energy", "residual", "peak_site", "slope", "r_squared", "L1_closed"}, rc.hash);
    size_t idx = 0;
    for (auto& pr : eig.pairs) {
        double L1 = lyapunov_closed_form(pr.energy, lam).L1;
        std::string slope = "nan", r2 = "nan";
        try {
            DecayFit fit = decay_fit(pr, rc.cf, n_scale, epsilon, L1, &prof);
            slope = format_double(fit.slope);
            r2 = format_double(fit.r_squared);
        } catch (const Error&) {
        }
        csv.row({std::to_string(idx), format_double(pr.energy), format_double(pr.residual),
                 std::to_string(pr.peak_index - boxN), slope, r2, format_double(L1)});
        ++idx;
    }
    if (dump_vectors) {
        CsvWriter vcsv(out_path(g, "eigen_vectors.csv"), {"pair", "k", "phi_k"}, rc.hash);
        idx = 0;
        for (auto& pr : eig.pairs) {
            for (size_t i = 0; i < pr.vector.size(); ++i)
                vcsv.row({std::to_string(idx), std::to_string(static_cast<long>(i) - boxN),
                          format_double(pr.vector[i])});
            ++idx;
        }
    }
    std::cout << "eigen: " << eig.pairs.size() << " pairs, " << eig.convergence_failures
              << " rejected, sturm_total=" << eig.sturm_total << " dim=" << box.dim() << "\n";
    return 0;
}

int cmd_gordon(const GlobalOpts& g, int n_index, long boxN) {
    Json fallback;
    fallback["frequency"] = {{"liouville", {{"beta", 2.0}, {"depth", 3}}}};
    fallback["phase"] = {{"resonant", {{"delta", 1.5}, {"depth", 2}}}};
    fallback["model"] = {{"E", {0.3, 0.6, 0.9, 1.2, 1.5}}, {"lambda", {0.5}}};
    Json j = load_config_json(g, fallback);
    RunConfig rc = parse_config(j);
    if (rc.energies.empty() || rc.lambdas.empty()) throw ConfigError("gordon: model grids required");
    double lam = rc.lambdas.front();

    int depth = rc.task.value("depth", rc.cf.depth() - 1);
    ArithmeticProfile prof = arithmetic_profile(rc.cf, rc.theta, depth);
    std::vector<int> scales;
    if (n_index > 0) {
        scales.push_back(n_index);
    } else {
        Cos3Scan scan = scan_cos3_subsequence(rc.cf, rc.theta, 0.05, depth, 10000);
        for (int n : scan.subsequence)
            if (rc.cf.qn(n) <= 10000) scales.push_back(n);
    }
    if (scales.empty()) throw ConfigError("gordon: no scale with q_n <= 1e4");

    ModelParams p0 = make_params(0.0, lam, rc.cf, rc.theta);
    FiniteBox box = build_box(p0, boxN);
    EigenSolveResult eig = eigensolve(box);

    CsvWriter csv(out_path(g, "gordon.csv"),
                  {"E_target", "E", "n", "q_n", "g_fwd", "g_bwd", "g_double", "g_max", "L2"}, rc.hash);
    bool all_ok = true;
    for (double Et : rc.energies) {
        const EigenPair* pair = pick_pair_near(eig, Et, boxN);
        if (!pair) throw Error("gordon: no eigenpair within 0.1 of E=" + format_double(Et));
        ModelParams p = make_params(pair->energy, lam, rc.cf, rc.theta);
        for (int n : scales) {
            GordonQuantities q = gordon_quantities(p, n, *pair);
            csv.row({format_double(Et), format_double(pair->energy), std::to_string(n),
                     rc.cf.qn(n).get_str(), format_double(q.g1), format_double(q.g2),
                     format_double(q.g3), format_double(q.max_norm()),
                     format_double(lyapunov_closed_form(pair->energy, lam).L2)});
            if (q.max_norm() < 0.25) all_ok = false;
        }
    }
    std::cout << "gordon: max norms " << (all_ok ? ">= 0.25 at every scale" : "below 0.25 somewhere")
              << "\n";
    return 0;
}

int cmd_lemma_check(const GlobalOpts& g, const std::string& suite, const std::string& json_out) {
    std::vector<std::string> names;
    if (suite == "all") names = {"diophantine-golden", "liouville-beta1", "resonant-phase"};
    else names = {suite};

    Json all = Json::array();
    long violated = 0, holds = 0, inconclusive = 0;
    for (auto& name : names) {
        SuiteResult res = run_all(name);
        violated += res.violated;
        holds += res.holds;
        inconclusive += res.inconclusive;
        for (auto& rep : res.reports) {
            Json r;
            r["lemma_id"] = rep.lemma_id;
            r["params"] = rep.params;
            r["lhs"] = rep.lhs;
            r["rhs"] = rep.rhs;
            r["margin"] = rep.margin;
            r["verdict"] = to_string(rep.verdict);
            if (!rep.notes.empty()) r["notes"] = rep.notes;
            all.push_back(std::move(r));
        }
        std::cout << name << ": " << res.holds << " holds, " << res.violated << " violated, "
                  << res.inconclusive << " inconclusive\n";
    }
    Json top;
    top["reports"] = all;
    top["summary"] = {{"holds", holds}, {"violated", violated}, {"inconclusive", inconclusive}};
    std::string path = json_out.empty() ? out_path(g, "lemma_reports.json") : json_out;
    write_text_file(path, top.dump(2) + "\n");
    return violated > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mosaic-maryland: spectral toolkit for the tangent mosaic lattice model"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--threads", g.threads, "worker threads");
    app.add_option("--seed-phase", g.seed_phase, "seed phase for Weyl sampling");
    app.add_option("--precision-bits", g.precision_bits, "override frequency precision");

    auto* indices = app.add_subcommand("indices", "per-scale beta_n, delta_n profile");

    long steps = 1000000;
    int phases = 4;
    bool le_svg = false;
    auto* le = app.add_subcommand("le", "Lyapunov exponent sweep (closed form, D_inf, dynamical)");
    le->add_option("--steps", steps, "total regularized steps per cell");
    le->add_option("--phases", phases, "Weyl phases per cell");
    le->add_flag("--svg", le_svg, "emit le.svg");

    bool pd_both = false, pd_svg = false;
    auto* pd = app.add_subcommand("phase-diagram", "spectral-type classification over the model grid");
    pd->add_flag("--both-conventions", pd_both, "emit both threshold conventions");
    pd->add_flag("--svg", pd_svg, "emit phase_diagram.svg");

    long boxN = 2000;
    std::vector<double> window;
    bool dump_vectors = false;
    auto* eigen = app.add_subcommand("eigen", "finite-box eigensolve and decay fits");
    eigen->add_option("--box", boxN, "half-width N of the window [-N, N]");
    eigen->add_option("--window", window, "energy window a b")->expected(2);
    eigen->add_flag("--dump-vectors", dump_vectors, "write eigen_vectors.csv");

    int n_index = 0;
    long gbox = 700;
    auto* gordon = app.add_subcommand("gordon", "Gordon norm triples at subsequence scales");
    gordon->add_option("--n-index", n_index, "single scale index (default: cos3 subsequence)");
    gordon->add_option("--box", gbox, "eigenpair box half-width");

    std::string suite = "all", json_out;
    auto* lemma = app.add_subcommand("lemma-check", "run the lemma battery");
    lemma->add_option("--suite", suite, "diophantine-golden | liouville-beta1 | resonant-phase | all");
    lemma->add_option("--json", json_out, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (indices->parsed()) return cmd_indices(g);
        if (le->parsed()) return cmd_le(g, steps, phases, le_svg);
        if (pd->parsed()) return cmd_phase_diagram(g, pd_both, pd_svg);
        if (eigen->parsed()) return cmd_eigen(g, boxN, window, dump_vectors);
        if (gordon->parsed()) return cmd_gordon(g, n_index, gbox);
        if (lemma->parsed()) return cmd_lemma_check(g, suite, json_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
