// Command-line driver for the verification toolkit.
//
// Subcommands:
//   verify        check one weighted identity for a catalog triple
//   derive-weight compare the derived weight against the closed form at a point
//   constants     extremal constants of the remainder quotients
//   hpw           sharp uncertainty-principle deficit for a test function
//   bessel        radial balance residual of a catalog triple
//   campaign      run a batch of verify configurations from a JSON file
//
// Exit codes: 0 = all checks passed, 1 = a check failed, 2 = usage or
// configuration error.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grushin/calculus.hpp"
#include "grushin/cp.hpp"
#include "grushin/parser.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/report_io.hpp"
#include "grushin/space.hpp"
#include "grushin/verifier.hpp"
#include "grushin/weights.hpp"

namespace {

using grushin::Params;

struct SpaceOpts {
    int m = 1;
    int k = 1;
    double gamma = 1.0;
};

struct QuadOpts {
    double box_lo = -2.05;
    double box_hi = 2.05;
    std::optional<int> nodes;
    std::optional<int> panels;
    double exclusion_x = 0.0;
    double exclusion_origin = 0.0;
    std::optional<std::size_t> budget;
};

void add_space_options(CLI::App* cmd, SpaceOpts& s) {
    cmd->add_option("--m", s.m, "x-block dimension (>= 1)");
    cmd->add_option("--k", s.k, "y-block dimension (>= 0)");
    cmd->add_option("--gamma", s.gamma, "anisotropy exponent (>= 0)");
}

void add_quad_options(CLI::App* cmd, QuadOpts& q) {
    cmd->add_option("--box-lo", q.box_lo, "lower edge of the integration cube");
    cmd->add_option("--box-hi", q.box_hi, "upper edge of the integration cube");
    cmd->add_option("--nodes", q.nodes, "Gauss-Legendre nodes per panel per axis");
    cmd->add_option("--panels", q.panels, "panels per axis at base resolution");
    cmd->add_option("--exclusion-x", q.exclusion_x, "drop nodes with |x| below this");
    cmd->add_option("--exclusion-origin", q.exclusion_origin,
                    "drop nodes with rho below this");
    cmd->add_option("--budget", q.budget, "max integrand evaluations per integral");
}

grushin::QuadratureSettings make_settings(int dim, const QuadOpts& q) {
    auto s = grushin::QuadratureSettings::cube(dim, q.box_lo, q.box_hi);
    if (q.nodes) s.nodes_per_axis = *q.nodes;
    if (q.panels) s.panels_per_axis = *q.panels;
    s.exclusion_x = q.exclusion_x;
    s.exclusion_origin = q.exclusion_origin;
    if (q.budget) s.node_budget = *q.budget;
    return s;
}

Params parse_params(const std::vector<std::string>& kvs, double p) {
    Params ps;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        std::size_t used = 0;
        const std::string rest = kv.substr(eq + 1);
        double value = 0.0;
        try {
            value = std::stod(rest, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("--param " + key + ": bad number '" + rest + "'");
        }
        if (used != rest.size())
            throw std::invalid_argument("--param " + key + ": bad number '" + rest + "'");
        ps[key] = value;
    }
    ps["p"] = p;
    return ps;
}

std::vector<double> parse_coords(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size())
            throw std::invalid_argument("bad coordinate list '" + text + "'");
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
    out << text;
}

grushin::RunDescriptor describe(const std::string& name, const SpaceOpts& so,
                                const Params& ps, const grushin::FieldExpr& f) {
    grushin::RunDescriptor run;
    run.name = name;
    run.m = so.m;
    run.k = so.k;
    run.gamma = so.gamma;
    run.params = ps;
    run.f_text = f.is_valid() ? grushin::to_text(f) : "";
    return run;
}

// ---------------------------------------------------------------------------
// campaign

struct CampaignRun {
    SpaceOpts space;
    std::string key;
    Params params;
    std::string f_text;
    grushin::QuadratureSettings settings;
    double tolerance = 1e-3;
};

CampaignRun parse_campaign_run(const nlohmann::json& j) {
    CampaignRun run;
    if (!j.is_object()) throw std::invalid_argument("campaign: each run must be an object");
    run.key = j.at("key").get<std::string>();
    run.space.m = j.value("m", 1);
    run.space.k = j.value("k", 1);
    run.space.gamma = j.value("gamma", 1.0);
    if (!j.contains("params") || !j.at("params").is_object())
        throw std::invalid_argument("campaign: run '" + run.key +
                                    "' needs a params object (including p)");
    for (const auto& [key, value] : j.at("params").items())
        run.params[key] = value.get<double>();
    run.f_text = j.value("f", std::string("bump((rho - 1.5) / 0.5)"));

    const int dim = run.space.m + run.space.k;
    const double lo = j.value("box_lo", -2.05);
    const double hi = j.value("box_hi", 2.05);
    run.settings = grushin::QuadratureSettings::cube(dim, lo, hi);
    if (j.contains("box")) {
        const auto& box = j.at("box");
        if (!box.is_array() || static_cast<int>(box.size()) != dim)
            throw std::invalid_argument("campaign: box must list [lo, hi] per axis");
        run.settings.box.clear();
        for (const auto& ab : box)
            run.settings.box.push_back({ab.at(0).get<double>(), ab.at(1).get<double>()});
    }
    if (j.contains("nodes")) run.settings.nodes_per_axis = j.at("nodes").get<int>();
    if (j.contains("panels")) run.settings.panels_per_axis = j.at("panels").get<int>();
    if (j.contains("exclusion_x"))
        run.settings.exclusion_x = j.at("exclusion_x").get<double>();
    if (j.contains("exclusion_origin"))
        run.settings.exclusion_origin = j.at("exclusion_origin").get<double>();
    if (j.contains("budget")) run.settings.node_budget = j.at("budget").get<std::size_t>();
    run.tolerance = j.value("tol", 1e-3);
    return run;
}

int run_campaign(const std::string& config_path, int jobs, const std::string& csv_path,
                 const std::string& json_path) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file '" + config_path + "'");
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_array()) throw std::invalid_argument("campaign: config must be a JSON array");

    std::vector<CampaignRun> runs;
    for (const auto& j : doc) runs.push_back(parse_campaign_run(j));
    if (runs.empty()) throw std::invalid_argument("campaign: config lists no runs");
    if (jobs < 1) throw std::invalid_argument("campaign: --jobs must be >= 1");

    std::vector<grushin::VerificationReport> reports(runs.size());
    std::vector<std::string> errors(runs.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) break;
            try {
                const CampaignRun& r = runs[i];
                grushin::GrushinSpace space(r.space.m, r.space.k, r.space.gamma);
                grushin::IdentitySpec spec{space,
                                           grushin::catalog_get(r.key, space, r.params),
                                           grushin::parse(r.f_text), r.settings,
                                           r.tolerance};
                reports[i] = grushin::verify_identity(spec);
            } catch (const std::exception& ex) {
                errors[i] = ex.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < runs.size(); ++i)
        if (!errors[i].empty())
            throw std::invalid_argument("campaign: run " + std::to_string(i) + " (" +
                                        runs[i].key + "): " + errors[i]);

    std::string csv = grushin::campaign_csv_header();
    std::string json_out = "[\n";
    bool all_pass = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const grushin::RunDescriptor run = [&] {
            grushin::RunDescriptor d;
            d.name = runs[i].key;
            d.m = runs[i].space.m;
            d.k = runs[i].space.k;
            d.gamma = runs[i].space.gamma;
            d.params = runs[i].params;
            d.f_text = runs[i].f_text;
            return d;
        }();
        csv += grushin::campaign_csv_row(static_cast<int>(i), run, reports[i]);
        if (i) json_out += ",\n";
        std::string obj = grushin::verification_json(run, reports[i]);
        if (!obj.empty() && obj.back() == '\n') obj.pop_back();
        json_out += obj;
        all_pass = all_pass && reports[i].pass;
    }
    json_out += "\n]\n";

    emit(csv, csv_path);
    if (!json_path.empty()) emit(json_out, json_path);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for weighted Hardy-type remainder identities "
                 "in the Baouendi-Grushin calculus"};
    app.require_subcommand(1);

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "verify one identity from the catalog");
    SpaceOpts v_space;
    QuadOpts v_quad;
    std::string v_key;
    double v_p = 2.0;
    std::vector<std::string> v_params;
    std::string v_f = "bump((rho - 1.5) / 0.5)";
    double v_tol = 1e-3;
    std::string v_out;
    verify->add_option("--key", v_key, "catalog triple name")->required();
    verify->add_option("--p", v_p, "integrability exponent p > 1")->required();
    verify->add_option("--param", v_params, "extra triple parameter key=value");
    verify->add_option("--f", v_f, "test function (expression grammar)");
    verify->add_option("--tol", v_tol, "pass threshold on residual_rel");
    verify->add_option("--out", v_out, "write the JSON report here instead of stdout");
    add_space_options(verify, v_space);
    add_quad_options(verify, v_quad);

    // --- derive-weight ---
    auto* derive = app.add_subcommand(
        "derive-weight", "derive w pointwise from (v, phi) and compare to the closed form");
    SpaceOpts d_space;
    std::string d_key;
    double d_p = 2.0;
    std::vector<std::string> d_params;
    std::string d_x = "0.9", d_y = "0.7";
    double d_tol = 1e-9;
    std::string d_out;
    derive->add_option("--key", d_key, "catalog triple name")->required();
    derive->add_option("--p", d_p, "integrability exponent p > 1")->required();
    derive->add_option("--param", d_params, "extra triple parameter key=value");
    derive->add_option("--x", d_x, "comma-separated x coordinates");
    derive->add_option("--y", d_y, "comma-separated y coordinates");
    derive->add_option("--tol", d_tol, "max relative difference accepted");
    derive->add_option("--out", d_out, "write the JSON report here instead of stdout");
    add_space_options(derive, d_space);

    // --- constants ---
    auto* constants = app.add_subcommand(
        "constants", "extremal constants of the remainder quotients at a given p");
    double c_p = 2.0;
    std::string c_out;
    constants->add_option("--p", c_p, "integrability exponent p > 1")->required();
    constants->add_option("--out", c_out, "write the JSON report here instead of stdout");

    // --- hpw ---
    auto* hpw = app.add_subcommand(
        "hpw", "sharp uncertainty-principle deficit for a test function");
    SpaceOpts h_space;
    QuadOpts h_quad;
    h_quad.box_lo = -6.5;
    h_quad.box_hi = 6.5;
    double h_p = 2.0;
    std::string h_f = "exp(-rho ^ 2)";
    std::optional<double> h_alpha;
    double h_tol = 1e-3;
    std::string h_out;
    hpw->add_option("--p", h_p, "integrability exponent p > 1")->required();
    hpw->add_option("--f", h_f, "test function (expression grammar)");
    hpw->add_option("--alpha", h_alpha, "override the optimal seed scale alpha*");
    hpw->add_option("--tol", h_tol, "pass threshold on residual_rel");
    hpw->add_option("--out", h_out, "write the JSON report here instead of stdout");
    add_space_options(hpw, h_space);
    add_quad_options(hpw, h_quad);

    // --- bessel ---
    auto* bessel = app.add_subcommand(
        "bessel", "radial balance residual of a catalog triple");
    SpaceOpts b_space;
    std::string b_key;
    double b_p = 2.0;
    std::vector<std::string> b_params;
    double b_lo = 0.05, b_hi = 3.5;
    int b_n = 300;
    double b_tol = 1e-8;
    std::string b_out;
    bessel->add_option("--key", b_key, "catalog triple name")->required();
    bessel->add_option("--p", b_p, "integrability exponent p > 1")->required();
    bessel->add_option("--param", b_params, "extra triple parameter key=value");
    bessel->add_option("--grid-lo", b_lo, "smallest rho on the residual grid");
    bessel->add_option("--grid-hi", b_hi, "largest rho on the residual grid");
    bessel->add_option("--grid-n", b_n, "number of grid points");
    bessel->add_option("--tol", b_tol, "pass threshold on the normalized residual");
    bessel->add_option("--out", b_out, "write the JSON report here instead of stdout");
    add_space_options(bessel, b_space);

    // --- campaign ---
    auto* campaign = app.add_subcommand(
        "campaign", "run a batch of verify configurations from a JSON file");
    std::string g_config, g_csv, g_json;
    int g_jobs = 1;
    campaign->add_option("--config", g_config, "JSON array of run objects")->required();
    campaign->add_option("--jobs", g_jobs, "worker threads");
    campaign->add_option("--csv", g_csv, "write the CSV table here instead of stdout");
    campaign->add_option("--json", g_json, "also write full JSON reports here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help / error text
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) {
            grushin::GrushinSpace space(v_space.m, v_space.k, v_space.gamma);
            const Params ps = parse_params(v_params, v_p);
            grushin::IdentitySpec spec{space, grushin::catalog_get(v_key, space, ps),
                                       grushin::parse(v_f),
                                       make_settings(space.dim(), v_quad), v_tol};
            const grushin::VerificationReport rep = grushin::verify_identity(spec);
            emit(grushin::verification_json(describe(v_key, v_space, ps, spec.f), rep),
                 v_out);
            return rep.pass ? 0 : 1;
        }

        if (*derive) {
            grushin::GrushinSpace space(d_space.m, d_space.k, d_space.gamma);
            const Params ps = parse_params(d_params, d_p);
            const grushin::WeightTriple triple = grushin::catalog_get(d_key, space, ps);
            const grushin::Point z(parse_coords(d_x), parse_coords(d_y));
            space.check_point(z);
            const double derived = grushin::derive_weight(space, d_p, triple.v, triple.phi, z);
            double closed = grushin::eval_real(triple.w, space, z);
            for (const auto& ex : triple.extras)
                closed += ex.coefficient * grushin::eval_real(ex.weight, space, z);
            const double rel = std::abs(derived - closed) /
                               std::max(std::abs(closed), 1e-30);
            const bool pass = rel <= d_tol;
            std::string s = "{\n  \"spec\": {\"name\": \"" + d_key + "\"},\n";
            s += "  \"derived\": " + grushin::format_number(derived) + ",\n";
            s += "  \"closed_form\": " + grushin::format_number(closed) + ",\n";
            s += "  \"rel_diff\": " + grushin::format_number(rel) + ",\n";
            s += std::string("  \"pass\": ") + (pass ? "true" : "false") + "\n}\n";
            emit(s, d_out);
            return pass ? 0 : 1;
        }

        if (*constants) {
            emit(grushin::constants_json(grushin::extremal_constants(c_p)), c_out);
            return 0;
        }

        if (*hpw) {
            grushin::GrushinSpace space(h_space.m, h_space.k, h_space.gamma);
            const grushin::FieldExpr f = grushin::parse(h_f);
            const auto settings = make_settings(space.dim(), h_quad);
            std::optional<double> alpha;
            if (h_alpha) alpha = *h_alpha;
            const grushin::HpwReport rep =
                grushin::hpw_deficit(space, h_p, f, settings, h_tol, alpha);
            Params ps;
            ps["p"] = h_p;
            emit(grushin::hpw_json(describe("hpw", h_space, ps, f), rep), h_out);
            return rep.pass ? 0 : 1;
        }

        if (*bessel) {
            grushin::GrushinSpace space(b_space.m, b_space.k, b_space.gamma);
            const Params ps = parse_params(b_params, b_p);
            const grushin::WeightTriple triple = grushin::catalog_get(b_key, space, ps);
            if (!triple.radial)
                throw std::invalid_argument("bessel: triple '" + b_key +
                                            "' has no radial profile");
            if (b_n < 2 || !(b_lo > 0.0) || !(b_hi > b_lo))
                throw std::invalid_argument("bessel: need 0 < grid-lo < grid-hi, grid-n >= 2");
            std::vector<double> grid(static_cast<std::size_t>(b_n));
            for (int i = 0; i < b_n; ++i)
                grid[static_cast<std::size_t>(i)] = b_lo + (b_hi - b_lo) * i / (b_n - 1);
            const double res = grushin::bessel_residual(
                space, b_p, triple.radial->v, triple.radial->w, triple.radial->phi, grid);
            const bool pass = res <= b_tol;
            std::string s = "{\n  \"spec\": {\"name\": \"" + b_key + "\"},\n";
            s += "  \"residual\": " + grushin::format_number(res) + ",\n";
            s += std::string("  \"pass\": ") + (pass ? "true" : "false") + "\n}\n";
            emit(s, b_out);
            return pass ? 0 : 1;
        }

        if (*campaign) return run_campaign(g_config, g_jobs, g_csv, g_json);
    } catch (const grushin::BudgetExceeded& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const grushin::ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const grushin::FieldError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
