#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wnev/acceptance.hpp"
#include "wnev/wnev.hpp"

namespace {

using namespace wnev;

struct run_config {
    std::string model = "exp";
    std::string a = "0";
    double rmin = 10.0;
    double rmax = 1e4;
    int ppd = 10;
    std::string c = "0,1";
    double tol = 0.0;
    std::string out;
    std::string format = "csv";
    unsigned threads = 0;
    std::string data_dir = WNEV_DATA_DIR;
    int K = 64;
    bool chains = false;
};

void apply_config(run_config& cfg, const std::map<std::string, std::string>& kv) {
    auto num = [](const std::string& k, const std::string& v) {
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw error(errc::config, "cli", "key '" + k + "' needs a number, got '" + v + "'");
        }
    };
    for (const auto& [k, v] : kv) {
        if (k == "model") cfg.model = v;
        else if (k == "a") cfg.a = v;
        else if (k == "rmin") cfg.rmin = num(k, v);
        else if (k == "rmax") cfg.rmax = num(k, v);
        else if (k == "ppd") cfg.ppd = int(num(k, v));
        else if (k == "c") cfg.c = v;
        else if (k == "tol") cfg.tol = num(k, v);
        else if (k == "out") cfg.out = v;
        else if (k == "format") cfg.format = v;
        else if (k == "threads") cfg.threads = unsigned(num(k, v));
        else if (k == "data") cfg.data_dir = v;
        else if (k == "K") cfg.K = int(num(k, v));
        else if (k == "command") continue;
        else throw error(errc::config, "cli", "unknown config key '" + k + "'");
    }
}

void validate(const run_config& cfg) {
    if (!(cfg.rmin > 0.0 && cfg.rmin < cfg.rmax)) throw error(errc::config, "cli", "need 0 < rmin < rmax");
    if (cfg.ppd < 5) throw error(errc::config, "cli", "points per decade must be at least 5");
    if (cfg.tol < 0.0) throw error(errc::config, "cli", "tolerance must not be negative");
    if (cfg.format != "csv" && cfg.format != "json") throw error(errc::config, "cli", "format must be csv or json");
}

extended_value parse_value(const std::string& s) {
    if (s == "inf" || s == "infinity") return extended_value::infinity();
    return extended_value::finite(io::parse_cplx(s));
}

// A catalog label, or "file:<path>" for divisor data without an evaluator.
meromorphic_model resolve_model(const std::string& label) {
    if (label.rfind("file:", 0) == 0) {
        auto m = model_from_synthetic(io::load_synthetic(label.substr(5)));
        return m;
    }
    return catalog_model(label);
}

void emit(const run_config& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw error(errc::config, "cli", "cannot write '" + cfg.out + "'");
    f << text;
}

int cmd_characteristic(const run_config& cfg) {
    auto f = resolve_model(cfg.model);
    auto grid = log_grid(cfg.rmin, cfg.rmax, cfg.ppd);
    auto rows = characteristic_sweep(f, grid, cfg.tol, cfg.threads);
    emit(cfg, cfg.format == "csv" ? io::characteristic_csv(rows) : io::characteristic_json(rows).dump(1) + "\n");
    return 0;
}

int cmd_wilson_counts(const run_config& cfg) {
    auto f = resolve_model(cfg.model);
    auto a = parse_value(cfg.a);
    cplx c = io::parse_cplx(cfg.c);
    if (cfg.chains) {
        auto rep = detect_chains(f, a, c, cfg.rmax);
        emit(cfg, io::chain_report_json(rep).dump(1) + "\n");
        return 0;
    }
    auto grid = log_grid(cfg.rmin, cfg.rmax, cfg.ppd);
    auto rows = wilson_count_sweep(f, a, grid, c);
    emit(cfg, cfg.format == "csv" ? io::counts_csv(rows) : io::counts_json(rows).dump(1) + "\n");
    return 0;
}

int cmd_verify(const run_config& cfg, const std::string& suite) {
    const auto& known = acceptance::suites();
    if (std::find(known.begin(), known.end(), suite) == known.end())
        throw error(errc::config, "cli", "unknown suite '" + suite + "'");
    acceptance::context ctx;
    ctx.data_dir = cfg.data_dir;
    ctx.threads = cfg.threads;
    std::string text;
    bool ok = true;
    for (const auto& r : acceptance::run(suite, ctx)) {
        text += acceptance::line(r) + "\n";
        ok = ok && r.pass;
    }
    emit(cfg, text);
    return ok ? 0 : 1;
}

// Entire functions for expansion: cosh_sqrt, cosh_pi_sqrt, tau:<k>, poly:<c0;c1;...> (each re,im), or a catalog label.
std::function<cplx(cplx)> expansion_target(const std::string& label, cplx a) {
    if (label == "cosh_sqrt") return [](cplx x) { return std::cosh(sqrt_with_cut(x)); };
    if (label == "cosh_pi_sqrt") return [](cplx x) { return std::cosh(pi * sqrt_with_cut(x)); };
    if (label.rfind("tau:", 0) == 0) {
        int k = std::stoi(label.substr(4));
        return [k, a](cplx x) { return tau(k, a, x); };
    }
    if (label.rfind("poly:", 0) == 0) {
        polynomial p;
        std::stringstream ss(label.substr(5));
        std::string tok;
        while (std::getline(ss, tok, ';')) p.push_back(io::parse_cplx(tok));
        return [p](cplx x) { return polyval(p, x); };
    }
    auto m = catalog_model(label);
    if (m.poles.enumerate(1e6).size() > 0) throw error(errc::parameter, "wilson-series", "expansion needs an entire function");
    return m.as_function();
}

int cmd_expand(const run_config& cfg) {
    cplx a = io::parse_cplx(cfg.a);
    auto f = expansion_target(cfg.model, a);
    auto s = expand(f, a, cfg.K, true);
    auto j = io::series_json(s);
    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
        cplx x = std::polar(10.0 * double(k % 8 + 1) / 8.0, 2.0 * pi * (k + 0.5) / 64.0);
        worst = std::max(worst, std::abs(reconstruct(s, x) - f(x)) / std::max(1.0, std::abs(f(x))));
    }
    j["reconstruction_error"] = worst;
    if (!s.gate_passed) j["warning"] = "growth gate failed: expansion is not guaranteed to converge";
    emit(cfg, j.dump(1) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wilson operator Nevanlinna toolkit"};
    app.require_subcommand(1);
    run_config cfg;
    std::string config_path, suite;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value file; command-line flags win");
        sub->add_option("--model", cfg.model, "model label");
        sub->add_option("--a", cfg.a, "value a as re,im (or inf)");
        sub->add_option("--rmin", cfg.rmin);
        sub->add_option("--rmax", cfg.rmax);
        sub->add_option("--ppd", cfg.ppd, "points per decade");
        sub->add_option("--c", cfg.c, "shift c as re,im");
        sub->add_option("--tol", cfg.tol, "quadrature tolerance");
        sub->add_option("--out", cfg.out, "output path");
        sub->add_option("--format", cfg.format, "csv or json");
        sub->add_option("--threads", cfg.threads);
        sub->add_option("--data", cfg.data_dir, "data directory");
    };
    auto* ch = app.add_subcommand("characteristic", "T(r, f) over a log grid");
    add_common(ch);
    auto* wc = app.add_subcommand("wilson-counts", "Wilson counting functions over a log grid");
    add_common(wc);
    wc->add_flag("--chains", cfg.chains, "emit the chain report at radius rmax");
    auto* vf = app.add_subcommand("verify", "run an acceptance suite");
    add_common(vf);
    vf->add_option("suite", suite)->required();
    auto* ex = app.add_subcommand("expand", "Wilson series expansion");
    add_common(ex);
    ex->add_option("--K", cfg.K, "truncation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: cli: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (!config_path.empty()) {
            // Re-apply command-line values over the file.
            run_config from_cli = cfg;
            run_config merged;
            apply_config(merged, io::load_config(config_path));
            for (auto* sub : app.get_subcommands()) {
                auto take = [&](const char* name, auto& dst, const auto& src) {
                    if (sub->count(name) > 0) dst = src;
                };
                take("--model", merged.model, from_cli.model);
                take("--a", merged.a, from_cli.a);
                take("--rmin", merged.rmin, from_cli.rmin);
                take("--rmax", merged.rmax, from_cli.rmax);
                take("--ppd", merged.ppd, from_cli.ppd);
                take("--c", merged.c, from_cli.c);
                take("--tol", merged.tol, from_cli.tol);
                take("--out", merged.out, from_cli.out);
                take("--format", merged.format, from_cli.format);
                take("--threads", merged.threads, from_cli.threads);
                take("--data", merged.data_dir, from_cli.data_dir);
                if (sub == ex) take("--K", merged.K, from_cli.K);
            }
            merged.chains = from_cli.chains;
            cfg = merged;
        }
        validate(cfg);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (ch->parsed()) return cmd_characteristic(cfg);
        if (wc->parsed()) return cmd_wilson_counts(cfg);
        if (vf->parsed()) return cmd_verify(cfg, suite);
        if (ex->parsed()) return cmd_expand(cfg);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == errc::config ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: computation: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
