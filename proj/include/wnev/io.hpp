#pragma once

#include <fstream>
#include <iomanip>
#include <locale>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "equations.hpp"
#include "errors.hpp"
#include "funcmodel.hpp"
#include "nevanlinna.hpp"
#include "wilson_counting.hpp"
#include "wilson_series.hpp"

namespace wnev::io {

using json = nlohmann::json;

inline std::string fmt(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

inline json cplx_json(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

inline cplx cplx_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    return {j.value("re", 0.0), j.value("im", 0.0)};
}

// "re,im" or "re".
inline cplx parse_cplx(const std::string& s) {
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(is >> re)) throw error(errc::config, "cli", "cannot parse complex value '" + s + "'");
    if (is >> comma) {
        if (comma != ',' || !(is >> im)) throw error(errc::config, "cli", "cannot parse complex value '" + s + "'");
    }
    std::string rest;
    if (is >> rest) throw error(errc::config, "cli", "trailing text in complex value '" + s + "'");
    return {re, im};
}

inline std::string characteristic_csv(const std::vector<characteristic_row>& rows) {
    std::string out = "r,m,N,T,quadrature_error\n";
    for (const auto& r : rows)
        out += fmt(r.r) + "," + fmt(r.m) + "," + fmt(r.N) + "," + fmt(r.T) + "," + fmt(r.quadrature_error) + "\n";
    return out;
}

inline json characteristic_json(const std::vector<characteristic_row>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"r", r.r}, {"m", r.m}, {"N", r.N}, {"T", r.T}, {"quadrature_error", r.quadrature_error}});
    return a;
}

inline std::string counts_csv(const std::vector<wilson_count_row>& rows) {
    std::string out = "r,nW,nW_tilde,NW,NW_tilde\n";
    for (const auto& r : rows)
        out += fmt(r.r) + "," + std::to_string(r.n_W) + "," + std::to_string(r.n_W_tilde) + "," + fmt(r.N_W) + "," +
               fmt(r.N_W_tilde) + "\n";
    return out;
}

inline json counts_json(const std::vector<wilson_count_row>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"r", r.r}, {"n_W", r.n_W}, {"n_W_tilde", r.n_W_tilde}, {"N_W", r.N_W}, {"N_W_tilde", r.N_W_tilde}});
    return a;
}

inline json divisor_json(const divisor& d) {
    return {{"re", d.location.real()},
            {"im", d.location.imag()},
            {"mult", d.multiplicity},
            {"kind", d.kind == divisor_kind::zero ? "zero" : "pole"}};
}

inline json chain_report_json(const chain_report& rep) {
    json chains = json::array();
    for (const auto& c : rep.chains) {
        json pts = json::array();
        for (const auto& p : c.points) pts.push_back(cplx_json(p));
        chains.push_back({{"start", cplx_json(c.start)},
                          {"points", pts},
                          {"mults", c.multiplicities},
                          {"truncated", c.truncated},
                          {"truncation_radius", c.truncation_radius}});
    }
    json residual = json::array();
    for (const auto& d : rep.residual) residual.push_back(divisor_json(d));
    json a = rep.a.infinite ? json("infinity") : cplx_json(rep.a.value);
    return {{"a", a}, {"chains", chains}, {"residual", residual}};
}

inline json series_json(const wilson_series& s) {
    json coeffs = json::array();
    for (const auto& c : s.coefficients) coeffs.push_back(cplx_json(c));
    json j{{"a", cplx_json(s.a)}, {"coeffs", coeffs}, {"K", s.K}};
    if (s.gate_checked) {
        j["gate_margin"] = s.gate_margin;
        j["gate_passed"] = s.gate_passed;
    }
    return j;
}

inline wilson_series series_from_json(const json& j) {
    wilson_series s;
    s.a = cplx_from_json(j.at("a"));
    for (const auto& c : j.at("coeffs")) s.coefficients.push_back(cplx_from_json(c));
    s.K = int(s.coefficients.size()) - 1;
    if (j.contains("gate_margin")) {
        s.gate_checked = true;
        s.gate_margin = j.at("gate_margin").get<double>();
        s.gate_passed = s.gate_margin > 0.0;
    }
    return s;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::config, "io", "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw error(errc::config, "io", "malformed JSON in '" + path + "': " + e.what());
    }
}

// An array of {re, im, mult, kind}, or an object holding it under "divisors".
inline synthetic_divisor_data synthetic_from_json(const json& doc) {
    const json& arr = doc.is_object() ? doc.at("divisors") : doc;
    if (!arr.is_array()) throw error(errc::config, "io", "divisor data must be an array");
    synthetic_divisor_data data;
    for (const auto& e : arr) {
        divisor d;
        d.location = {e.at("re").get<double>(), e.at("im").get<double>()};
        d.multiplicity = e.value("mult", 1);
        if (d.multiplicity < 1) throw error(errc::config, "io", "divisor multiplicity must be positive");
        std::string kind = e.value("kind", std::string("zero"));
        if (kind == "zero") d.kind = divisor_kind::zero;
        else if (kind == "pole") d.kind = divisor_kind::pole;
        else throw error(errc::config, "io", "divisor kind must be zero or pole");
        data.divisors.push_back(d);
    }
    data.divisors = normalize_divisors(std::move(data.divisors));
    return data;
}

inline synthetic_divisor_data load_synthetic(const std::string& path) { return synthetic_from_json(read_json_file(path)); }

// {coeffs: [polynomial lists or labels], offset: first shift, shift: "+", c: {re, im}}.
inline interpolation_equation equation_from_json(const json& j) {
    if (j.value("shift", std::string("+")) != "+") throw error(errc::config, "io", "only '+' shift orientation");
    interpolation_equation eq;
    if (j.contains("c")) eq.c = cplx_from_json(j.at("c"));
    int shift = j.value("offset", 0);
    for (const auto& c : j.at("coeffs")) {
        if (c.is_string()) {
            eq.terms.push_back(labelled_term(shift, c.get<std::string>()));
        } else if (c.is_array()) {
            polynomial p;
            for (const auto& v : c) p.push_back(cplx_from_json(v));
            eq.terms.push_back(polynomial_term(shift, p));
        } else {
            throw error(errc::config, "io", "coefficient must be a label or a coefficient list");
        }
        ++shift;
    }
    eq.validate();
    return eq;
}

// Flat key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw error(errc::config, "cli", "config line " + std::to_string(lineno) + " is not key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw error(errc::config, "cli", "empty key on config line " + std::to_string(lineno));
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

inline std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::config, "cli", "cannot open config '" + path + "'");
    return parse_config(in);
}

} // namespace wnev::io
