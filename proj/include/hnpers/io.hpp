#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hnpers/stability.hpp"

namespace hnpers {

using Json = nlohmann::ordered_json;

namespace io {

inline std::string rational_str(const Rational& r) { return r.get_str(); }

inline Json rational_json(const Rational& r) { return rational_str(r); }

inline Json point_json(const Point& p) {
    Json a = Json::array();
    for (const auto& c : p) a.push_back(rational_json(c));
    return a;
}

/// Reads "p/q" strings and integer literals; `where` is a JSON-pointer style path for messages.
inline Rational read_rational(const Json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error&) {
            fail(ErrorKind::parse, where + ": not a rational: \"" + j.get<std::string>() + "\"");
        }
    }
    if (j.is_number_integer()) return Rational(mpz_class(j.dump()));
    fail(ErrorKind::parse, where + ": expected a rational as \"p/q\" string or integer");
}

inline ExtRational read_ext(const Json& j, const std::string& where) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "-inf") return ExtRational::neg_inf();
        if (s == "inf" || s == "+inf") return ExtRational::pos_inf();
    }
    return read_rational(j, where);
}

inline Json ext_json(const ExtRational& x) {
    if (x.is_neg_inf()) return "-inf";
    if (x.is_pos_inf()) return "inf";
    return rational_json(x.value());
}

inline Point read_point(const Json& j, const std::string& where, std::optional<std::size_t> n = {}) {
    if (!j.is_array()) fail(ErrorKind::parse, where + ": expected an array of coordinates");
    if (n && j.size() != *n)
        fail(ErrorKind::parse, where + ": expected " + std::to_string(*n) + " coordinates, got " + std::to_string(j.size()));
    Point p;
    for (std::size_t i = 0; i < j.size(); ++i) p.push_back(read_rational(j[i], where + "/" + std::to_string(i)));
    return p;
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) fail(ErrorKind::parse, where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(ErrorKind::parse, where + ": missing \"" + key + "\"");
    return *it;
}

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < std::min(e.byte > 0 ? e.byte - 1 : 0, text.size()); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(ErrorKind::parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::usage, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace io

// ---- modules ----

inline Json presentation_to_json(const Presentation& p) {
    Json j;
    j["n"] = p.n;
    if (p.prime)
        j["field"] = Json{{"prime", *p.prime}};
    else
        j["field"] = "rational";
    j["generators"] = Json::array();
    for (const auto& g : p.generators) j["generators"].push_back(io::point_json(g));
    j["relations"] = Json::array();
    for (const auto& r : p.relations) j["relations"].push_back(Json{{"point", io::point_json(r.point)}, {"coeffs", io::point_json(r.coeffs)}});
    return j;
}

inline Presentation presentation_from_json(const Json& j) {
    using namespace io;
    Presentation p;
    const Json& n = member(j, "n", "");
    if (!n.is_number_unsigned() || n.get<std::size_t>() == 0) fail(ErrorKind::parse, "/n: expected a positive integer");
    p.n = n.get<std::size_t>();
    if (auto it = j.find("field"); it != j.end()) {
        if (it->is_string() && *it == "rational") {
        } else if (it->is_object() && it->contains("prime") && (*it)["prime"].is_number_unsigned()) {
            p.prime = (*it)["prime"].get<std::uint32_t>();
        } else {
            fail(ErrorKind::parse, "/field: expected \"rational\" or {\"prime\": p}");
        }
    }
    const Json& gens = member(j, "generators", "");
    if (!gens.is_array()) fail(ErrorKind::parse, "/generators: expected an array");
    for (std::size_t k = 0; k < gens.size(); ++k) p.generators.push_back(read_point(gens[k], "/generators/" + std::to_string(k), p.n));
    if (auto it = j.find("relations"); it != j.end()) {
        if (!it->is_array()) fail(ErrorKind::parse, "/relations: expected an array");
        for (std::size_t k = 0; k < it->size(); ++k) {
            std::string where = "/relations/" + std::to_string(k);
            const Json& r = (*it)[k];
            Presentation::Relation rel{read_point(member(r, "point", where), where + "/point", p.n),
                                       read_point(member(r, "coeffs", where), where + "/coeffs", p.generators.size())};
            p.relations.push_back(std::move(rel));
        }
    }
    p.validate();
    return p;
}

/// Text layout: a "firep" header line, then the generator and relation counts,
/// then one row per generator ("coords ;") and per relation ("coords ; coeffs").
/// Blank lines and lines starting with '#' are ignored.
inline Presentation parse_firep(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    auto err = [&](const std::string& msg) { fail(ErrorKind::parse, "line " + std::to_string(lineno) + ": " + msg); };
    auto next_line = [&](std::string& out) {
        while (std::getline(in, raw)) {
            ++lineno;
            auto start = raw.find_first_not_of(" \t\r");
            if (start == std::string::npos || raw[start] == '#') continue;
            out = raw.substr(start);
            while (!out.empty() && (out.back() == '\r' || out.back() == ' ' || out.back() == '\t')) out.pop_back();
            return true;
        }
        return false;
    };
    auto tokens = [](const std::string& s) {
        std::istringstream ts(s);
        std::vector<std::string> out;
        for (std::string t; ts >> t;) out.push_back(t);
        return out;
    };
    auto count = [&](const std::string& tok) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) err("expected a count, got \"" + tok + "\"");
        return static_cast<std::size_t>(std::stoul(tok));
    };

    std::string line;
    if (!next_line(line) || line != "firep") err("expected the header line \"firep\"");
    std::vector<std::size_t> counts;
    while (counts.size() < 2) {
        if (!next_line(line)) err("expected generator and relation counts");
        for (const auto& t : tokens(line)) {
            if (counts.size() == 2) err("unexpected token \"" + t + "\" after the counts");
            counts.push_back(count(t));
        }
    }

    Presentation p;
    std::optional<std::size_t> n;
    auto row = [&](bool relation) {
        if (!next_line(line)) err(relation ? "missing relation row" : "missing generator row");
        auto semi = line.find(';');
        if (semi == std::string::npos) err("row needs \"coords ; coeffs\"");
        if (line.find(';', semi + 1) != std::string::npos) err("row has more than one ';'");
        Point coords;
        for (const auto& t : tokens(line.substr(0, semi))) {
            try {
                coords.push_back(parse_rational(t));
            } catch (const Error&) {
                err("bad coordinate \"" + t + "\"");
            }
        }
        if (coords.empty()) err("row has no coordinates");
        if (!n) n = coords.size();
        if (coords.size() != *n) err("expected " + std::to_string(*n) + " coordinates");
        std::vector<Rational> coeffs;
        for (const auto& t : tokens(line.substr(semi + 1))) {
            try {
                coeffs.push_back(parse_rational(t));
            } catch (const Error&) {
                err("bad coefficient \"" + t + "\"");
            }
        }
        if (!relation && !coeffs.empty()) err("generator rows take no coefficients");
        if (relation && coeffs.size() != counts[0])
            err("relation rows need " + std::to_string(counts[0]) + " coefficients");
        return std::make_pair(coords, coeffs);
    };
    for (std::size_t k = 0; k < counts[0]; ++k) p.generators.push_back(row(false).first);
    for (std::size_t k = 0; k < counts[1]; ++k) {
        auto [c, f] = row(true);
        p.relations.push_back({c, f});
    }
    if (next_line(line)) err("trailing content after the last relation");
    p.n = n.value_or(1);
    try {
        p.validate();
    } catch (const Error& e) {
        fail(ErrorKind::parse, std::string("firep: ") + e.what());
    }
    return p;
}

inline std::string write_firep(const Presentation& p) {
    std::string out = "firep\n" + std::to_string(p.generators.size()) + " " + std::to_string(p.relations.size()) + "\n";
    auto coords = [](const Point& x) {
        std::string s;
        for (const auto& c : x) s += c.get_str() + " ";
        return s;
    };
    for (const auto& g : p.generators) out += coords(g) + ";\n";
    for (const auto& r : p.relations) {
        out += coords(r.point) + ";";
        for (const auto& c : r.coeffs) out += " " + c.get_str();
        out += "\n";
    }
    return out;
}

/// JSON documents start with '{'; anything else is read as firep text.
inline Presentation parse_module_text(const std::string& text) {
    auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && text[start] == '{') return presentation_from_json(io::parse_json_text(text));
    return parse_firep(text);
}

inline Presentation load_module(const std::string& path) { return parse_module_text(io::read_file(path)); }

// ---- stability conditions ----

inline Json step_factor_json(const StepFactor& f) {
    return Json{{"grid", io::point_json(f.grid)},
                {"values", io::point_json(f.values)},
                {"tails", Json::array({io::rational_json(f.left_ratio), io::rational_json(f.right_ratio)})}};
}

inline Json condition_to_json(const StabilityCondition& z) {
    Json j;
    j["n"] = z.n;
    j["mode"] = to_string(z.mode);
    j["alpha"] = Json::array();
    for (const auto& t : z.alpha) {
        Json carrier = Json::array();
        for (const auto& k : t.carrier) {
            if (k.is_point())
                carrier.push_back(io::rational_json(k.lo.value()));
            else
                carrier.push_back(Json::array({io::ext_json(k.lo), io::ext_json(k.hi)}));
        }
        Json term{{"carrier", carrier}, {"coeff", io::rational_json(t.coeff)}};
        if (t.density_slope) term["density_slope"] = io::rational_json(*t.density_slope);
        j["alpha"].push_back(term);
    }
    Json terms = Json::array();
    for (const auto& bt : z.beta.terms) {
        Json axes = Json::array();
        for (const auto& f : bt.axes) axes.push_back(step_factor_json(f));
        terms.push_back(axes);
    }
    j["beta"] = Json{{"terms", terms}};
    return j;
}

/// `default_box` resolves the "default" β against a module's bounding box.
inline StabilityCondition condition_from_json(const Json& j, const std::optional<GridFunction>& default_box = {}) {
    using namespace io;
    StabilityCondition z;
    const Json& mode = member(j, "mode", "");
    if (mode == "eval")
        z.mode = StabilityMode::eval;
    else if (mode == "step")
        z.mode = StabilityMode::step;
    else
        fail(ErrorKind::parse, "/mode: expected \"eval\" or \"step\"");

    std::optional<std::size_t> n;
    if (auto it = j.find("n"); it != j.end()) {
        if (!it->is_number_unsigned() || it->get<std::size_t>() == 0) fail(ErrorKind::parse, "/n: expected a positive integer");
        n = it->get<std::size_t>();
    }
    const Json& alpha = member(j, "alpha", "");
    if (!alpha.is_array()) fail(ErrorKind::parse, "/alpha: expected an array");
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        std::string where = "/alpha/" + std::to_string(k);
        const Json& t = alpha[k];
        AlphaTerm term;
        term.coeff = t.contains("coeff") ? read_rational(t["coeff"], where + "/coeff") : Rational(1);
        if (t.contains("density_slope")) term.density_slope = read_rational(t["density_slope"], where + "/density_slope");
        if (t.contains("point")) {
            for (const auto& c : read_point(t["point"], where + "/point")) term.carrier.push_back(Interval::point(c));
        } else if (t.contains("cube") || t.contains("carrier") || t.contains("face")) {
            const char* key = t.contains("cube") ? "cube" : (t.contains("face") ? "face" : "carrier");
            const Json& c = t[key];
            if (!c.is_array()) fail(ErrorKind::parse, where + "/" + key + ": expected an array");
            for (std::size_t i = 0; i < c.size(); ++i) {
                std::string w = where + "/" + key + "/" + std::to_string(i);
                if (c[i].is_array()) {
                    if (c[i].size() != 2) fail(ErrorKind::parse, w + ": expected [lo, hi]");
                    term.carrier.push_back(Interval::half_open(read_ext(c[i][0], w + "/0"), read_ext(c[i][1], w + "/1")));
                } else {
                    term.carrier.push_back(Interval::point(read_rational(c[i], w)));
                }
            }
        } else {
            fail(ErrorKind::parse, where + ": expected one of \"point\", \"cube\", \"face\"");
        }
        if (!n) n = term.carrier.size();
        if (term.carrier.size() != *n) fail(ErrorKind::parse, where + ": carrier has the wrong dimension");
        z.alpha.push_back(std::move(term));
    }

    const Json& beta = member(j, "beta", "");
    if (beta.is_string() && beta == "default") {
        if (!default_box) fail(ErrorKind::usage, "/beta: \"default\" needs a module to size the box");
        z.beta = default_beta(*default_box);
    } else {
        const Json& terms = member(beta, "terms", "/beta");
        if (!terms.is_array() || terms.empty()) fail(ErrorKind::parse, "/beta/terms: expected a nonempty array");
        for (std::size_t k = 0; k < terms.size(); ++k) {
            std::string where = "/beta/terms/" + std::to_string(k);
            if (!terms[k].is_array()) fail(ErrorKind::parse, where + ": expected one factor per axis");
            BetaTerm bt;
            for (std::size_t i = 0; i < terms[k].size(); ++i) {
                std::string w = where + "/" + std::to_string(i);
                const Json& f = terms[k][i];
                StepFactor sf;
                sf.grid = read_point(member(f, "grid", w), w + "/grid");
                sf.values = read_point(member(f, "values", w), w + "/values");
                if (f.contains("tails")) {
                    auto tails = read_point(f["tails"], w + "/tails", 2);
                    sf.left_ratio = tails[0];
                    sf.right_ratio = tails[1];
                }
                bt.axes.push_back(std::move(sf));
            }
            z.beta.terms.push_back(std::move(bt));
        }
    }
    if (!n) n = z.beta.n();
    if (!n && default_box) n = default_box->n();
    if (!n || *n == 0) fail(ErrorKind::parse, "cannot determine the dimension of the condition");
    z.n = *n;
    return z;
}

inline StabilityCondition parse_condition_text(const std::string& text, const std::optional<GridFunction>& box = {}) {
    return condition_from_json(io::parse_json_text(text), box);
}

}  // namespace hnpers
