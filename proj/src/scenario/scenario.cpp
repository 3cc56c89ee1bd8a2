#include "esr/scenario/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "esr/numcore/error.hpp"

#ifndef ESR_SCENARIO_DIR
#define ESR_SCENARIO_DIR "scenarios"
#endif

namespace esr::scenario {

namespace {

using kinetics::kReactions;
using kinetics::kSpecies;

[[noreturn]] void invalid(const std::string& field, const std::string& rule) {
    throw Error(ErrorCode::ValidationError, field + ": " + rule);
}

[[noreturn]] void missing(const std::string& field) { throw Error(ErrorCode::MissingField, field); }

void check_keys(const toml::table& t, const std::string& section, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : t) {
        (void)v;
        if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end())
            invalid(section.empty() ? std::string(k.str()) : section + "." + std::string(k.str()), "unknown key");
    }
}

std::optional<double> node_number(const toml::node& n, const std::string& path) {
    if (auto i = n.value_exact<int64_t>()) return static_cast<double>(*i);
    if (auto d = n.value_exact<double>()) {
        if (!std::isfinite(*d)) invalid(path, "must be finite");
        return *d;
    }
    invalid(path, "expected a number");
}

std::optional<double> opt_num(const toml::table& t, std::string_view key, const std::string& path) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    return node_number(*n, path);
}

double req_num(const toml::table& t, std::string_view key, const std::string& path) {
    auto v = opt_num(t, key, path);
    if (!v) missing(path);
    return *v;
}

template <std::size_t N>
std::optional<std::array<double, N>> opt_num_array(const toml::table& t, std::string_view key,
                                                    const std::string& path) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    const toml::array* a = n->as_array();
    if (!a || a->size() != N) invalid(path, "expected an array of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = *node_number((*a)[i], path + "[" + std::to_string(i) + "]");
    return out;
}

template <std::size_t N>
std::array<double, N> req_num_array(const toml::table& t, std::string_view key, const std::string& path) {
    auto v = opt_num_array<N>(t, key, path);
    if (!v) missing(path);
    return *v;
}

std::optional<std::string> opt_str(const toml::table& t, std::string_view key, const std::string& path) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    if (auto s = n->value_exact<std::string>()) return *s;
    invalid(path, "expected a string");
}

std::optional<bool> opt_bool(const toml::table& t, std::string_view key, const std::string& path) {
    const toml::node* n = t.get(key);
    if (!n) return std::nullopt;
    if (auto b = n->value_exact<bool>()) return *b;
    invalid(path, "expected a boolean");
}

ProfileSpec parse_profile(const toml::node& n, const std::string& path) {
    if (n.is_number()) return ProfileSpec::constant(*node_number(n, path));
    const toml::array* a = n.as_array();
    if (!a || a->size() < 2) invalid(path, "expected a number or a table of at least two [coordinate, value] pairs");
    ProfileSpec p;
    for (std::size_t i = 0; i < a->size(); ++i) {
        const toml::array* pair = (*a)[i].as_array();
        const std::string ip = path + "[" + std::to_string(i) + "]";
        if (!pair || pair->size() != 2) invalid(ip, "expected [coordinate, value]");
        p.xs.push_back(*node_number((*pair)[0], ip));
        p.ys.push_back(*node_number((*pair)[1], ip));
        if (i > 0 && !(p.xs[i] > p.xs[i - 1])) invalid(ip, "table coordinates must be strictly increasing");
    }
    return p;
}

void check_coverage(const ProfileSpec& p, double lo, double hi, const std::string& path) {
    if (!p.tabulated()) return;
    if (p.xs.front() > lo || p.xs.back() < hi)
        invalid(path, "table must cover [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

template <class F>
void for_each_value(const ProfileSpec& p, F&& f) {
    if (p.tabulated())
        for (double y : p.ys) f(y);
    else
        f(p.value);
}

std::array<ProfileSpec, kSpecies> parse_species_profiles(const toml::table& t, std::string_view key,
                                                         const std::string& path) {
    const toml::node* n = t.get(key);
    if (!n) missing(path);
    const toml::array* a = n->as_array();
    if (!a || a->size() != static_cast<std::size_t>(kSpecies)) invalid(path, "expected 7 species profiles");
    std::array<ProfileSpec, kSpecies> out;
    for (int j = 0; j < kSpecies; ++j) out[j] = parse_profile((*a)[j], path + "[" + std::to_string(j) + "]");
    return out;
}

ProfileSpec parse_scalar_profile(const toml::table& t, std::string_view key, const std::string& path) {
    const toml::node* n = t.get(key);
    if (!n) missing(path);
    return parse_profile(*n, path);
}

const toml::table* section(const toml::table& root, std::string_view name, bool required) {
    const toml::node* n = root.get(name);
    if (!n) {
        if (required) missing(std::string(name));
        return nullptr;
    }
    const toml::table* t = n->as_table();
    if (!t) invalid(std::string(name), "expected a section");
    return t;
}

void positive(double v, const std::string& path) {
    if (!(v > 0.0)) invalid(path, "must be > 0");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        if (ch == '\n') {
            out += "\\n";
            continue;
        }
        out += ch;
    }
    return out + "\"";
}

std::string fmt_profile(const ProfileSpec& p) {
    if (!p.tabulated()) return fmt(p.value);
    std::string s = "[";
    for (std::size_t i = 0; i < p.xs.size(); ++i) {
        if (i) s += ", ";
        s += "[" + fmt(p.xs[i]) + ", " + fmt(p.ys[i]) + "]";
    }
    return s + "]";
}

template <class Arr>
std::string fmt_array(const Arr& a) {
    std::string s = "[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += ", ";
        s += fmt(a[i]);
    }
    return s + "]";
}

void parse_constants(const toml::table& t, Scenario& sc) {
    check_keys(t, "constants",
               {"R", "A_cross", "p", "p_unit", "cp", "cv", "h_coeff", "beta_area", "gamma_diam", "T_f", "l1"});
    auto& c = sc.constants;
    c.R = req_num(t, "R", "constants.R");
    c.A_cross = req_num(t, "A_cross", "constants.A_cross");
    const double p = req_num(t, "p", "constants.p");
    positive(p, "constants.p");
    const std::string unit = opt_str(t, "p_unit", "constants.p_unit").value_or("bar");
    if (!t.get("p_unit")) sc.defaults_applied.push_back("constants.p_unit = \"bar\"");
    if (unit == "bar")
        c.p = p * kPascalPerBar;
    else if (unit == "Pa")
        c.p = p;
    else
        invalid("constants.p_unit", "must be \"bar\" or \"Pa\"");
    c.cp = req_num_array<kSpecies>(t, "cp", "constants.cp");
    c.cv = req_num_array<kSpecies>(t, "cv", "constants.cv");
    c.h_coeff = req_num(t, "h_coeff", "constants.h_coeff");
    const auto beta = opt_num(t, "beta_area", "constants.beta_area");
    const auto gamma = opt_num(t, "gamma_diam", "constants.gamma_diam");
    if (!beta && !gamma) missing("constants.beta_area");
    if (beta) positive(*beta, "constants.beta_area");
    if (gamma) positive(*gamma, "constants.gamma_diam");
    c.beta_area = beta ? *beta : 4.0 / *gamma;
    c.gamma_diam = gamma ? *gamma : 4.0 / *beta;
    if (beta && gamma && std::abs(*beta * *gamma - 4.0) > 4e-12)
        invalid("constants.beta_area", "beta_area * gamma_diam must equal 4");
    c.T_f = req_num(t, "T_f", "constants.T_f");
    c.l1 = req_num(t, "l1", "constants.l1");
}

void parse_conv_form(const toml::table& t, Scenario& sc) {
    check_keys(t, "conv_form", {"rho_g", "cp_g", "rho_s", "cp_s", "Ua", "g_f"});
    auto& cf = sc.constants.conv;
    cf.rho_g = req_num(t, "rho_g", "conv_form.rho_g");
    cf.cp_g = req_num(t, "cp_g", "conv_form.cp_g");
    cf.rho_s = req_num(t, "rho_s", "conv_form.rho_s");
    cf.cp_s = req_num(t, "cp_s", "conv_form.cp_s");
    cf.Ua = req_num(t, "Ua", "conv_form.Ua");
    cf.g_f = opt_num(t, "g_f", "conv_form.g_f");
}

void parse_kinetics(const toml::table* t, Scenario& sc) {
    auto& k = sc.kinetics;
    if (!t) missing("kinetics");
    check_keys(*t, "kinetics", {"enabled", "k_inf", "E_a", "dH", "T_ref"});
    k.enabled = opt_bool(*t, "enabled", "kinetics.enabled").value_or(true);
    if (!t->get("enabled")) sc.defaults_applied.push_back("kinetics.enabled = true");
    auto arr = [&](std::string_view key, kinetics::ReactionVector& out) {
        const std::string path = "kinetics." + std::string(key);
        if (auto v = opt_num_array<kReactions>(*t, key, path))
            out = *v;
        else if (k.enabled)
            missing(path);
        else {
            out = {};
            sc.defaults_applied.push_back(path + " = [0, 0, 0, 0]");
        }
    };
    arr("k_inf", k.k_inf);
    arr("E_a", k.E_a);
    arr("dH", k.dH);
    for (int i = 0; i < kReactions; ++i)
        if (k.k_inf[i] < 0.0) invalid("kinetics.k_inf", "must be >= 0");
    if (auto tr = opt_num(*t, "T_ref", "kinetics.T_ref"))
        k.T_ref = *tr;
    else {
        k.T_ref = 773.0;
        sc.defaults_applied.push_back("kinetics.T_ref = 773");
    }
    positive(k.T_ref, "kinetics.T_ref");
}

void parse_stoichiometry(const toml::table* t, Scenario& sc) {
    auto& nu = sc.kinetics.nu;
    if (!t || !t->get("nu")) {
        nu = kinetics::default_stoichiometry();
        sc.defaults_applied.push_back("stoichiometry.nu = default reactions 1a-1d");
        if (t) check_keys(*t, "stoichiometry", {"nu"});
        return;
    }
    check_keys(*t, "stoichiometry", {"nu"});
    const toml::array* rows = t->get("nu")->as_array();
    if (!rows || rows->size() != static_cast<std::size_t>(kReactions))
        invalid("stoichiometry.nu", "expected 4 rows of 7 coefficients");
    for (int i = 0; i < kReactions; ++i) {
        const std::string rp = "stoichiometry.nu[" + std::to_string(i) + "]";
        const toml::array* row = (*rows)[static_cast<std::size_t>(i)].as_array();
        if (!row || row->size() != static_cast<std::size_t>(kSpecies)) invalid(rp, "expected 7 coefficients");
        for (int j = 0; j < kSpecies; ++j) nu[i][j] = *node_number((*row)[static_cast<std::size_t>(j)], rp);
    }
    const int bad = kinetics::first_unbalanced_reaction(nu);
    if (bad >= 0)
        invalid("stoichiometry.nu", "reaction " + std::string(kinetics::kReactionNames[bad]) +
                                        " violates atom balance (C, H, O) or is not integral");
}

void parse_solver(const toml::table* t, Scenario& sc) {
    auto& s = sc.solver;
    auto note = [&](const std::string& d) { sc.defaults_applied.push_back(d); };
    if (!t) {
        note("solver = all defaults");
        static const toml::table empty;
        t = &empty;
    }
    check_keys(*t, "solver",
               {"mode", "stepper", "h", "rel_tol", "abs_tol", "h_min", "h_max", "epsilon_reg", "row7_regularization",
                "n_cells", "cfl", "s_range", "t_end", "form", "mol_stepper"});
    if (auto m = opt_str(*t, "mode", "solver.mode")) {
        if (*m == "literal3")
            s.mode = CharMode::Literal3;
        else if (*m == "full8")
            s.mode = CharMode::Full8;
        else
            invalid("solver.mode", "must be \"literal3\" or \"full8\"");
    }
    s.stepper = opt_str(*t, "stepper", "solver.stepper").value_or("rk4");
    s.mol_stepper = opt_str(*t, "mol_stepper", "solver.mol_stepper").value_or("rk4");
    for (const auto* name : {&s.stepper, &s.mol_stepper}) {
        try {
            (void)numcore::stepper_from_name(*name);
        } catch (const Error&) {
            invalid(name == &s.stepper ? "solver.stepper" : "solver.mol_stepper",
                    "must be one of euler, midpoint, rk4, rk45");
        }
    }
    if (s.mol_stepper == "rk45") invalid("solver.mol_stepper", "must be a fixed-step stepper");
    s.h = opt_num(*t, "h", "solver.h").value_or(1e-3);
    positive(s.h, "solver.h");
    s.adaptive.rel_tol = opt_num(*t, "rel_tol", "solver.rel_tol").value_or(1e-8);
    s.adaptive.abs_tol = opt_num(*t, "abs_tol", "solver.abs_tol").value_or(1e-10);
    s.adaptive.h_min = opt_num(*t, "h_min", "solver.h_min").value_or(1e-12);
    s.adaptive.h_max = opt_num(*t, "h_max", "solver.h_max").value_or(1.0);
    positive(s.adaptive.rel_tol, "solver.rel_tol");
    positive(s.adaptive.abs_tol, "solver.abs_tol");
    positive(s.adaptive.h_min, "solver.h_min");
    if (!(s.adaptive.h_min <= s.adaptive.h_max)) invalid("solver.h_min", "must not exceed solver.h_max");
    if (auto e = opt_num(*t, "epsilon_reg", "solver.epsilon_reg"))
        s.epsilon_reg = *e;
    else {
        s.epsilon_reg = 1e-5;
        note("solver.epsilon_reg = 1e-5");
    }
    positive(s.epsilon_reg, "solver.epsilon_reg");
    if (auto d = opt_num(*t, "row7_regularization", "solver.row7_regularization"))
        s.row7_regularization = *d;
    else {
        s.row7_regularization = s.epsilon_reg;
        note("solver.row7_regularization = solver.epsilon_reg");
    }
    positive(s.row7_regularization, "solver.row7_regularization");
    if (auto n = opt_num(*t, "n_cells", "solver.n_cells")) {
        if (*n != std::floor(*n)) invalid("solver.n_cells", "must be an integer");
        if (*n < 2) invalid("solver.n_cells", "must be >= 2");
        s.n_cells = static_cast<int>(*n);
    } else {
        s.n_cells = 40;
        note("solver.n_cells = 40");
    }
    if (auto c = opt_num(*t, "cfl", "solver.cfl"))
        s.cfl = *c;
    else {
        s.cfl = 0.9;
        note("solver.cfl = 0.9");
    }
    if (!(s.cfl > 0.0 && s.cfl <= 1.0)) invalid("solver.cfl", "must lie in (0, 1]");
    if (auto r = opt_num_array<2>(*t, "s_range", "solver.s_range")) {
        s.s_begin = (*r)[0];
        s.s_end = (*r)[1];
    }
    if (!(s.s_end > s.s_begin)) invalid("solver.s_range", "end must exceed start");
    s.t_end = opt_num(*t, "t_end", "solver.t_end").value_or(1.0);
    positive(s.t_end, "solver.t_end");
    if (auto f = opt_str(*t, "form", "solver.form")) {
        if (*f == "original")
            s.form = MolForm::Original;
        else if (*f == "conservation")
            s.form = MolForm::Conservation;
        else
            invalid("solver.form", "must be \"original\" or \"conservation\"");
    }
}

void parse_literal3(const toml::table* t, Scenario& sc) {
    if (!t) {
        if (sc.solver.mode == CharMode::Literal3) missing("literal3");
        return;
    }
    check_keys(*t, "literal3", {"c", "c1", "U", "V1", "V2", "rate", "H", "U1", "B", "regularizer", "initial"});
    Literal3Settings l;
    l.c = req_num(*t, "c", "literal3.c");
    l.c1 = req_num(*t, "c1", "literal3.c1");
    l.U = req_num(*t, "U", "literal3.U");
    l.V1 = req_num(*t, "V1", "literal3.V1");
    l.V2 = req_num(*t, "V2", "literal3.V2");
    l.rate = req_num(*t, "rate", "literal3.rate");
    l.H = req_num(*t, "H", "literal3.H");
    l.U1 = req_num(*t, "U1", "literal3.U1");
    l.B = req_num(*t, "B", "literal3.B");
    l.regularizer = req_num(*t, "regularizer", "literal3.regularizer");
    l.initial = req_num_array<6>(*t, "initial", "literal3.initial");
    positive(l.c, "literal3.c");
    positive(l.c1, "literal3.c1");
    positive(l.U, "literal3.U");
    sc.literal3 = l;
}

Scenario build(const toml::table& root) {
    Scenario sc;
    check_keys(root, "",
               {"schema", "meta", "constants", "kinetics", "stoichiometry", "initial", "boundary", "solver",
                "conv_form", "literal3"});
    const auto schema = opt_num(root, "schema", "schema");
    if (!schema) missing("schema");
    if (*schema != 1.0) invalid("schema", "unsupported schema version (expected 1)");

    if (const toml::table* m = section(root, "meta", false)) {
        check_keys(*m, "meta", {"name", "description", "notes"});
        sc.meta.name = opt_str(*m, "name", "meta.name").value_or("");
        sc.meta.description = opt_str(*m, "description", "meta.description").value_or("");
        if (const toml::node* n = m->get("notes")) {
            const toml::array* a = n->as_array();
            if (!a) invalid("meta.notes", "expected an array of strings");
            for (const auto& e : *a) {
                auto s = e.value_exact<std::string>();
                if (!s) invalid("meta.notes", "expected an array of strings");
                sc.meta.notes.push_back(*s);
            }
        }
    }
    parse_constants(*section(root, "constants", true), sc);
    parse_conv_form(*section(root, "conv_form", true), sc);
    statespace::validate(sc.constants);
    parse_kinetics(section(root, "kinetics", true), sc);
    parse_stoichiometry(section(root, "stoichiometry", false), sc);
    parse_solver(section(root, "solver", false), sc);
    parse_literal3(section(root, "literal3", false), sc);

    const toml::table& ini = *section(root, "initial", true);
    check_keys(ini, "initial", {"F", "T"});
    sc.initial_F = parse_species_profiles(ini, "F", "initial.F");
    sc.initial_T = parse_scalar_profile(ini, "T", "initial.T");
    const toml::table& bnd = *section(root, "boundary", true);
    check_keys(bnd, "boundary", {"F_in", "T_in"});
    sc.inlet_F = parse_species_profiles(bnd, "F_in", "boundary.F_in");
    sc.inlet_T = parse_scalar_profile(bnd, "T_in", "boundary.T_in");

    const double l1 = sc.constants.l1;
    const double t_end = sc.solver.t_end;
    for (int j = 0; j < kSpecies; ++j) {
        const std::string ip = "initial.F[" + std::to_string(j) + "]";
        const std::string bp = "boundary.F_in[" + std::to_string(j) + "]";
        check_coverage(sc.initial_F[j], 0.0, l1, ip);
        check_coverage(sc.inlet_F[j], 0.0, t_end, bp);
        for_each_value(sc.initial_F[j], [&](double v) {
            if (v < 0.0) invalid(ip, "molar flows must be >= 0");
        });
        for_each_value(sc.inlet_F[j], [&](double v) {
            if (v < 0.0) invalid(bp, "molar flows must be >= 0");
        });
    }
    check_coverage(sc.initial_T, 0.0, l1, "initial.T");
    check_coverage(sc.inlet_T, 0.0, t_end, "boundary.T_in");
    for_each_value(sc.initial_T, [](double v) { positive(v, "initial.T"); });
    for_each_value(sc.inlet_T, [](double v) { positive(v, "boundary.T_in"); });
    return sc;
}

}  // namespace

double sample_profile(const ProfileSpec& spec, double x) {
    if (!spec.tabulated()) return spec.value;
    if (!(x >= spec.xs.front() && x <= spec.xs.back()))
        throw Error(ErrorCode::OutOfRange, "coordinate " + fmt(x) + " outside profile table [" + fmt(spec.xs.front()) +
                                               ", " + fmt(spec.xs.back()) + "]");
    const auto it = std::upper_bound(spec.xs.begin(), spec.xs.end(), x);
    if (it == spec.xs.end()) return spec.ys.back();
    const std::size_t i = static_cast<std::size_t>(it - spec.xs.begin());
    const double x0 = spec.xs[i - 1], x1 = spec.xs[i];
    const double w = (x - x0) / (x1 - x0);
    return spec.ys[i - 1] + w * (spec.ys[i] - spec.ys[i - 1]);
}

std::string to_string(CharMode m) { return m == CharMode::Literal3 ? "literal3" : "full8"; }
std::string to_string(MolForm f) { return f == MolForm::Original ? "original" : "conservation"; }

CharMode char_mode_from_name(const std::string& name) {
    if (name == "literal3") return CharMode::Literal3;
    if (name == "full8") return CharMode::Full8;
    throw Error(ErrorCode::ValidationError, "mode must be literal3 or full8, got '" + name + "'");
}

MolForm mol_form_from_name(const std::string& name) {
    if (name == "original") return MolForm::Original;
    if (name == "conservation") return MolForm::Conservation;
    throw Error(ErrorCode::ValidationError, "form must be original or conservation, got '" + name + "'");
}

bool Scenario::operator==(const Scenario& o) const {
    return meta == o.meta && constants == o.constants && kinetics == o.kinetics && initial_F == o.initial_F &&
           initial_T == o.initial_T && inlet_F == o.inlet_F && inlet_T == o.inlet_T && solver == o.solver &&
           literal3 == o.literal3;
}

Scenario parse_scenario(const std::string& text, const std::string& source_name) {
    toml::table root;
    try {
        root = toml::parse(text, source_name);
    } catch (const toml::parse_error& e) {
        const auto& b = e.source().begin;
        throw Error(ErrorCode::ParseError, source_name + ":" + std::to_string(b.line) + ":" + std::to_string(b.column) +
                                               ": " + std::string(e.description()));
    }
    return build(root);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open scenario file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string());
}

std::string echo_scenario(const Scenario& s) {
    std::ostringstream o;
    const auto& c = s.constants;
    o << "# normalized scenario echo\n";
    for (const auto& d : s.defaults_applied) o << "# default applied: " << d << "\n";
    o << "schema = 1\n\n[meta]\n";
    o << "name = " << quote(s.meta.name) << "\n";
    o << "description = " << quote(s.meta.description) << "\n";
    o << "notes = [";
    for (std::size_t i = 0; i < s.meta.notes.size(); ++i) o << (i ? ", " : "") << quote(s.meta.notes[i]);
    o << "]\n\n[constants]\n";
    o << "R = " << fmt(c.R) << "\n";
    o << "A_cross = " << fmt(c.A_cross) << "\n";
    o << "# p = " << fmt(c.p / kPascalPerBar) << " bar = " << fmt(c.p) << " Pa\n";
    o << "p = " << fmt(c.p) << "\n";
    o << "p_unit = \"Pa\"\n";
    o << "cp = " << fmt_array(c.cp) << "\n";
    o << "cv = " << fmt_array(c.cv) << "\n";
    o << "h_coeff = " << fmt(c.h_coeff) << "\n";
    o << "beta_area = " << fmt(c.beta_area) << "\n";
    o << "gamma_diam = " << fmt(c.gamma_diam) << "\n";
    o << "T_f = " << fmt(c.T_f) << "\n";
    o << "l1 = " << fmt(c.l1) << "\n\n[conv_form]\n";
    o << "rho_g = " << fmt(c.conv.rho_g) << "\n";
    o << "cp_g = " << fmt(c.conv.cp_g) << "\n";
    o << "rho_s = " << fmt(c.conv.rho_s) << "\n";
    o << "cp_s = " << fmt(c.conv.cp_s) << "\n";
    o << "Ua = " << fmt(c.conv.Ua) << "\n";
    if (c.conv.g_f) o << "g_f = " << fmt(*c.conv.g_f) << "\n";
    const auto& k = s.kinetics;
    o << "\n[kinetics]\n";
    o << "enabled = " << (k.enabled ? "true" : "false") << "\n";
    o << "k_inf = " << fmt_array(k.k_inf) << "\n";
    o << "E_a = " << fmt_array(k.E_a) << "\n";
    o << "dH = " << fmt_array(k.dH) << "\n";
    o << "T_ref = " << fmt(k.T_ref) << "\n\n[stoichiometry]\nnu = [\n";
    for (int i = 0; i < kReactions; ++i) o << "  " << fmt_array(k.nu[i]) << ",\n";
    o << "]\n\n[initial]\nF = [";
    for (int j = 0; j < kSpecies; ++j) o << (j ? ", " : "") << fmt_profile(s.initial_F[j]);
    o << "]\nT = " << fmt_profile(s.initial_T) << "\n\n[boundary]\nF_in = [";
    for (int j = 0; j < kSpecies; ++j) o << (j ? ", " : "") << fmt_profile(s.inlet_F[j]);
    o << "]\nT_in = " << fmt_profile(s.inlet_T) << "\n\n[solver]\n";
    const auto& v = s.solver;
    o << "mode = " << quote(to_string(v.mode)) << "\n";
    o << "stepper = " << quote(v.stepper) << "\n";
    o << "h = " << fmt(v.h) << "\n";
    o << "rel_tol = " << fmt(v.adaptive.rel_tol) << "\n";
    o << "abs_tol = " << fmt(v.adaptive.abs_tol) << "\n";
    o << "h_min = " << fmt(v.adaptive.h_min) << "\n";
    o << "h_max = " << fmt(v.adaptive.h_max) << "\n";
    o << "epsilon_reg = " << fmt(v.epsilon_reg) << "\n";
    o << "row7_regularization = " << fmt(v.row7_regularization) << "\n";
    o << "n_cells = " << v.n_cells << "\n";
    o << "cfl = " << fmt(v.cfl) << "\n";
    o << "s_range = [" << fmt(v.s_begin) << ", " << fmt(v.s_end) << "]\n";
    o << "t_end = " << fmt(v.t_end) << "\n";
    o << "form = " << quote(to_string(v.form)) << "\n";
    o << "mol_stepper = " << quote(v.mol_stepper) << "\n";
    if (s.literal3) {
        const auto& l = *s.literal3;
        o << "\n[literal3]\n";
        o << "c = " << fmt(l.c) << "\nc1 = " << fmt(l.c1) << "\nU = " << fmt(l.U) << "\n";
        o << "V1 = " << fmt(l.V1) << "\nV2 = " << fmt(l.V2) << "\nrate = " << fmt(l.rate) << "\n";
        o << "H = " << fmt(l.H) << "\nU1 = " << fmt(l.U1) << "\nB = " << fmt(l.B) << "\n";
        o << "regularizer = " << fmt(l.regularizer) << "\n";
        o << "initial = " << fmt_array(l.initial) << "\n";
    }
    return o.str();
}

statespace::StateF initial_state_at(const Scenario& s, double z) {
    statespace::StateF f;
    for (int j = 0; j < kSpecies; ++j) f.F[j] = sample_profile(s.initial_F[j], z);
    f.T = sample_profile(s.initial_T, z);
    return f;
}

statespace::StateF inlet_state_at(const Scenario& s, double t) {
    statespace::StateF f;
    for (int j = 0; j < kSpecies; ++j) f.F[j] = sample_profile(s.inlet_F[j], t);
    f.T = sample_profile(s.inlet_T, t);
    return f;
}

std::filesystem::path resolve_scenario_path(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    if (fs::exists(name_or_path)) return name_or_path;
    std::string dir = ESR_SCENARIO_DIR;
    if (const char* env = std::getenv("ESR_SCENARIO_DIR")) dir = env;
    for (const char* b : kBundledNames)
        if (name_or_path == b) return fs::path(dir) / (std::string(b) + ".toml");
    return name_or_path;
}

}  // namespace esr::scenario
