// Command-line front end: evaluation, operator tables, contour dumps,
// polynomial limits, and the verification suite.  Output is JSON (default)
// or CSV with a fixed field order and floats printed to 17 significant
// digits, so identical invocations produce byte-identical output.
//
// Exit codes: 0 success, 1 check failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypgeo/verifier.hpp"

using namespace hypgeo;

namespace {

// ---------------------------------------------------------------------------
// deterministic serialization helpers
// ---------------------------------------------------------------------------

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

// minimal ordered JSON value: preserves insertion order and uses fmt_double
struct JValue {
    enum Kind { null, num, str, boolean, arr, obj } kind = null;
    double d = 0.0;
    bool b = false;
    std::string s;
    std::vector<JValue> items;
    std::vector<std::pair<std::string, JValue>> fields;

    static JValue number(double v) { JValue j; j.kind = num; j.d = v; return j; }
    static JValue string(std::string v) { JValue j; j.kind = str; j.s = std::move(v); return j; }
    static JValue boolean_(bool v) { JValue j; j.kind = boolean; j.b = v; return j; }
    static JValue array() { JValue j; j.kind = arr; return j; }
    static JValue object() { JValue j; j.kind = obj; return j; }
    static JValue complex_(cplx z) {
        JValue j = object();
        j.set("re", number(z.real()));
        j.set("im", number(z.imag()));
        return j;
    }
    void set(const std::string& k, JValue v) { fields.emplace_back(k, std::move(v)); }
    void push(JValue v) { items.push_back(std::move(v)); }

    void write(std::ostream& os) const {
        switch (kind) {
            case null: os << "null"; break;
            case num: os << fmt_double(d); break;
            case boolean: os << (b ? "true" : "false"); break;
            case str: os << '"' << json_escape(s) << '"'; break;
            case arr: {
                os << '[';
                for (std::size_t i = 0; i < items.size(); ++i) {
                    if (i) os << ',';
                    items[i].write(os);
                }
                os << ']';
                break;
            }
            case obj: {
                os << '{';
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    if (i) os << ',';
                    os << '"' << json_escape(fields[i].first) << "\":";
                    fields[i].second.write(os);
                }
                os << '}';
                break;
            }
        }
    }
};

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

// flatten a one-level JSON object into a CSV header + single row
void write_csv(std::ostream& os, const JValue& j) {
    std::vector<std::string> keys, vals;
    std::function<void(const std::string&, const JValue&)> flat =
        [&](const std::string& prefix, const JValue& v) {
            switch (v.kind) {
                case JValue::obj:
                    for (const auto& [k, sub] : v.fields)
                        flat(prefix.empty() ? k : prefix + "." + k, sub);
                    break;
                case JValue::arr: {
                    std::ostringstream tmp;
                    v.write(tmp);
                    keys.push_back(prefix);
                    vals.push_back(tmp.str());
                    break;
                }
                case JValue::num:
                    keys.push_back(prefix);
                    vals.push_back(fmt_double(v.d));
                    break;
                case JValue::boolean:
                    keys.push_back(prefix);
                    vals.push_back(v.b ? "true" : "false");
                    break;
                case JValue::str:
                    keys.push_back(prefix);
                    vals.push_back(v.s);
                    break;
                default:
                    keys.push_back(prefix);
                    vals.push_back("");
            }
        };
    flat("", j);
    for (std::size_t i = 0; i < keys.size(); ++i)
        os << (i ? "," : "") << csv_escape(keys[i]);
    os << "\n";
    for (std::size_t i = 0; i < vals.size(); ++i)
        os << (i ? "," : "") << csv_escape(vals[i]);
    os << "\n";
}

// ---------------------------------------------------------------------------
// complex literals "a+bi"
// ---------------------------------------------------------------------------

bool parse_cplx(const std::string& text, cplx& out) {
    const char* p = text.c_str();
    char* end = nullptr;
    double first = std::strtod(p, &end);
    if (end == p) {
        // pure imaginary like "i" or "-i"?
        if (text == "i") { out = cplx(0.0, 1.0); return true; }
        if (text == "-i") { out = cplx(0.0, -1.0); return true; }
        return false;
    }
    if (*end == '\0') { out = cplx(first, 0.0); return true; }
    if (*end == 'i' && end[1] == '\0') { out = cplx(0.0, first); return true; }
    const char* q = end;
    char* end2 = nullptr;
    double second = std::strtod(q, &end2);
    if (end2 == q || *end2 != 'i' || end2[1] != '\0') return false;
    out = cplx(first, second);
    return true;
}

std::string flag_name(const std::string& param_name) {
    std::string out;
    for (char c : param_name)
        if (c != '_') out += c;
    return out;
}

// ---------------------------------------------------------------------------
// shared option block: member + its named parameters
// ---------------------------------------------------------------------------

struct MemberArgs {
    std::string member_str;
    double b = 0.84;
    std::map<std::string, std::string> raw; // flag -> literal text

    void attach(CLI::App* cmd, bool need_member = true) {
        auto* mo = cmd->add_option("--member", member_str,
                                   "member letter (R H S X Q L W M)");
        if (need_member) mo->required();
        cmd->add_option("--b", b, "modular parameter b > 0");
        // union of all parameter names across members; the ones that do not
        // apply to the chosen member are rejected after parsing
        for (const char* n :
             {"theta1", "thetat", "thetainf", "theta0", "thetastar", "theta",
              "sigmas", "sigmat", "nu", "rho", "omega", "eta", "lambda", "mu",
              "kappa", "zeta"}) {
            cmd->add_option_function<std::string>(
                std::string("--") + n,
                [this, n](const std::string& v) { raw[n] = v; },
                std::string("parameter ") + n + " (complex \"a+bi\" accepted)");
        }
    }

    Member member() const { return member_from_name(member_str); }

    // collect thetas and variables for the member; throws CLI::ValidationError
    // on missing/extra/unparsable parameters
    SchemeParams params(JValue* echo = nullptr) const {
        const Member m = member();
        std::map<std::string, std::string> left = raw;
        SchemeParams p;
        auto take = [&](const std::string& name, cplx& slot, cplx fallback,
                        bool required) {
            const std::string key = flag_name(name);
            auto it = left.find(key);
            if (it == left.end()) {
                if (required)
                    throw CLI::ValidationError("--" + key,
                                               "required for member " +
                                                   member_name(m));
                slot = fallback;
            } else {
                if (!parse_cplx(it->second, slot))
                    throw CLI::ValidationError(
                        "--" + key, "not a complex literal: " + it->second);
                left.erase(it);
            }
            if (echo) echo->set(key, JValue::complex_(slot));
        };
        for (const std::string& name : member_theta_names(m)) {
            cplx v;
            take(name, v, 0.0, true);
            p.thetas.push_back(v);
        }
        const auto [n1, n2] = member_var_names(m);
        take(n1, p.v1, 0.0, false);
        take(n2, p.v2, 0.0, false);
        if (!left.empty())
            throw CLI::ValidationError("--" + left.begin()->first,
                                       "does not apply to member " +
                                           member_name(m));
        return p;
    }
};

struct Output {
    std::string format = "json"; // json | csv
    std::string path;            // empty -> stdout

    void attach(CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--output", path, "write output to this file");
    }

    void emit(const JValue& j) const {
        std::ostringstream os;
        if (format == "csv") write_csv(os, j);
        else { j.write(os); os << "\n"; }
        if (path.empty()) {
            std::cout << os.str();
        } else {
            std::ofstream f(path);
            f << os.str();
        }
    }
};

JValue result_skeleton(const std::string& command) {
    JValue j = JValue::object();
    j.set("command", JValue::string(command));
    return j;
}

void finish(JValue& j, cplx value, double err_est,
            const std::vector<std::string>& warnings) {
    j.set("result", JValue::complex_(value));
    j.set("err_est", JValue::number(err_est));
    JValue w = JValue::array();
    for (const std::string& s : warnings) w.push(JValue::string(s));
    j.set("warnings", std::move(w));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypgeo: double sine, q-polynomial and contour-integral "
                 "scheme evaluation"};
    app.require_subcommand(1);

    int exit_code = 0;

    // --- sb -----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("sb", "evaluate the double sine s_b(z)");
        auto b = std::make_shared<double>(0.84);
        auto zs = std::make_shared<std::string>("0");
        auto tol = std::make_shared<double>(1e-12);
        auto out = std::make_shared<Output>();
        cmd->add_option("--b", *b, "modular parameter");
        cmd->add_option("--z", *zs, "argument (complex \"a+bi\")")->required();
        cmd->add_option("--tol", *tol, "target tolerance");
        out->attach(cmd);
        cmd->callback([=, &exit_code] {
            cplx z;
            if (!parse_cplx(*zs, z))
                throw CLI::ValidationError("--z", "not a complex literal");
            BContext ctx(*b);
            const cplx v = sb(ctx, z, *tol);
            JValue j = result_skeleton("sb");
            JValue in = JValue::object();
            in.set("b", JValue::number(*b));
            in.set("z", JValue::complex_(z));
            in.set("tol", JValue::number(*tol));
            j.set("inputs", std::move(in));
            finish(j, v, *tol, {});
            out->emit(j);
            (void)exit_code;
        });
    }

    // --- qpoly ----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "qpoly", "evaluate a member of the q-polynomial ladder");
        auto fam = std::make_shared<std::string>();
        auto n = std::make_shared<int>(0);
        auto ps = std::make_shared<std::vector<std::string>>();
        auto qs = std::make_shared<std::string>("0.36+0.22i");
        auto xs = std::make_shared<std::string>("1");
        auto mode = std::make_shared<std::string>("series");
        auto out = std::make_shared<Output>();
        cmd->add_option("--family", *fam, "family name")->required();
        cmd->add_option("--n", *n, "degree")->required();
        cmd->add_option("--param", *ps, "family parameter (repeatable)");
        cmd->add_option("--q", *qs, "base q");
        cmd->add_option("--x", *xs, "argument");
        cmd->add_option("--mode", *mode, "series or recurrence")
            ->check(CLI::IsMember({"series", "recurrence"}));
        out->attach(cmd);
        cmd->callback([=] {
            QPolyFamily f = QPolyFamily::AskeyWilson;
            bool found = false;
            for (QPolyFamily g :
                 {QPolyFamily::AskeyWilson, QPolyFamily::ContinuousDualQHahn,
                  QPolyFamily::AlSalamChihara, QPolyFamily::ContBigQHermite,
                  QPolyFamily::ContQHermite, QPolyFamily::BigQJacobi,
                  QPolyFamily::LittleQJacobi_p, QPolyFamily::LittleQJacobi_Y,
                  QPolyFamily::BigQLaguerre, QPolyFamily::LittleQLaguerre})
                if (family_name(g) == *fam) { f = g; found = true; }
            if (!found)
                throw CLI::ValidationError("--family", "unknown family " + *fam);
            cplx q, x;
            if (!parse_cplx(*qs, q))
                throw CLI::ValidationError("--q", "not a complex literal");
            if (!parse_cplx(*xs, x))
                throw CLI::ValidationError("--x", "not a complex literal");
            std::vector<cplx> par;
            for (const std::string& s : *ps) {
                cplx v;
                if (!parse_cplx(s, v))
                    throw CLI::ValidationError("--param",
                                               "not a complex literal: " + s);
                par.push_back(v);
            }
            const QPolyMode md = (*mode == "series") ? QPolyMode::series
                                                     : QPolyMode::recurrence;
            const cplx v = qpoly_eval(f, *n, par, q, x, md);
            JValue j = result_skeleton("qpoly");
            JValue in = JValue::object();
            in.set("family", JValue::string(*fam));
            in.set("n", JValue::number(*n));
            JValue pj = JValue::array();
            for (cplx c : par) pj.push(JValue::complex_(c));
            in.set("params", std::move(pj));
            in.set("q", JValue::complex_(q));
            in.set("x", JValue::complex_(x));
            in.set("mode", JValue::string(*mode));
            j.set("inputs", std::move(in));
            finish(j, v, 0.0, {});
            out->emit(j);
        });
    }

    // --- eval -----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "eval", "evaluate a scheme member at a point");
        auto ma = std::make_shared<MemberArgs>();
        auto tol = std::make_shared<double>(1e-10);
        auto out = std::make_shared<Output>();
        ma->attach(cmd);
        cmd->add_option("--tol", *tol, "quadrature tolerance");
        out->attach(cmd);
        cmd->callback([=] {
            BContext ctx(ma->b);
            JValue in = JValue::object();
            in.set("member", JValue::string(ma->member_str));
            in.set("b", JValue::number(ma->b));
            const SchemeParams p = ma->params(&in);
            in.set("tol", JValue::number(*tol));
            QuadratureConfig cfg;
            cfg.abs_tol = *tol;
            const SchemeValue v = scheme_evaluate(ctx, ma->member(), p, cfg);
            JValue j = result_skeleton("eval");
            j.set("inputs", std::move(in));
            finish(j, v.value, v.err_est, v.warnings);
            out->emit(j);
        });
    }

    // --- op -------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "op", "print the shift-operator terms and eigenvalue");
        auto ma = std::make_shared<MemberArgs>();
        auto variant = std::make_shared<std::string>("primary");
        auto out = std::make_shared<Output>();
        ma->attach(cmd);
        cmd->add_option("--variant", *variant,
                        "primary | primary_binv | dual | dual_binv | sqrt | "
                        "sqrt_binv");
        out->attach(cmd);
        cmd->callback([=] {
            OpVariant v = OpVariant::primary;
            bool found = false;
            for (OpVariant g :
                 {OpVariant::primary, OpVariant::primary_binv, OpVariant::dual,
                  OpVariant::dual_binv, OpVariant::sqrt, OpVariant::sqrt_binv})
                if (variant_name(g) == *variant) { v = g; found = true; }
            if (!found)
                throw CLI::ValidationError("--variant",
                                           "unknown variant " + *variant);
            BContext ctx(ma->b);
            JValue in = JValue::object();
            in.set("member", JValue::string(ma->member_str));
            in.set("variant", JValue::string(*variant));
            in.set("b", JValue::number(ma->b));
            const SchemeParams p = ma->params(&in);
            const ShiftOperatorSpec op = build_operator(ctx, ma->member(), v, p);
            const cplx point = (op.acts_on == 1) ? p.v1 : p.v2;
            JValue j = result_skeleton("op");
            j.set("inputs", std::move(in));
            j.set("acts_on", JValue::string(op.variable));
            JValue terms = JValue::array();
            for (const OpTerm& t : op.terms) {
                JValue tj = JValue::object();
                tj.set("shift", JValue::complex_(t.shift));
                tj.set("coeff_at_point", JValue::complex_(t.coeff(point)));
                terms.push(std::move(tj));
            }
            j.set("terms", std::move(terms));
            j.set("eigenvalue", JValue::complex_(op.eigenvalue));
            out->emit(j);
        });
    }

    // --- contour ----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "contour", "dump the integration contour chosen for a member");
        auto ma = std::make_shared<MemberArgs>();
        auto dump = std::make_shared<bool>(false);
        auto out = std::make_shared<Output>();
        ma->attach(cmd);
        cmd->add_flag("--dump", *dump, "include pole rays in the output");
        out->attach(cmd);
        cmd->callback([=] {
            BContext ctx(ma->b);
            JValue in = JValue::object();
            in.set("member", JValue::string(ma->member_str));
            in.set("b", JValue::number(ma->b));
            const SchemeParams p = ma->params(&in);
            const MemberSpec spec = build_member(ctx, ma->member(), p);
            std::vector<PoleLattice> up, down;
            const double Q = ctx.Q();
            for (cplx s : spec.ig.num) down.push_back({-s - iu * Q / 2.0, -1});
            for (cplx s : spec.ig.den) up.push_back({-s + iu * Q / 2.0, +1});
            TailRule tail;
            const ContourSpec contour = auto_contour(up, down, tail, ctx);
            JValue j = result_skeleton("contour");
            j.set("inputs", std::move(in));
            JValue wp = JValue::array();
            for (cplx w : contour.waypoints) wp.push(JValue::complex_(w));
            j.set("waypoints", std::move(wp));
            if (*dump) {
                JValue uj = JValue::array(), dj = JValue::array();
                for (const PoleLattice& r : up)
                    uj.push(JValue::complex_(r.base));
                for (const PoleLattice& r : down)
                    dj.push(JValue::complex_(r.base));
                j.set("pole_rays_up", std::move(uj));
                j.set("pole_rays_down", std::move(dj));
            }
            out->emit(j);
        });
    }

    // --- poly-limit -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand(
            "poly-limit",
            "evaluate a member on its discretization lattice and compare "
            "with the q-polynomial oracle");
        auto ma = std::make_shared<MemberArgs>();
        auto n = std::make_shared<int>(0);
        auto var = std::make_shared<int>(0); // 0 -> first lattice row available
        auto out = std::make_shared<Output>();
        ma->attach(cmd);
        cmd->add_option("--n", *n, "lattice index")->required();
        cmd->add_option("--var", *var, "discretized variable (1 or 2)");
        out->attach(cmd);
        cmd->callback([=] {
            BContext ctx(ma->b);
            const Member m = ma->member();
            int v = *var;
            if (v == 0) {
                for (auto [mm, vv] : lattice_row_list())
                    if (mm == m) { v = vv; break; }
                if (v == 0)
                    throw CLI::ValidationError("--member",
                                               "no lattice row for member " +
                                                   member_name(m));
            }
            JValue in = JValue::object();
            in.set("member", JValue::string(ma->member_str));
            in.set("b", JValue::number(ma->b));
            const SchemeParams p = ma->params(&in);
            in.set("n", JValue::number(*n));
            in.set("var", JValue::number(v));
            const DiscretizationLattice lat = make_lattice(ctx, m, p, v);
            const PolyMap map = poly_param_map(ctx, m, p, v);
            const cplx got = scheme_evaluate_at_lattice(ctx, m, p, lat, *n);
            const cplx want =
                qpoly_eval(map.family, *n, map.params, map.q, map.arg);
            JValue j = result_skeleton("poly-limit");
            j.set("inputs", std::move(in));
            finish(j, got, 0.0, {});
            j.set("oracle", JValue::complex_(want));
            j.set("oracle_family", JValue::string(family_name(map.family)));
            j.set("deviation", JValue::number(detail::rel_resid(got, want)));
            out->emit(j);
        });
    }

    // --- verify -----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("verify", "run the verification suite");
        auto suite = std::make_shared<std::string>("full");
        auto seed = std::make_shared<unsigned>(20240817u);
        auto b = std::make_shared<double>(0.84);
        auto eigen_pts = std::make_shared<int>(0);
        auto out = std::make_shared<Output>();
        cmd->add_option("--suite", *suite, "full or qseries")
            ->check(CLI::IsMember({"full", "qseries"}));
        cmd->add_option("--seed", *seed, "seed for randomized points");
        cmd->add_option("--b", *b, "modular parameter");
        cmd->add_option("--eigen-points", *eigen_pts,
                        "extra random points per eigen equation");
        out->attach(cmd);
        cmd->callback([=, &exit_code] {
            VerifierConfig cfg;
            cfg.b = *b;
            cfg.seed = *seed;
            cfg.eigen_random_points = *eigen_pts;
            cfg.include_scheme_checks = (*suite == "full");
            const SuiteReport rep = run_suite(cfg);
            bool all = true;
            JValue j = result_skeleton("verify");
            JValue in = JValue::object();
            in.set("suite", JValue::string(*suite));
            in.set("seed", JValue::number((double)*seed));
            in.set("b", JValue::number(*b));
            in.set("eigen_points", JValue::number(*eigen_pts));
            j.set("inputs", std::move(in));
            JValue totals = JValue::object();
            for (const auto& [cat, pt] : rep.totals) {
                JValue t = JValue::object();
                t.set("passed", JValue::number(pt.first));
                t.set("total", JValue::number(pt.second));
                totals.set(cat, std::move(t));
                if (pt.first != pt.second) all = false;
            }
            j.set("totals", std::move(totals));
            JValue checks = JValue::array();
            for (const CheckReport& r : rep.checks) {
                JValue c = JValue::object();
                c.set("id", JValue::string(r.check_id));
                c.set("inputs", JValue::string(r.inputs));
                c.set("residual", JValue::number(r.residual));
                c.set("tolerance", JValue::number(r.tolerance));
                c.set("passed", JValue::boolean_(r.passed));
                JValue notes = JValue::array();
                for (const std::string& s : r.notes)
                    notes.push(JValue::string(s));
                c.set("notes", std::move(notes));
                checks.push(std::move(c));
            }
            j.set("checks", std::move(checks));
            j.set("all_passed", JValue::boolean_(all));
            out->emit(j);
            if (!all) exit_code = 1;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors (including --help, which CLI11 reports via the same
        // channel with exit code 0)
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
