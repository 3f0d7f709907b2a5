#include "CLI11.hpp"
#include "json.hpp"

#include "tensorfree/budget.hpp"
#include "tensorfree/ensembles.hpp"
#include "tensorfree/mc.hpp"
#include "tensorfree/melonic.hpp"
#include "tensorfree/paired.hpp"
#include "tensorfree/transforms.hpp"
#include "tensorfree/weingarten.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace tf;
using nlohmann::json;

namespace {

// exit codes
constexpr int kPass = 0, kCheckFailed = 1, kUsage = 2, kBudget = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write " + out);
    f << text;
}

void emit_json(const json& j, const std::string& out = "") { emit(j.dump(2) + "\n", out); }

// a full class text, or colors separated by ';' such as "(1 2);();(1 2)"
InvariantClass class_arg(const std::string& text, Flavor f, int n) {
    if (text.find("c1=") != std::string::npos) return InvariantClass::parse(text);
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) parts.push_back(tok);
    if (parts.empty()) throw UsageError("empty class");
    if (n <= 0)
        for (size_t i = 0; i < text.size(); ++i)
            if (std::isdigit((unsigned char)text[i]) && (i == 0 || !std::isdigit((unsigned char)text[i - 1])))
                n = std::max(n, std::stoi(text.substr(i)));
    if (n <= 0) throw UsageError("give --n for an all-identity class");
    InvariantClass c;
    c.flavor = f;
    for (auto& p : parts) c.rep.push_back(Perm::parse(p, n));
    tuple_degree(c.rep);
    return c;
}

std::string latex_q(const Q& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    std::string s = q < 0 ? "-" : "";
    return s + "\\frac{" + Z(abs(q.get_num())).get_str() + "}{" + q.get_den().get_str() + "}";
}

std::string latex_laurent(const LaurentPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        auto [e, c] = *it;
        Q a = abs(c);
        if (!first) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        first = false;
        std::string mono = e == 0 ? "" : e == 1 ? "N" : "N^{" + std::to_string(e) + "}";
        if (mono.empty()) out += latex_q(a);
        else if (a == 1) out += mono;
        else out += latex_q(a) + " " + mono;
    }
    return out;
}

json leading_json(std::pair<int, Q> l) { return {{"exponent", l.first}, {"coefficient", q_str(l.second)}}; }

// ------------------------------------------------------------ enumerate

struct Row {
    std::string cls;
    int K_m = 0, K_p = 0, omega = 0, order = 0;
    bool melonic = false;
};

json row_json(const Row& r) {
    return {{"class", r.cls}, {"K_m", r.K_m}, {"K_p", r.K_p}, {"omega", r.omega},
            {"melonic", r.melonic}, {"order", r.order}};
}

std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
            else if (c == '"') quoted = false;
            else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

const char* kCsvHeader = "class,K_m,K_p,omega,melonic,order";

std::vector<Row> rows_from_text(const std::string& text) {
    std::vector<Row> rows;
    auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && text[start] == '{') {
        json j = json::parse(text);
        for (auto& r : j.at("classes"))
            rows.push_back({r.at("class"), r.at("K_m"), r.at("K_p"), r.at("omega"), r.at("order"), r.at("melonic")});
        return rows;
    }
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line != kCsvHeader) throw UsageError("expected a CSV header: " + std::string(kCsvHeader));
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        auto f = csv_split(line);
        if (f.size() != 6) throw UsageError("bad CSV row: " + line);
        rows.push_back({f[0], std::stoi(f[1]), std::stoi(f[2]), std::stoi(f[3]), std::stoi(f[5]), f[4] == "true"});
    }
    return rows;
}

std::string rows_text(const std::vector<Row>& rows, const std::string& format, bool latex) {
    if (latex) {
        std::string t = "\\begin{tabular}{lrrrrl}\n\\hline\nclass & $K_m$ & $K_p$ & $\\omega$ & order & melonic \\\\\n\\hline\n";
        for (auto& r : rows) {
            auto c = InvariantClass::parse(r.cls);
            std::string perms;
            for (size_t i = 0; i < c.rep.size(); ++i) perms += (i ? ", " : "") + c.rep[i].str();
            t += "$(" + perms + ")$ & " + std::to_string(r.K_m) + " & " + std::to_string(r.K_p) + " & " +
                 std::to_string(r.omega) + " & " + std::to_string(r.order) + " & " + (r.melonic ? "yes" : "no") + " \\\\\n";
        }
        return t + "\\hline\n\\end{tabular}\n";
    }
    if (format == "csv") {
        std::string t = std::string(kCsvHeader) + "\n";
        for (auto& r : rows)
            t += csv_quote(r.cls) + "," + std::to_string(r.K_m) + "," + std::to_string(r.K_p) + "," +
                 std::to_string(r.omega) + "," + (r.melonic ? "true" : "false") + "," + std::to_string(r.order) + "\n";
        return t;
    }
    json j;
    j["classes"] = json::array();
    for (auto& r : rows) j["classes"].push_back(row_json(r));
    j["count"] = rows.size();
    return j.dump(2) + "\n";
}

// ------------------------------------------------------------ transform

// table key, split into the class and an optional word
std::pair<InvariantClass, std::optional<Word>> key_class(const std::string& key) {
    auto w = key.find(";w=");
    if (w == std::string::npos) return {InvariantClass::parse(key), std::nullopt};
    Word word;
    std::stringstream ss(key.substr(w + 3));
    std::string tok;
    while (std::getline(ss, tok, ',')) word.push_back(std::stoi(tok));
    return {InvariantClass::parse(key.substr(0, w)), word};
}

AsymptoticTable asymptotic_transform(const AsymptoticTable& in, const std::string& regime, bool to_cumulants) {
    if (regime == "melonic" && in.flavor != Flavor::Pure) throw UsageError("the melonic regime takes a pure table");
    if (regime == "wishart" && in.flavor != Flavor::Mixed) throw UsageError("the wishart regime takes a mixed table");
    AsymptoticTable out;
    out.flavor = in.flavor;
    out.labelled = in.labelled;
    for (auto& [key, v] : in.values) {
        (void)v;
        auto [c, w] = key_class(key);
        const Word* wp = w ? &*w : nullptr;
        if (regime == "melonic")
            out.values[key] = to_cumulants ? asymptotic_cumulant_melonic(in, c.rep, wp)
                                           : asymptotic_moment_from_cumulants_melonic(in, c.rep, wp);
        else
            out.values[key] = to_cumulants ? asymptotic_cumulant_wishart_mixed(in, c.rep, wp)
                                           : asymptotic_moment_from_cumulants_wishart_mixed(in, c.rep, wp);
    }
    return out;
}

FiniteTable finite_transform(const FiniteTable& in, bool to_cumulants) {
    FiniteTable out;
    out.flavor = in.flavor;
    for (auto& [key, v] : in.values) {
        (void)v;
        auto [c, w] = key_class(key);
        if (w) throw UsageError("finite tables are unlabelled");
        if (to_cumulants)
            out.values[key] = in.flavor == Flavor::Pure ? finite_cumulant_pure(in, c.rep) : finite_cumulant_mixed(in, c.rep);
        else
            out.values[key] = finite_moment_from_cumulants(in, c.rep);
    }
    return out;
}

// ------------------------------------------------------------ tables

AsymptoticTable gaussian_table(int D, int n_max, const Q& C) {
    AsymptoticTable t;
    t.flavor = Flavor::Pure;
    for (int n = 1; n <= n_max; ++n) {
        Q Cn = 1;
        for (int i = 0; i < n; ++i) Cn *= C;
        for (auto& c : first_order_classes(n, D, Flavor::Pure)) t.values[c.str()] = Cn * Q(gaussian_scaling(c.rep).phi);
    }
    return t;
}

AsymptoticTable wishart_table(int D, int n_max) {
    AsymptoticTable t;
    t.flavor = Flavor::Mixed;
    for (int n = 1; n <= n_max; ++n)
        for (auto& c : first_order_classes(n, D, Flavor::Mixed)) t.values[c.str()] = Q(wishart_scaling(c.rep).phi);
    return t;
}

json estimate_json(const Estimate& e) {
    return {{"mean_re", e.mean.real()}, {"mean_im", e.mean.imag()}, {"stderr", e.stderr_}, {"samples", e.samples}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensorfree: trace invariants of random tensors"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 0;
    double budget_cap = 0;
    bool latex = false;
    app.add_option("--threads", threads, "worker threads (default: available parallelism)");
    app.add_option("--budget", budget_cap, "work budget in elementary steps (default: TENSORFREE_BUDGET or 2e8)");
    app.add_flag("--latex", latex, "LaTeX output where a table or formula is printed");

    // enumerate
    auto* en = app.add_subcommand("enumerate", "list invariant classes");
    int en_n = 1, en_D = 3;
    std::string en_flavor = "pure", en_format = "json", en_input, en_out;
    bool en_connected = false, en_melonic = false, en_first = false;
    en->add_option("--n", en_n, "number of black vertices");
    en->add_option("--D", en_D, "number of colors");
    en->add_option("--flavor", en_flavor)->check(CLI::IsMember({"pure", "mixed"}));
    en->add_flag("--connected", en_connected, "connected classes only (purely connected for pure)");
    en->add_flag("--melonic", en_melonic, "melonic classes only");
    en->add_flag("--first-order", en_first, "first-order classes of the flavor only");
    en->add_option("--format", en_format)->check(CLI::IsMember({"json", "csv"}));
    en->add_option("--input", en_input, "convert a listing (JSON or CSV) instead of enumerating");
    en->add_option("--out", en_out);

    // transform
    auto* tr = app.add_subcommand("transform", "moment <-> cumulant tables");
    std::string tr_in, tr_out, tr_dir = "to-cumulants", tr_regime = "finite";
    bool tr_check = false;
    tr->add_option("--in", tr_in)->required();
    tr->add_option("--out", tr_out);
    tr->add_option("--direction", tr_dir)->check(CLI::IsMember({"to-cumulants", "to-moments"}));
    tr->add_option("--regime", tr_regime)->check(CLI::IsMember({"finite", "melonic", "wishart"}));
    tr->add_flag("--check", tr_check, "apply the inverse transform and compare");

    // gaussian
    auto* ga = app.add_subcommand("gaussian", "exact Gaussian moments and scaling");
    std::string ga_class, ga_C = "1", ga_N, ga_out;
    int ga_n = 0, ga_D = 3, ga_nmax = 0, ga_finite = 0;
    std::string ga_flavor = "pure";
    ga->add_option("--class", ga_class, "class text or colors separated by ';'");
    ga->add_option("--n", ga_n);
    ga->add_option("--C", ga_C, "covariance");
    ga->add_option("--N", ga_N, "also evaluate at this N");
    ga->add_option("--table", ga_nmax, "emit the first-order moment table up to this n");
    ga->add_option("--finite-table", ga_finite, "emit exact finite moments of every class up to this n");
    ga->add_option("--flavor", ga_flavor, "finite table flavor; mixed uses A = T (x) conj(T)")
        ->check(CLI::IsMember({"pure", "mixed"}));
    ga->add_option("--D", ga_D);
    ga->add_option("--out", ga_out);

    // wishart
    auto* wi = app.add_subcommand("wishart", "exact Wishart moments");
    std::string wi_class, wi_t = "1", wi_out;
    int wi_n = 0, wi_D = 3, wi_nmax = 0, wi_matrix = 0;
    wi->add_option("--matrix", wi_matrix, "D = 1 moment Tr W^n");
    wi->add_option("--t", wi_t, "weight per cycle of the matrix moment");
    wi->add_option("--class", wi_class, "mixed class text or colors separated by ';'");
    wi->add_option("--n", wi_n);
    wi->add_option("--table", wi_nmax, "emit the first-order mixed table up to this n");
    wi->add_option("--D", wi_D);
    wi->add_option("--out", wi_out);

    // gram
    auto* gr = app.add_subcommand("gram", "Gram matrix of the classes");
    int gr_n = 1, gr_D = 3;
    std::string gr_flavor = "pure", gr_N;
    bool gr_exact = false;
    gr->add_option("--n", gr_n);
    gr->add_option("--D", gr_D);
    gr->add_option("--flavor", gr_flavor)->check(CLI::IsMember({"pure", "mixed"}));
    gr->add_flag("--exact", gr_exact, "full Laurent entries instead of leading terms");
    gr->add_option("--N", gr_N, "check invertibility at this N");

    // weingarten
    auto* wg = app.add_subcommand("weingarten", "exact Weingarten function");
    std::string wg_type;
    wg->add_option("--type", wg_type, "cycle type, e.g. 2,1")->required();

    // freeness-check
    auto* fc = app.add_subcommand("freeness-check", "equivalent freeness conditions on a multilabel table");
    std::string fc_demo, fc_table;
    int fc_D = 3, fc_nmax = 3, fc_labels = 2;
    fc->add_option("--demo", fc_demo)->check(CLI::IsMember({"gaussian-pair", "wishart-pair", "gaussian-self"}));
    fc->add_option("--table", fc_table, "labelled first-order table (JSON)");
    fc->add_option("--D", fc_D);
    fc->add_option("--n-max", fc_nmax);
    fc->add_option("--labels", fc_labels);

    // mc-verify
    auto* mc = app.add_subcommand("mc-verify", "Monte Carlo against exact values");
    std::string mc_config, mc_out, mc_ensemble, mc_flavor;
    int mc_N = 0, mc_D = 0, mc_nmax = 2, mc_micro = 0;
    long mc_samples = 0;
    uint64_t mc_seed = 0;
    double mc_band = 3;
    bool mc_lu = false;
    mc->add_option("--config", mc_config, "key=value run file");
    mc->add_option("--N", mc_N);
    mc->add_option("--D", mc_D);
    mc->add_option("--samples", mc_samples);
    mc->add_option("--seed", mc_seed);
    mc->add_option("--ensemble", mc_ensemble)->check(CLI::IsMember({"ginibre", "gaussian", "wishart"}));
    mc->add_option("--flavor", mc_flavor)->check(CLI::IsMember({"pure", "mixed"}));
    mc->add_option("--n-max", mc_nmax, "all classes up to this n when the config lists none");
    mc->add_option("--microscopic", mc_micro, "microscopic cumulant checks up to this n");
    mc->add_flag("--lu", mc_lu, "local unitary invariance residuals");
    mc->add_option("--band", mc_band, "band in standard errors");
    mc->add_option("--out", mc_out);

    // fixed-point
    auto* fp = app.add_subcommand("fixed-point", "melonic fixed point as a truncated series");
    std::vector<std::string> fp_couplings, fp_z;
    int fp_order = 4;
    fp->add_option("--coupling", fp_couplings, "interaction class, full text or colors separated by ';' (repeatable)")->required();
    fp->add_option("--z", fp_z, "numeric coupling values, one per coupling");
    fp->add_option("--order", fp_order);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (threads) set_thread_count(threads);
        if (budget_cap > 0) set_budget(budget_cap);

        if (*en) {
            std::vector<Row> rows;
            if (!en_input.empty()) {
                rows = rows_from_text(read_file(en_input));
            } else {
                Flavor f = parse_flavor(en_flavor);
                auto cls = en_first ? first_order_classes(en_n, en_D, f) : enumerate_classes(en_n, en_D, f, false);
                for (auto& c : cls) {
                    Row r;
                    r.cls = c.str();
                    r.K_m = K_mixed(c.rep);
                    r.K_p = K_pure(c.rep);
                    if (en_connected && (f == Flavor::Pure ? r.K_p : r.K_m) != 1) continue;
                    r.melonic = is_melonic(c.rep);
                    if (en_melonic && !r.melonic) continue;
                    r.omega = degree(c.rep);
                    r.order = order_of_dominance(c.rep, f == Flavor::Pure ? Scaling::PureGaussian : Scaling::WishartMixed);
                    rows.push_back(r);
                }
            }
            emit(rows_text(rows, en_format, latex), en_out);
            return kPass;
        }

        if (*tr) {
            std::string text = read_file(tr_in);
            bool to_cum = tr_dir == "to-cumulants";
            json report;
            std::string result;
            bool ok = true;
            if (tr_regime == "finite") {
                auto in = finite_table_from_json(text);
                auto out = finite_transform(in, to_cum);
                result = table_json(out) + "\n";
                if (tr_check) ok = finite_transform(out, !to_cum).values == in.values;
            } else {
                auto in = asymptotic_table_from_json(text);
                auto out = asymptotic_transform(in, tr_regime, to_cum);
                result = table_json(out) + "\n";
                if (tr_check) ok = asymptotic_transform(out, tr_regime, !to_cum).values == in.values;
            }
            emit(result, tr_out);
            if (tr_check) {
                report["round_trip"] = ok;
                std::cerr << report.dump() << "\n";
            }
            return ok ? kPass : kCheckFailed;
        }

        if (*ga) {
            Q C = q_parse(ga_C);
            if (ga_nmax > 0) {
                emit(table_json(gaussian_table(ga_D, ga_nmax, C)) + "\n", ga_out);
                return kPass;
            }
            if (ga_finite > 0) {
                FiniteTable t;
                t.flavor = parse_flavor(ga_flavor);
                for (int n = 1; n <= ga_finite; ++n)
                    for (auto& c : enumerate_classes(n, ga_D, t.flavor, false))
                        t.values[c.str()] = RatFunc(gaussian_moment_exact(c.rep, C));
                emit(table_json(t) + "\n", ga_out);
                return kPass;
            }
            if (ga_class.empty()) throw UsageError("gaussian needs --class, --table or --finite-table");
            auto c = class_arg(ga_class, Flavor::Pure, ga_n);
            auto m = gaussian_moment_exact(c.rep, C);
            auto sc = gaussian_scaling(c.rep);
            if (latex) {
                emit("\\mathbb{E}[\\mathrm{Tr}_{\\sigma}] = " + latex_laurent(m) + "\n", ga_out);
                return kPass;
            }
            json j{{"class", canonicalize(c.rep, Flavor::Pure).str()},
                   {"moment", m.str()},
                   {"leading", leading_json(m.leading())},
                   {"r", sc.r},
                   {"phi", sc.phi.get_str()},
                   {"melonic", is_melonic(c.rep)}};
            if (!ga_N.empty()) j["value_at_N"] = q_str(m.eval(q_parse(ga_N)));
            emit_json(j, ga_out);
            return kPass;
        }

        if (*wi) {
            if (wi_nmax > 0) {
                emit(table_json(wishart_table(wi_D, wi_nmax)) + "\n", wi_out);
                return kPass;
            }
            json j;
            if (wi_matrix > 0) {
                Q t = q_parse(wi_t);
                auto m = wishart_matrix_moment(wi_matrix, t);
                if (latex) {
                    emit("\\mathbb{E}[\\mathrm{Tr}\\, W^{" + std::to_string(wi_matrix) + "}] = " + latex_laurent(m) + "\n", wi_out);
                    return kPass;
                }
                j = {{"n", wi_matrix}, {"moment", m.str()}, {"asymptotic", q_str(wishart_matrix_moment_asymptotic(wi_matrix, t))}};
            } else {
                if (wi_class.empty()) throw UsageError("wishart needs --matrix, --class or --table");
                auto c = class_arg(wi_class, Flavor::Mixed, wi_n);
                auto m = gaussian_moment_exact(append(c.rep, Perm(c.n())), 1);
                auto sc = wishart_scaling(c.rep);
                if (latex) {
                    emit("\\mathbb{E}[\\mathrm{Tr}_{\\sigma}(W)] = " + latex_laurent(m) + "\n", wi_out);
                    return kPass;
                }
                j = {{"class", canonicalize(c.rep, Flavor::Mixed).str()}, {"moment", m.str()},
                     {"leading", leading_json(m.leading())}, {"r", sc.r}, {"phi", sc.phi.get_str()}};
            }
            emit_json(j, wi_out);
            return kPass;
        }

        if (*gr) {
            auto cls = enumerate_classes(gr_n, gr_D, parse_flavor(gr_flavor), false);
            json j;
            j["classes"] = json::array();
            for (auto& c : cls) j["classes"].push_back(c.str());
            std::vector<std::vector<LaurentPoly>> g;
            if (gr_exact || !gr_N.empty()) g = gram_matrix(cls);
            std::string tex = "\\begin{pmatrix}\n";
            json rows = json::array();
            for (size_t a = 0; a < cls.size(); ++a) {
                json row = json::array();
                for (size_t b = 0; b < cls.size(); ++b) {
                    if (gr_exact) {
                        row.push_back(g[a][b].str());
                        tex += (b ? " & " : "") + latex_laurent(g[a][b]);
                    } else {
                        auto [e, c] = gram_leading(cls[a], cls[b]);
                        row.push_back({{"exponent", e}, {"coefficient", c.get_str()}});
                        tex += (b ? " & " : "") + latex_laurent(LaurentPoly(Q(c), e));
                    }
                }
                rows.push_back(row);
                tex += " \\\\\n";
            }
            tex += "\\end{pmatrix}\n";
            j[gr_exact ? "exact" : "leading"] = rows;
            bool ok = true;
            if (!gr_N.empty()) {
                ok = gram_invertible_at(g, q_parse(gr_N));
                j["invertible_at_N"] = ok;
            }
            if (latex) emit(tex, "");
            else emit_json(j);
            return ok ? kPass : kCheckFailed;
        }

        if (*wg) {
            IntPartition type;
            std::stringstream ss(wg_type);
            std::string tok;
            while (std::getline(ss, tok, ',')) type.push_back(std::stoi(tok));
            std::sort(type.rbegin(), type.rend());
            auto w = weingarten(type);
            auto lead = weingarten_asymptotic(perm_of_type(type));
            if (latex) {
                emit("W(" + partition_str(type) + ") = " + w.str() + "\n", "");
                return kPass;
            }
            emit_json({{"type", partition_str(type)}, {"value", w.str()}, {"serialized", w.serialize()},
                       {"leading", {{"coefficient", q_str(lead.first)}, {"exponent", lead.second}}}});
            return kPass;
        }

        if (*fc) {
            AsymptoticTable t;
            std::string source;
            if (!fc_demo.empty()) {
                source = fc_demo;
                if (fc_demo == "gaussian-pair") t = gaussian_multilabel_table(fc_D, fc_nmax, {Q(1), Q(2)});
                else if (fc_demo == "wishart-pair") t = wishart_multilabel_table(fc_D, fc_nmax, {Q(1), Q(3)});
                else {
                    // one ensemble under two labels
                    auto one = gaussian_multilabel_table(fc_D, fc_nmax, {Q(1)});
                    t.flavor = one.flavor;
                    t.labelled = true;
                    for (int n = 1; n <= fc_nmax; ++n)
                        for (auto& c : first_order_classes(n, fc_D, t.flavor)) {
                            int len = t.flavor == Flavor::Pure ? 2 * n : n;
                            for (long m = 0; m < (1L << len); ++m) {
                                Word w(len);
                                for (int i = 0; i < len; ++i) w[i] = (m >> i) & 1;
                                t.values[table_key(c.rep, w, t.flavor)] = one.at(table_key(c.rep, Word(len, 0), t.flavor));
                            }
                        }
                }
            } else if (!fc_table.empty()) {
                source = fc_table;
                t = asymptotic_table_from_json(read_file(fc_table));
            } else {
                throw UsageError("freeness-check needs --demo or --table");
            }
            auto r = freeness_check(t, t.flavor, fc_D, fc_nmax, fc_labels);
            const char* names[3] = {"cumulants", "paired_cumulants", "centered_moments"};
            bool vals[3] = {r.cumulants, r.paired_cumulants, r.centered_moments};
            json j{{"source", source}, {"flavor", flavor_name(t.flavor)}, {"D", fc_D}, {"n_max", fc_nmax},
                   {"agree", r.agree()}};
            for (int i = 0; i < 3; ++i)
                j["conditions"][names[i]] = {{"holds", vals[i]}, {"checked", r.checked[i]}, {"counterexample", r.counterexample[i]}};
            j["free"] = r.agree() && r.cumulants;
            emit_json(j);
            return r.agree() && r.cumulants ? kPass : kCheckFailed;
        }

        if (*mc) {
            McConfig cfg = mc_config.empty() ? McConfig{} : parse_mc_config(read_file(mc_config));
            if (mc_N) cfg.N = mc_N;
            if (mc_D) cfg.D = mc_D;
            if (mc_samples) cfg.samples = mc_samples;
            if (mc_seed) cfg.seed = mc_seed;
            if (!mc_ensemble.empty()) cfg.ensemble = parse_ensemble(mc_ensemble);
            if (!mc_flavor.empty()) cfg.flavor = parse_flavor(mc_flavor);
            if (cfg.ensemble == Ensemble::Wishart && mc_flavor.empty()) cfg.flavor = Flavor::Mixed;
            std::vector<InvariantClass> cls;
            for (auto& t : cfg.classes) cls.push_back(InvariantClass::parse(t));
            if (cls.empty())
                for (int n = 1; n <= mc_nmax; ++n)
                    for (auto& c : enumerate_classes(n, cfg.D, cfg.flavor, false)) cls.push_back(c);
            for (auto& c : cls)
                if (c.flavor != cfg.flavor || c.D() != cfg.D) throw UsageError("class does not match the run: " + c.str());
            std::vector<PermTuple> tuples;
            for (auto& c : cls) tuples.push_back(c.rep);
            auto est = estimate_moments(tuples, cfg);
            bool ok = true;
            json j;
            j["config"] = {{"ensemble", ensemble_name(cfg.ensemble)}, {"flavor", flavor_name(cfg.flavor)}, {"N", cfg.N},
                           {"D", cfg.D},  {"C", cfg.C}, {"samples", cfg.samples}, {"seed", cfg.seed},
                           {"summands", cfg.summands}, {"band", mc_band}};
            j["moments"] = json::array();
            for (size_t i = 0; i < cls.size(); ++i) {
                double exact = exact_moment(cls[i].rep, cfg);
                double z = est[i].z(exact);
                bool pass = z <= mc_band;
                ok = ok && pass;
                json e = estimate_json(est[i]);
                e["class"] = cls[i].str();
                e["exact"] = exact;
                e["z"] = z;
                e["pass"] = pass;
                if (mc_lu) {
                    double res = lu_invariance_residual(cls[i].rep, cfg.flavor, cfg.N, cfg.seed);
                    e["lu_residual"] = res;
                    ok = ok && res < 1e-9;
                }
                j["moments"].push_back(e);
            }
            if (mc_micro > 0) {
                j["microscopic"] = json::array();
                for (auto& c : cls) {
                    if (c.n() > mc_micro) continue;
                    auto r = check_microscopic_cumulant(c.rep, cfg, mc_band);
                    ok = ok && r.pass;
                    json e = estimate_json(r.mc);
                    e["class"] = c.str();
                    e["pattern"] = r.pattern;
                    e["exact"] = r.exact;
                    e["z"] = r.z;
                    e["pass"] = r.pass;
                    j["microscopic"].push_back(e);
                }
            }
            j["pass"] = ok;
            emit_json(j, mc_out);
            return ok ? kPass : kCheckFailed;
        }

        if (*fp) {
            std::vector<Coupling> cs;
            for (size_t i = 0; i < fp_couplings.size(); ++i) {
                auto c = class_arg(fp_couplings[i], Flavor::Pure, 0);
                Coupling k;
                k.name = canonicalize(c.rep, Flavor::Pure).str();
                k.n_tau = c.n();
                if (i < fp_z.size()) k.z = q_parse(fp_z[i]);
                cs.push_back(k);
            }
            auto G = melonic_fixed_point(cs, fp_order);
            std::vector<std::string> names;
            std::vector<Q> vals;
            for (size_t i = 0; i < cs.size(); ++i) {
                names.push_back("z" + std::to_string(i + 1));
                vals.push_back(cs[i].z);
            }
            json j;
            j["series"] = G.str(names);
            j["couplings"] = json::array();
            for (size_t i = 0; i < cs.size(); ++i)
                j["couplings"].push_back({{"name", names[i]}, {"class", cs[i].name}, {"n", cs[i].n_tau}, {"z", q_str(cs[i].z)}});
            j["along"] = json::array();
            for (auto& q : G.along(vals, fp_order)) j["along"].push_back(q_str(q));
            emit_json(j);
            return kPass;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << json{{"error", "budget"}, {"message", e.what()}}.dump() << "\n";
        return kBudget;
    } catch (const UsageError& e) {
        std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << json{{"error", "input"}, {"message", e.what()}}.dump() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", "input"}, {"message", e.what()}}.dump() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return kCheckFailed;
    }
    return kUsage;
}
