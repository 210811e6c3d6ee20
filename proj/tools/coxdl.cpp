// coxdl: command-line front end. Every subcommand prints one JSON document
// {config, results, verdicts, timings, cache_stats} (or CSV rows) and exits
// 0 iff every verdict it produced passed.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <memory>

#include "coxdl/acceptance.hpp"
#include "coxdl/cache.hpp"
#include "coxdl/langlands.hpp"
#include "coxdl/lemmas.hpp"

using nlohmann::ordered_json;
using namespace coxdl;

namespace {

struct Config {
    std::string command, lemma;
    unsigned q = 2, n = 2, kappa = 0, h = 1, ext = 0, i0 = 1, threads = 1;
    std::vector<std::string> thetas;
    std::string cache_dir, format = "json", profile = "full";
    std::uint64_t seed = 20240501;
    bool gp_only = false, table = false;
    // lemma parameters
    unsigned m = 1, r = 2, s = 1, a = 1, b = 1, c = 1, d = 1, m_max = 3, samples = 0, trials = 1000, n_max = 6;
    std::vector<unsigned> M;

    ordered_json json() const {
        ordered_json j = {{"command", command}};
        if (!lemma.empty()) j["lemma"] = lemma;
        j["spec"] = {{"q", q}, {"n", n}, {"kappa", kappa}, {"h", h}};
        if (ext) j["ext"] = ext;
        j["i0"] = i0;
        j["theta"] = thetas;
        j["threads"] = threads;
        j["cache_dir"] = cache_dir;
        j["format"] = format;
        j["profile"] = profile;
        j["seed"] = seed;
        if (command == "verify")
            j["lemma_params"] = {{"m", m}, {"r", r}, {"s", s}, {"a", a}, {"b", b}, {"c", c}, {"d", d},
                                 {"m_max", m_max}, {"samples", samples}, {"trials", trials}, {"n_max", n_max}, {"M", M}};
        return j;
    }
};

struct Output {
    ordered_json results = ordered_json::object();
    ordered_json verdicts = ordered_json::array();
    ordered_json timings = ordered_json::object();
    ordered_json cache = ordered_json::object();
    bool all_pass = true;

    void verdict(const std::string& name, bool pass, const std::string& detail, bool skipped = false) {
        ordered_json v = {{"name", name}, {"pass", pass}, {"detail", detail}};
        if (skipped) v["skipped"] = true;
        verdicts.push_back(v);
        all_pass = all_pass && pass;
    }
};

class Timer {
public:
    Timer(Output& o, std::string key) : o_(o), key_(std::move(key)), t0_(std::chrono::steady_clock::now()) {}
    ~Timer() { o_.timings[key_] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    Output& o_;
    std::string key_;
    std::chrono::steady_clock::time_point t0_;
};

// Pipeline with the optional on-disk count cache attached.
struct Session {
    std::unique_ptr<Pipeline> P;
    std::unique_ptr<SCountCache> cache;

    Session(const Config& cfg, Output& out) {
        PipelineOptions po;
        po.threads = cfg.threads;
        P = std::make_unique<Pipeline>(GroupSpec::make(cfg.q, cfg.n, cfg.kappa, cfg.h), po);
        if (!cfg.cache_dir.empty()) {
            cache = std::make_unique<SCountCache>(cfg.cache_dir, P->spec(), P->order_hash());
            cache->attach(*P);
        }
        {
            Timer t(out, "s_table");
            P->table();
        }
        const auto& st = P->stats();
        out.cache = {{"file", cache ? cache->path().string() : ""},
                     {"loaded", cache ? cache->loaded() : 0},
                     {"rejected", cache ? cache->rejected() : 0},
                     {"hits", cache ? cache->hits() : 0},
                     {"written", cache ? cache->written() : 0},
                     {"computed", st.computed},
                     {"from_symmetry", st.from_symmetry},
                     {"from_cache", st.from_cache},
                     {"pruned", st.pruned}};
    }
};

std::vector<TorusChar> selected_thetas(const Config& cfg, const Torus& T) {
    std::vector<TorusChar> r;
    if (!cfg.thetas.empty()) {
        for (auto& s : cfg.thetas) r.push_back(parse_theta(T, s));
        return r;
    }
    for (auto& th : all_characters(T))
        if (!cfg.gp_only || is_general_position(th, false)) r.push_back(th);
    return r;
}

ordered_json class_function_json(const Pipeline& P, const ClassFunction& f) {
    ordered_json v = ordered_json::array();
    const auto& cl = P.group().classes();
    for (std::size_t k = 0; k < f.values.size(); ++k)
        v.push_back({{"class", k}, {"rep", cl.rep[k]}, {"size", cl.size[k]}, {"value", f.values[k].str()}});
    return v;
}

ordered_json howe_json(const HoweDecomposition& hd, const GroupSpec& s) {
    return {{"t", hd.t}, {"r", hd.r}, {"levels", hd.levels}, {"d", hd.d}, {"r_of_a", hd.r_of_a},
            {"top_field_proper", hd.top_field_proper}, {"norm_only", hd.norm_only},
            {"r_theta", r_theta(hd, s)}, {"degree", degree_formula(hd, s).get_str()}};
}

void run_count(const Config& cfg, Output& out) {
    GroupSpec s = GroupSpec::make(cfg.q, cfg.n, cfg.kappa, cfg.h);
    if (cfg.ext) {
        Timer t(out, "points");
        PointModel M(s);
        auto tower = build_tower(s.p, s.f, {cfg.ext});
        out.results["points"] = count_points(M, *tower, cfg.ext);
    }
    if (cfg.table || !cfg.ext) {
        Session S(cfg, out);
        const auto& tab = S.P->table();
        out.results["group_order"] = S.P->group().size();
        out.results["torus_order"] = tab.tcount;
        ordered_json rows = ordered_json::array();
        for (std::size_t k = 0; k < tab.classes; ++k) {
            std::vector<std::uint64_t> row(tab.counts.begin() + k * tab.tcount, tab.counts.begin() + (k + 1) * tab.tcount);
            rows.push_back({{"class", k}, {"counts", row}});
        }
        out.results["s_counts"] = rows;
    }
}

void run_chartab(const Config& cfg, Output& out) {
    Session S(cfg, out);
    Pipeline& P = *S.P;
    ordered_json chars = ordered_json::array();
    Timer t(out, "characters");
    for (auto& th : selected_thetas(cfg, P.torus())) {
        auto rep = P.lambda_extract(P.c_function(th), th);
        ordered_json j = {{"theta", format_theta(th)}, {"general_position", is_general_position(th, false)},
                          {"level", char_level(th)}, {"cc", rep.cc.get_str()}, {"concentrated", rep.concentrated}};
        if (rep.concentrated) {
            j["r"] = rep.r;
            j["eps"] = rep.eps;
            j["lambda"] = rep.lambda.get_str();
            j["genuine"] = rep.chi.genuine;
            j["values"] = class_function_json(P, rep.chi);
        }
        if (!rep.note.empty()) j["note"] = rep.note;
        chars.push_back(j);
    }
    out.results["characters"] = chars;
}

void run_mackey(const Config& cfg, Output& out) {
    Session S(cfg, out);
    auto th = selected_thetas(cfg, S.P->torus());
    Timer t(out, "mackey");
    auto res = mackey_matrix(*S.P, th);
    ordered_json names = ordered_json::array(), meas = ordered_json::array();
    for (std::size_t i = 0; i < th.size(); ++i) {
        names.push_back(format_theta(th[i]));
        ordered_json row = ordered_json::array();
        for (auto& v : res.measured[i]) row.push_back(v < 0 ? ordered_json(nullptr) : ordered_json(v.get_str()));
        meas.push_back(row);
    }
    out.results["thetas"] = names;
    out.results["extracted"] = res.extracted;
    out.results["measured"] = meas;
    out.results["predicted"] = res.predicted;
    out.verdict("mackey", res.pass, "measured |<chi,chi'>| equals the twisted-orbit count on extracted pairs");
}

void run_howe(const Config& cfg, Output& out) {
    GroupSpec s = GroupSpec::make(cfg.q, cfg.n, cfg.kappa, cfg.h);
    auto tower = build_tower(s.p, s.f, {s.n});
    Torus T(s, tower);
    ordered_json arr = ordered_json::array();
    for (auto& th : selected_thetas(cfg, T)) {
        ordered_json j = {{"theta", format_theta(th)}};
        j.update(howe_json(howe_decompose(th), s));
        arr.push_back(j);
    }
    out.results["howe"] = arr;
}

void run_degree(const Config& cfg, Output& out) {
    Session S(cfg, out);
    Pipeline& P = *S.P;
    ordered_json arr = ordered_json::array();
    Timer t(out, "degree");
    for (auto& th : selected_thetas(cfg, P.torus())) {
        auto rep = P.lambda_extract(P.c_function(th), th);
        auto dv = verify_degree(P, rep);
        auto fd = formal_degree_check(P, th);
        arr.push_back({{"theta", format_theta(th)}, {"degree", dv.detail}, {"formal_degree", fd.verdict.detail}});
        if (rep.concentrated) {
            out.verdict("degree " + format_theta(th), dv.pass, dv.detail);
            out.verdict("formal-degree " + format_theta(th), fd.verdict.pass, fd.verdict.detail);
        }
    }
    out.results["degrees"] = arr;
}

void run_param(const Config& cfg, Output& out) {
    WeilModel W(cfg.q, cfg.n, cfg.h);
    auto th = selected_thetas(cfg, W.torus());
    Timer t(out, "param");
    ordered_json arr = ordered_json::array();
    for (auto& x : th) {
        auto sg = sigma_theta(W, x);
        arr.push_back({{"theta", format_theta(x)}, {"dim", sg.dim().str()},
                       {"norm", param_inner(sg, sg).str()}});
        auto dv = verify_det_on_A(W, x);
        out.verdict("det-on-A " + format_theta(x), dv.pass, dv.detail);
    }
    out.results["order_M"] = W.order();
    out.results["order_A"] = W.order_A();
    out.results["parameters"] = arr;
    auto v = verify_param_bijection(W, th);
    out.verdict("param-bijection", v.pass, v.detail);
}

void run_verify(const Config& cfg, Output& out) {
    Timer t(out, cfg.lemma);
    const GroupSpec spec = GroupSpec::make(cfg.q, cfg.n, cfg.kappa, cfg.h);
    LemmaVerdict v;
    if (cfg.lemma == "norm-image") v = verify_norm_image(cfg.q, cfg.n, cfg.m, cfg.h);
    else if (cfg.lemma == "rh-fibers") v = verify_Rh_fibers(cfg.q, cfg.r, cfg.s, cfg.h, cfg.m_max);
    else if (cfg.lemma == "curve-reduction") v = verify_curve_reduction(cfg.q, cfg.a, cfg.b, cfg.c, cfg.d, cfg.m_max);
    else if (cfg.lemma == "minor-identity") {
        unsigned M = cfg.M.empty() ? cfg.n : cfg.M.front();
        v = verify_minor_identity(spec, cfg.i0, cfg.samples ? SampleMode::random : SampleMode::exhaustive, cfg.samples, M, cfg.seed);
    } else if (cfg.lemma == "quotient-fibers")
        v = verify_quotient_fibers(spec, cfg.i0, cfg.M.empty() ? std::vector<unsigned>{2, 4} : cfg.M, cfg.seed);
    else if (cfg.lemma == "turnbull") v = verify_turnbull(cfg.trials, cfg.seed);
    else if (cfg.lemma == "sigma-w") v = verify_sigma_w(cfg.n_max);
    else throw CLI::ValidationError("verify", "unknown lemma id '" + cfg.lemma + "'");
    out.results = {{"id", v.id}, {"params", v.params}, {"detail", v.detail}, {"witness", v.witness}, {"seed", v.seed}};
    std::string detail = v.reason.empty() ? v.detail : v.reason;
    out.verdict(v.id, v.pass, detail, v.skipped);
}

void run_accept(const Config& cfg, Output& out) {
    AcceptOptions o;
    o.full = cfg.profile == "full";
    o.threads = cfg.threads;
    o.cache_dir = cfg.cache_dir;
    o.seed = cfg.seed;
    ordered_json arr = ordered_json::array();
    for (auto& r : run_acceptance(o)) {
        arr.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass}, {"note", r.note}, {"lines", r.lines}});
        out.verdict("criterion " + std::to_string(r.id), r.pass, r.title);
        out.timings["criterion " + std::to_string(r.id)] = r.seconds;
    }
    out.results["criteria"] = arr;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char ch : s) r += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return r + "\"";
}

// CSV keeps the same content as JSON: flattened path,value rows.
void emit_csv(const ordered_json& j, const std::string& path, std::ostream& os) {
    if (j.is_object()) {
        for (auto& [k, v] : j.items()) emit_csv(v, path.empty() ? k : path + "." + k, os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) emit_csv(j[i], path + "[" + std::to_string(i) + "]", os);
    } else {
        os << csv_field(path) << ',' << csv_field(j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    if (const char* env = std::getenv("COXDL_CACHE")) cfg.cache_dir = env;

    CLI::App app{"Higher Deligne-Lusztig characters for inner forms of GL_n at small parameters"};
    app.set_help_flag("--help", "print usage");   // -h would collide with --h
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--q", cfg.q, "residue field size")->check(CLI::PositiveNumber);
    app.add_option("--n", cfg.n, "rank")->check(CLI::PositiveNumber);
    app.add_option("--kappa", cfg.kappa, "Hasse invariant numerator");
    app.add_option("--h", cfg.h, "truncation depth")->check(CLI::PositiveNumber);
    app.add_option("--ext", cfg.ext, "count points over F_{q^ext}");
    app.add_option("--theta", cfg.thetas, "character g0:e0,g1:e1,...; repeatable");
    app.add_option("--i0", cfg.i0, "parabolic block size");
    app.add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
    app.add_option("--cache-dir", cfg.cache_dir, "persistent S-count cache (default $COXDL_CACHE)");
    app.add_option("--seed", cfg.seed);
    app.add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--profile", cfg.profile)->check(CLI::IsMember({"quick", "full"}));
    app.add_flag("--gp", cfg.gp_only, "only characters in general position");
    app.add_flag("--table", cfg.table, "with count --ext, also print the S-count table");
    app.add_option("--m", cfg.m);
    app.add_option("--r", cfg.r);
    app.add_option("--s", cfg.s);
    app.add_option("--a", cfg.a);
    app.add_option("--b", cfg.b);
    app.add_option("--c", cfg.c);
    app.add_option("--d", cfg.d);
    app.add_option("--m-max", cfg.m_max);
    app.add_option("--samples", cfg.samples, "random samples (0: exhaustive)");
    app.add_option("--trials", cfg.trials);
    app.add_option("--n-max", cfg.n_max);
    app.add_option("--M", cfg.M, "field degrees for minor/quotient checks");

    std::map<std::string, void (*)(const Config&, Output&)> handlers = {
        {"count", run_count}, {"chartab", run_chartab}, {"mackey", run_mackey}, {"verify", run_verify},
        {"howe", run_howe},   {"param", run_param},     {"degree", run_degree}, {"accept", run_accept}};
    const std::map<std::string, std::string> help = {
        {"count", "point counts of X_h and the S-count table"},
        {"chartab", "characters R_theta extracted from the S-table"},
        {"mackey", "inner-product matrix of R_theta"},
        {"verify", "run one lemma check"},
        {"howe", "Howe factorization, r_theta and degree formula"},
        {"param", "induced Weil-side parameters sigma_theta"},
        {"degree", "degree and formal degree checks"},
        {"accept", "full acceptance matrix"}};
    for (auto& [name, _] : handlers) {
        auto* sub = app.add_subcommand(name, help.at(name));
        if (name == "verify")
            sub->add_option("lemma", cfg.lemma, "norm-image | rh-fibers | curve-reduction | minor-identity | "
                                                "quotient-fibers | turnbull | sigma-w")
                ->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    Output out;
    try {
        handlers.at(cfg.command)(cfg, out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n' << app.help();
        return 2;
    } catch (const capacity_error& e) {
        std::cerr << "capacity exceeded in " << cfg.command << ": " << e.what() << '\n';
        return 3;
    } catch (const unsupported_model& e) {
        std::cerr << "unsupported in " << cfg.command << ": " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad argument: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "bad argument: " << e.what() << '\n';
        return 2;
    }

    ordered_json doc = {{"config", cfg.json()}, {"results", out.results}, {"verdicts", out.verdicts},
                        {"timings", out.timings}, {"cache_stats", out.cache}};
    if (cfg.format == "csv") {
        std::cout << "path,value\n";
        emit_csv(doc, "", std::cout);
    } else {
        std::cout << doc.dump(2) << '\n';
    }
    return out.all_pass ? 0 : 1;
}
