// streamsel: command-line front end for the interval selection toolkit.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamsel/streamsel.hpp"

using namespace streamsel;
using nlohmann::json;

namespace {

struct Common {
    std::string input = "-";
    std::string out;
    Coord n = 0;
    double eps = 0.25;
    Coord lambda = 0;
    u64 seed = 1;
    double scale = 1.0;
    std::string counter = "exact";
    bool skip_repeats = false;
    bool timing = false;
};

Instance read_instance(const Common& c, bool need_header) {
    Instance inst;
    if (c.input == "-") {
        inst = parse_stream(std::cin);
    } else {
        std::ifstream in(c.input);
        if (!in) throw InputError("cannot open " + c.input);
        inst = parse_stream(in);
    }
    if (c.n > 0) {
        if (inst.n_declared && inst.n != c.n) throw InputError("--n disagrees with the stream header");
        inst.n = c.n;
        inst.n_declared = true;
        inst.validate();
    }
    if (need_header && !inst.n_declared) throw InputError("estimators need an `n` header or --n");
    return inst;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::set<int> parse_set(const std::string& text) {
    std::set<int> s;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        s.insert(std::stoi(tok));
    }
    return s;
}

void add_common(CLI::App* app, Common& c, bool estimator_flags) {
    app->add_option("input", c.input, "stream file, or - for standard input");
    app->add_option("--out", c.out, "write the report here instead of standard output");
    app->add_option("--n", c.n, "universe bound (overrides a missing header)");
    app->add_option("--lambda", c.lambda, "common interval length (samelen)");
    if (estimator_flags) {
        app->add_option("--eps", c.eps, "accuracy parameter in (0, 1/2)");
        app->add_option("--seed", c.seed, "master seed");
        app->add_option("--scale", c.scale, "sample-count multiplier (general estimator)");
        app->add_option("--counter", c.counter, "distinct counter: exact or kmv");
        app->add_flag("--skip-repeats", c.skip_repeats, "skip hashing of already offered ids (same output)");
        app->add_flag("--timing", c.timing, "include wall time in reports");
    }
}

TrialSpec make_spec(Algorithm a, const Common& c) {
    TrialSpec spec;
    spec.algorithm = a;
    spec.eps = c.eps;
    spec.lambda = c.lambda;
    spec.scale = c.scale;
    spec.counter = parse_counter_kind(c.counter);
    spec.skip_repeats = c.skip_repeats;
    return spec;
}

json solution_json(const std::vector<Interval>& sol) {
    json arr = json::array();
    for (const auto& iv : sol) arr.push_back(format_interval(iv));
    return arr;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming interval selection: selectors, estimators, generators and trials"};
    app.require_subcommand(1);
    int status = 0;

    // gen --------------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate an instance");
    gen->require_subcommand(1);
    std::string gen_out;
    Coord g_n = 1000, g_max_len = 50, g_lambda = 0;
    std::size_t g_count = 100;
    u64 g_seed = 1;
    bool g_mixed = false;
    auto* g_uniform = gen->add_subcommand("uniform", "seeded random intervals");
    g_uniform->add_option("--n", g_n, "universe bound");
    g_uniform->add_option("--count", g_count, "number of intervals");
    g_uniform->add_option("--max-len", g_max_len, "largest interval length");
    g_uniform->add_option("--lambda", g_lambda, "emit intervals of this single length instead");
    g_uniform->add_option("--seed", g_seed, "seed");
    g_uniform->add_flag("--mixed", g_mixed, "random endpoint openness");
    g_uniform->add_option("--out", gen_out, "output path");

    int g_bits = 7, g_index = 1, g_k = 3;
    std::string g_set;
    auto* g_isl = gen->add_subcommand("index-samelen", "same-length INDEX stream");
    auto* g_igen = gen->add_subcommand("index-general", "general INDEX stream");
    for (auto* sub : {g_isl, g_igen}) {
        sub->add_option("--bits", g_bits, "number of bits")->required();
        sub->add_option("--set", g_set, "comma-separated members of S");
        sub->add_option("--index", g_index, "queried index i")->required();
        sub->add_option("--out", gen_out, "output path");
    }
    g_igen->add_option("--k", g_k, "repetitions k");

    // select / estimate / exact / trials ------------------------------------
    Common sel_c, est_c, ex_c, tr_c;
    std::string sel_algo = "general", est_algo = "general", tr_algo = "estimate-samelen";
    bool est_oracle = false;
    std::size_t tr_trials = 10, tr_workers = 1, tr_group = 0;
    double tr_min_success = -1.0;

    auto* sel = app.add_subcommand("select", "run a one-pass selector");
    sel->add_option("--algo", sel_algo, "general or samelen")->check(CLI::IsMember({"general", "samelen"}));
    add_common(sel, sel_c, false);

    auto* est = app.add_subcommand("estimate", "run a one-pass estimator");
    est->add_option("--algo", est_algo, "general or samelen")->check(CLI::IsMember({"general", "samelen"}));
    est->add_flag("--oracle", est_oracle, "replace sampled quantities by exact ones");
    add_common(est, est_c, true);

    auto* ex = app.add_subcommand("exact", "exact optimum of a stream");
    add_common(ex, ex_c, false);

    auto* tr = app.add_subcommand("trials", "repeat an algorithm over consecutive seeds");
    tr->add_option("--algo", tr_algo, "select-general, select-samelen, estimate-general, estimate-general-oracle, "
                                      "estimate-samelen or estimate-samelen-oracle");
    tr->add_option("--trials", tr_trials, "number of trials");
    tr->add_option("--workers", tr_workers, "worker threads");
    tr->add_option("--groups", tr_group, "median-of-groups group size (0: off)");
    tr->add_option("--min-success", tr_min_success,
                   "success fraction required for exit 0 (default 1 for deterministic algorithms, 2/3 otherwise)");
    add_common(tr, tr_c, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            Instance inst;
            if (*g_uniform) {
                inst = g_lambda > 0 ? gen_samelen(g_n, g_count, g_lambda, g_seed, g_mixed)
                                    : (g_mixed ? gen_mixed(g_n, g_count, g_max_len, g_seed)
                                               : gen_uniform(g_n, g_count, g_max_len, g_seed));
            } else if (*g_isl) {
                inst = gen_index_samelen(g_bits, parse_set(g_set), g_index);
            } else {
                inst = gen_index_general(g_bits, parse_set(g_set), g_index, g_k);
            }
            Output out(gen_out);
            out.stream() << format_stream(inst);
        } else if (*sel) {
            const Instance inst = read_instance(sel_c, false);
            const std::size_t a = alpha(inst);
            json j;
            j["type"] = "selection";
            j["algorithm"] = sel_algo;
            std::vector<Interval> sol;
            TrialReport r;
            r.alpha = a;
            if (sel_algo == "general") {
                GeneralSelector s;
                for (const auto& iv : inst.intervals) s.process(iv);
                sol = s.solution();
                r.algorithm = Algorithm::select_general;
                r.peak_memory = s.peak_window_count();
            } else {
                Coord lambda = sel_c.lambda;
                if (lambda == 0 && !inst.empty()) lambda = inst.intervals.front().length();
                r.algorithm = Algorithm::select_samelen;
                r.lambda = lambda;
                if (!inst.empty()) {
                    SameLengthSelector s(lambda);
                    for (const auto& iv : inst.intervals) s.process(iv);
                    sol = s.solution();
                    r.peak_memory = s.peak_windows();
                    j["lambda"] = lambda;
                    j["shift"] = s.best_shift();
                }
            }
            r.output = static_cast<double>(sol.size());
            const bool disjoint = pairwise_disjoint(sol);
            j["size"] = sol.size();
            j["alpha"] = a;
            j["peak_memory"] = r.peak_memory;
            j["disjoint"] = disjoint;
            j["success"] = r.success() && disjoint;
            j["solution"] = solution_json(sol);
            Output out(sel_c.out);
            out.stream() << j.dump() << "\n";
            status = (r.success() && disjoint) ? 0 : 1;
        } else if (*est) {
            const Instance inst = read_instance(est_c, true);
            Algorithm a = est_algo == "general"
                              ? (est_oracle ? Algorithm::estimate_general_oracle : Algorithm::estimate_general)
                              : (est_oracle ? Algorithm::estimate_samelen_oracle : Algorithm::estimate_samelen);
            const auto r = run_one(make_spec(a, est_c), inst, alpha(inst), est_c.seed, est_c.input, est_c.timing);
            Output out(est_c.out);
            out.stream() << to_json(r).dump() << "\n";
            status = r.success() ? 0 : 1;
        } else if (*ex) {
            const Instance inst = read_instance(ex_c, false);
            json j;
            j["type"] = "exact";
            j["n"] = inst.n;
            j["intervals"] = inst.size();
            j["alpha"] = alpha(inst);
            Output out(ex_c.out);
            out.stream() << j.dump() << "\n";
        } else if (*tr) {
            const Algorithm a = parse_algorithm(tr_algo);
            const Instance inst = read_instance(tr_c, is_estimator(a));
            const auto s = run_trials(make_spec(a, tr_c), inst, tr_trials, tr_c.seed, tr_workers, tr_group,
                                      tr_c.input, tr_c.timing);
            Output out(tr_c.out);
            for (const auto& r : s.reports) out.stream() << to_json(r).dump() << "\n";
            out.stream() << to_json(s).dump() << "\n";
            const bool randomized = a == Algorithm::estimate_general || a == Algorithm::estimate_samelen;
            const double need = tr_min_success >= 0 ? tr_min_success : (randomized ? 2.0 / 3.0 : 1.0);
            status = s.success_fraction >= need ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return status;
}
