// Command line driver: builds trigonometric polynomial spaces and runs the
// discretization, entropy, sandwich, and concentration experiments with
// deterministic JSON (and optional CSV) reports.
//
// Exit codes: 0 = run passed, 1 = run finished but targets failed,
// 2 = configuration or input error.

#include "CLI11.hpp"

#include <samdisc/samdisc.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using samdisc::json;

// Thrown for any bad configuration discovered after parsing; mapped to
// exit code 2 in main.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Config file merging.
//
// Config files are flat `key = value` lines (# starts a comment).  Values
// from the file are applied first, then `--set key=value` overrides, then
// explicit command line options; later sources win by simply dropping the
// earlier token when the same key appears again downstream.
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_dashes(const std::string& key) {
    std::size_t b = 0;
    while (b < key.size() && key[b] == '-') ++b;
    return key.substr(b);
}

std::pair<std::string, std::string> split_key_value(const std::string& text, const std::string& where) {
    auto eq = text.find('=');
    if (eq == std::string::npos)
        throw config_error(where + ": expected key=value, got '" + text + "'");
    std::string key = strip_dashes(trim(text.substr(0, eq)));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw config_error(where + ": empty key in '" + text + "'");
    return {key, value};
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        pairs.push_back(split_key_value(line, path + ":" + std::to_string(lineno)));
    }
    return pairs;
}

// Option keys explicitly present in a token stream ("--key", "--key=v").
std::set<std::string> keys_in_tokens(const std::vector<std::string>& tokens) {
    std::set<std::string> keys;
    for (const auto& t : tokens) {
        if (t.size() < 3 || t[0] != '-' || t[1] != '-') continue;
        std::string body = t.substr(2);
        auto eq = body.find('=');
        if (eq != std::string::npos) body.erase(eq);
        if (!body.empty()) keys.insert(body);
    }
    return keys;
}

// Pulls --config/--set out of the raw arguments, resolves precedence, and
// returns the final token list: [subcommand] config set user.
std::vector<std::string> merge_arguments(const std::vector<std::string>& raw) {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> set_pairs;
    std::vector<std::string> user;
    std::string sub;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string& t = raw[i];
        auto take_value = [&](const char* name) -> std::string {
            if (i + 1 >= raw.size()) throw config_error(std::string(name) + " needs a value");
            return raw[++i];
        };
        if (t == "--config") {
            config_path = take_value("--config");
        } else if (t.rfind("--config=", 0) == 0) {
            config_path = t.substr(9);
        } else if (t == "--set") {
            set_pairs.push_back(split_key_value(take_value("--set"), "--set"));
        } else if (t.rfind("--set=", 0) == 0) {
            set_pairs.push_back(split_key_value(t.substr(6), "--set"));
        } else if (sub.empty() && !t.empty() && t[0] != '-') {
            sub = t;
        } else {
            user.push_back(t);
        }
    }

    std::vector<std::pair<std::string, std::string>> config_pairs;
    if (!config_path.empty()) config_pairs = read_config_file(config_path);

    std::set<std::string> user_keys = keys_in_tokens(user);
    std::set<std::string> set_keys;
    for (const auto& kv : set_pairs) set_keys.insert(kv.first);

    std::vector<std::string> merged;
    if (!sub.empty()) merged.push_back(sub);
    for (const auto& kv : config_pairs)
        if (!user_keys.count(kv.first) && !set_keys.count(kv.first))
            merged.push_back("--" + kv.first + "=" + kv.second);
    for (const auto& kv : set_pairs)
        if (!user_keys.count(kv.first))
            merged.push_back("--" + kv.first + "=" + kv.second);
    for (const auto& t : user) merged.push_back(t);
    return merged;
}

// ---------------------------------------------------------------------------
// Shared option bundles.
// ---------------------------------------------------------------------------

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out;
    int threads = 1;
    int grid_m = 0;      // base grid points per axis (0 = command default)
    int grid_refine = 0; // doubles the grid this many times
    CLI::Option* seed_opt = nullptr;
};

void add_global_options(CLI::App* cmd, GlobalOpts& g) {
    g.seed_opt = cmd->add_option("--seed", g.seed, "random seed (required for randomized runs)")->take_last();
    cmd->add_option("--out", g.out, "write the JSON report here instead of stdout")->take_last();
    cmd->add_option("--threads", g.threads, "worker threads (0 = hardware)")->take_last();
    cmd->add_option("--grid-m", g.grid_m, "grid points per axis override")->take_last()->check(CLI::NonNegativeNumber);
    cmd->add_option("--grid-refine", g.grid_refine, "double the grid this many times")->take_last()
        ->check(CLI::NonNegativeNumber);
}

void require_seed(const GlobalOpts& g, const std::string& why) {
    if (g.seed_opt == nullptr || g.seed_opt->count() == 0)
        throw config_error("--seed is required: " + why);
}

int grid_points_for(const GlobalOpts& g, int fallback) {
    long long m = g.grid_m > 0 ? g.grid_m : fallback;
    for (int r = 0; r < g.grid_refine; ++r) m *= 2;
    if (m > (1 << 26)) throw config_error("grid is too large after refinement");
    return static_cast<int>(m);
}

struct SpaceOpts {
    int dim = 1;
    int box = -1;
    int cross = -1;
    std::string freq_file;
};

void add_space_options(CLI::App* cmd, SpaceOpts& s) {
    cmd->add_option("--dim", s.dim, "torus dimension d")->take_last()->check(CLI::PositiveNumber);
    cmd->add_option("--box", s.box, "frequency box [-n, n]^d")->take_last()->check(CLI::NonNegativeNumber);
    cmd->add_option("--cross", s.cross, "hyperbolic cross level n")->take_last()->check(CLI::NonNegativeNumber);
    cmd->add_option("--freq-file", s.freq_file, "explicit frequency set file")->take_last();
}

samdisc::FreqSetPtr build_space(const SpaceOpts& s) {
    int given = (s.box >= 0 ? 1 : 0) + (s.cross >= 0 ? 1 : 0) + (s.freq_file.empty() ? 0 : 1);
    if (given != 1)
        throw config_error("give exactly one of --box, --cross, --freq-file");
    if (s.box >= 0) return samdisc::share(samdisc::frequency_box(s.dim, s.box));
    if (s.cross >= 0) return samdisc::share(samdisc::hyperbolic_cross(s.dim, s.cross));
    samdisc::FrequencySet fs = samdisc::FrequencySet::load(s.freq_file);
    if (fs.dim() != s.dim && s.dim != 1)
        throw config_error("--dim disagrees with the frequency file dimension");
    return samdisc::share(std::move(fs));
}

// ---------------------------------------------------------------------------
// Report output.
// ---------------------------------------------------------------------------

void emit_report(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw config_error("cannot open output file '" + out + "'");
    f << j.dump(2) << "\n";
    if (!f) throw config_error("write failed for '" + out + "'");
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw config_error("cannot open CSV file '" + path + "'");
    f << std::setprecision(17);
    return f;
}

json base_report(const std::string& command, const std::string& paper_ref) {
    json j;
    j["command"] = command;
    j["paper_ref"] = paper_ref;
    return j;
}

double parse_or_inf(const std::string& text, const char* what) {
    std::string t = trim(text);
    if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw config_error(std::string(what) + ": cannot parse '" + text + "'");
    }
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

struct CertifyOpts {
    SpaceOpts space;
    GlobalOpts global;
    double q = 2.0;
    int m = 0;
    bool equispaced = false;
    std::string points_file;
    std::string target_lower = "0.5";
    std::string target_upper = "1.5";
    samdisc::BracketParams params;
};

int run_certify(const CertifyOpts& o) {
    samdisc::FreqSetPtr basis = build_space(o.space);
    double tl = parse_or_inf(o.target_lower, "--target-lower");
    double tu = parse_or_inf(o.target_upper, "--target-upper");
    if (o.q < 1.0) throw config_error("--q must be >= 1");

    samdisc::PointSet xi(basis->dim(), {});
    if (!o.points_file.empty()) {
        xi = samdisc::PointSet::load(o.points_file);
        if (xi.dim() != basis->dim()) throw config_error("points file dimension does not match the space");
    } else if (o.equispaced) {
        if (basis->dim() != 1) throw config_error("--equispaced needs a one-dimensional space");
        int m = o.m > 0 ? o.m : samdisc::Grid::required_points(basis->kmax(), o.q);
        xi = samdisc::PointSet::equispaced(m);
    } else {
        if (o.m <= 0) throw config_error("give --m (with --seed), --equispaced, or --points-file");
        require_seed(o.global, "random nodes are drawn");
        samdisc::Rng rng(samdisc::Rng::mix(o.global.seed, 0));
        xi = samdisc::PointSet::sample_uniform(basis->dim(), o.m, rng);
    }
    if (o.q != 2.0) require_seed(o.global, "the general-q bracket is randomized");

    samdisc::DiscretizationReport rep =
        o.q == 2.0 ? samdisc::certify_q2(*basis, xi, tl, tu)
                   : samdisc::bracket_general_q(basis, o.q, xi, samdisc::Rng::mix(o.global.seed, 1), o.params, tl, tu);

    json j = base_report("certify", o.q == 2.0 ? "q2-gram-eigenvalue-certification"
                                               : "general-q-random-adversarial-bracket");
    j["nodes"] = xi.provenance().empty() ? "points" : xi.provenance();
    j.update(rep.to_json());
    j["seed"] = o.global.seed;
    emit_report(j, o.global.out);
    return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

struct SearchOpts {
    SpaceOpts space;
    GlobalOpts global;
    double q = 2.0;
    int m = 0;
    std::string target_lower = "0.5";
    std::string target_upper = "1.5";
    int restarts = 10;
    std::string points_out;
    samdisc::BracketParams params;
};

int run_search(const SearchOpts& o) {
    samdisc::FreqSetPtr basis = build_space(o.space);
    if (o.q < 1.0) throw config_error("--q must be >= 1");
    if (o.m <= 0) throw config_error("--m must be positive");
    require_seed(o.global, "node sets are drawn at random");
    double tl = parse_or_inf(o.target_lower, "--target-lower");
    double tu = parse_or_inf(o.target_upper, "--target-upper");

    samdisc::PointSet found(basis->dim(), {});
    samdisc::DiscretizationReport rep =
        samdisc::search_pointset(basis, o.q, o.m, tl, tu, o.restarts, o.global.seed, &found, o.params);

    if (!o.points_out.empty() && found.size() > 0) found.save(o.points_out);

    json j = base_report("search", "random-node-discretization-search");
    j["restarts"] = o.restarts;
    j["points_out"] = o.points_out;
    j.update(rep.to_json());
    j["seed"] = o.global.seed;
    emit_report(j, o.global.out);
    return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

struct ScalingOpts {
    GlobalOpts global;
    int dim = 2;
    std::vector<int> levels;
    std::string target_lower = "0.5";
    std::string target_upper = "1.5";
    int restarts = 10;
    std::string csv;
};

int run_scaling(const ScalingOpts& o) {
    if (o.levels.empty()) throw config_error("--levels must list at least one cross level");
    for (int n : o.levels)
        if (n < 0) throw config_error("--levels entries must be >= 0");
    require_seed(o.global, "node sets are drawn at random");
    double tl = parse_or_inf(o.target_lower, "--target-lower");
    double tu = parse_or_inf(o.target_upper, "--target-upper");

    std::vector<samdisc::ScalingRow> rows =
        samdisc::scaling_study(o.dim, o.levels, tl, tu, o.restarts, o.global.seed);

    bool all_found = true;
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back(r.to_json());
        all_found = all_found && r.found;
    }
    json j = base_report("scaling", "cross-sample-count-scaling-study");
    j["dim"] = o.dim;
    j["target_lower"] = tl;
    j["target_upper"] = std::isfinite(tu) ? json(tu) : json("inf");
    j["restarts"] = o.restarts;
    j["seed"] = o.global.seed;
    j["rows"] = arr;
    emit_report(j, o.global.out);

    if (!o.csv.empty()) {
        std::ofstream f = open_csv(o.csv);
        f << "level,n_dim,m_found,found,lower,upper,budget_n3,budget_n35\n";
        for (const auto& r : rows)
            f << r.level << ',' << r.n_dim << ',' << r.m_found << ',' << (r.found ? 1 : 0) << ','
              << r.lower << ',' << r.upper << ',' << r.budget_n3 << ',' << r.budget_n35 << '\n';
    }
    return all_found ? 0 : 1;
}

// ---------------------------------------------------------------------------
// entropy
// ---------------------------------------------------------------------------

struct EntropyOpts {
    SpaceOpts space;
    GlobalOpts global;
    double q = 2.0;
    double radius = 1.0;
    int kmax = 8;
    int surrogate = 4000;
    int mesh = 0;
    bool real_coeffs = false;
    int probes = 64;
    std::string csv;
    std::string dump_net_path;
    double dump_net_eps = 0.0;
};

int run_entropy(const EntropyOpts& o) {
    samdisc::FreqSetPtr basis = build_space(o.space);
    if (o.q < 1.0) throw config_error("--q must be >= 1");
    if (o.radius <= 0.0) throw config_error("--radius must be positive");
    if (o.kmax < 1) throw config_error("--kmax must be >= 1");
    if (o.dump_net_path.empty() != (o.dump_net_eps <= 0.0))
        throw config_error("--dump-net and --dump-net-eps go together");

    samdisc::Grid grid(basis->dim(),
                       grid_points_for(o.global, samdisc::Grid::required_points(basis->kmax(), o.q)));

    std::shared_ptr<samdisc::BallSurrogate> ball;
    if (o.mesh > 0) {
        ball = std::make_shared<samdisc::BallSurrogate>(
            samdisc::make_mesh_surrogate(basis, o.q, o.radius, grid, o.mesh, o.real_coeffs));
    } else {
        require_seed(o.global, "cloud surrogates are sampled at random");
        ball = std::make_shared<samdisc::BallSurrogate>(
            samdisc::make_cloud_surrogate(basis, o.q, o.radius, grid, o.surrogate,
                                          samdisc::Rng::mix(o.global.seed, 0), o.real_coeffs, o.probes));
    }
    samdisc::NetBuilder builder(*ball, o.global.threads);

    std::vector<samdisc::EntropyBracket> brackets;
    for (int k = 1; k <= o.kmax; ++k) brackets.push_back(builder.bracket(k));
    double fitted_b = samdisc::fit_envelope_constant(brackets, basis->size(), o.q);

    json rows = json::array();
    for (const auto& b : brackets) {
        json r = b.to_json();
        r["formula_bound"] = samdisc::entropy_formula(b.upper, basis->size(), fitted_b, o.q);
        r["tail_radius"] = samdisc::entropy_tail(b.k, basis->size(), fitted_b);
        rows.push_back(r);
    }

    json j = base_report("entropy", "unit-ball-covering-entropy-brackets");
    j["q"] = o.q;
    j["dim"] = basis->dim();
    j["n_dim"] = basis->size();
    j["radius"] = o.radius;
    j["mode"] = ball->mode;
    j["surrogate_size"] = ball->count();
    j["resolution"] = ball->resolution;
    j["resolution_proven"] = ball->resolution_proven;
    if (o.mesh == 0) j["seed"] = o.global.seed;
    j["kmax"] = o.kmax;
    j["fitted_b"] = fitted_b;
    j["brackets"] = rows;
    emit_report(j, o.global.out);

    if (!o.csv.empty()) {
        std::ofstream f = open_csv(o.csv);
        f << "k,lower,upper,upper_surrogate,net_size,resolution_limited,formula_bound,tail_radius\n";
        for (const auto& r : rows)
            f << r["k"].get<long long>() << ',' << r["lower"].get<double>() << ','
              << r["upper"].get<double>() << ',' << r["upper_surrogate"].get<double>() << ','
              << r["net_size"].get<long long>() << ',' << (r["resolution_limited"].get<bool>() ? 1 : 0) << ','
              << r["formula_bound"].get<double>() << ',' << r["tail_radius"].get<double>() << '\n';
    }

    if (!o.dump_net_path.empty()) {
        samdisc::Net net = builder.net(o.dump_net_eps, /*allow_coarse=*/true);
        samdisc::dump_net(*ball, net, o.dump_net_path);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sandwich
// ---------------------------------------------------------------------------

struct SandwichOpts {
    SpaceOpts space;
    GlobalOpts global;
    double q = 2.0;
    double a = 0.0;      // 0 = pick automatically
    int j0 = std::numeric_limits<int>::min();
    double delta = 0.125;
    double radius = 1.0;
    int draws = 200;
    int surrogate = 8000;
    int probes = 64;
    int m = 0;           // 0 = min(m*, m_cap)
    long long m_cap = 20000;
    int xi_sets = 1;
    bool strict = false;
    std::string dump_decomposition;
    std::string dump_ladder;
};

int run_sandwich(const SandwichOpts& o) {
    samdisc::FreqSetPtr basis = build_space(o.space);
    if (o.q < 1.0) throw config_error("--q must be >= 1");
    if (o.draws < 1) throw config_error("--draws must be >= 1");
    if (o.xi_sets < 1) throw config_error("--xi-sets must be >= 1");
    if (o.radius < 1.0) throw config_error("--radius must be >= 1");
    require_seed(o.global, "surrogate, draws, and sample nodes are random");

    samdisc::Grid grid(basis->dim(), grid_points_for(o.global, 64));

    double a = o.a;
    int j0 = o.j0;
    if (a == 0.0 || j0 == std::numeric_limits<int>::min()) {
        samdisc::ChosenParameters cp = samdisc::choose_parameters(o.q);
        if (a == 0.0) a = cp.a;
        if (j0 == std::numeric_limits<int>::min()) j0 = cp.j0;
    }

    // Draw the test polynomials first so they can ride along as surrogate
    // members; the nets then cover them exactly.
    samdisc::Rng draw_rng(samdisc::Rng::mix(o.global.seed, 1));
    std::vector<samdisc::TrigPoly> fs;
    fs.reserve(static_cast<std::size_t>(o.draws));
    for (int i = 0; i < o.draws; ++i)
        fs.push_back(samdisc::random_unit(basis, o.q, draw_rng, &grid, 0.5));

    auto ball = std::make_shared<samdisc::BallSurrogate>(
        samdisc::make_cloud_surrogate(basis, o.q, o.radius, grid, o.surrogate,
                                      samdisc::Rng::mix(o.global.seed, 0), false, o.probes));
    ball->append_extras(fs);
    auto builder = std::make_shared<samdisc::NetBuilder>(*ball, o.global.threads);
    samdisc::NetLadder ladder = samdisc::build_ladder(ball, builder, a, j0, o.radius, /*saturate=*/!o.strict);

    samdisc::LadderBudget budget = samdisc::ladder_budget(ladder);
    long long m_used = o.m > 0 ? o.m : std::min<long long>(budget.m_star, o.m_cap);

    long long sandwich_violations = 0;
    long long decompositions = 0;
    double max_identity_gap = 0.0;
    long long premise_holds = 0;
    long long conclusion_holds = 0;
    long long conclusion_failures = 0;
    long long bl1_runs = 0;

    std::vector<samdisc::PointSet> xis;
    for (int x = 0; x < o.xi_sets; ++x) {
        samdisc::Rng rng(samdisc::Rng::mix(o.global.seed, 100 + static_cast<std::uint64_t>(x)));
        xis.push_back(samdisc::PointSet::sample_uniform(basis->dim(), static_cast<int>(m_used), rng));
    }

    for (int i = 0; i < o.draws; ++i) {
        samdisc::SandwichDecomposition dec = samdisc::decompose(fs[static_cast<std::size_t>(i)], ladder);
        samdisc::SandwichCheck chk = samdisc::check_sandwich(fs[static_cast<std::size_t>(i)], dec, ladder);
        ++decompositions;
        if (!chk.clean()) ++sandwich_violations;
        for (const auto& xi : xis) {
            samdisc::Bl1Report rep =
                samdisc::bl1_end_to_end(fs[static_cast<std::size_t>(i)], dec, ladder, xi, o.delta);
            ++bl1_runs;
            max_identity_gap = std::max(max_identity_gap,
                                        std::max(rep.identity_gap_true, rep.identity_gap_sampled));
            if (rep.premise_holds) {
                ++premise_holds;
                if (rep.conclusion_holds) ++conclusion_holds;
                else ++conclusion_failures;
            }
        }
        if (i == 0 && !o.dump_decomposition.empty())
            samdisc::dump_decomposition_csv(fs[0], dec, ladder, o.dump_decomposition);
    }

    bool pass = sandwich_violations == 0 && conclusion_failures == 0;

    json j = base_report("sandwich", "level-set-sandwich-decomposition");
    j["q"] = o.q;
    j["dim"] = basis->dim();
    j["n_dim"] = basis->size();
    j["a"] = a;
    j["j0"] = j0;
    j["J"] = ladder.J;
    j["delta"] = o.delta;
    j["m_star"] = budget.m_star;
    j["m_used"] = m_used;
    j["xi_sets"] = o.xi_sets;
    j["draws"] = o.draws;
    j["decompositions"] = decompositions;
    j["sandwich_violations"] = sandwich_violations;
    j["bl1_runs"] = bl1_runs;
    j["premise_holds"] = premise_holds;
    j["conclusion_holds"] = conclusion_holds;
    j["conclusion_failures"] = conclusion_failures;
    j["max_identity_gap"] = max_identity_gap;
    j["seed"] = o.global.seed;
    j["pass"] = pass;
    j["ladder"] = ladder.to_json();
    emit_report(j, o.global.out);

    if (!o.dump_ladder.empty()) {
        json lj = ladder.to_json();
        lj["budget"] = budget.to_json();
        emit_report(lj, o.dump_ladder);
    }
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// concentration
// ---------------------------------------------------------------------------

struct ConcentrationOpts {
    GlobalOpts global;
    std::string family = "both";
    std::vector<long long> m_list{100, 1000, 10000};
    std::vector<double> eta_list{0.125, 0.25, 0.5};
    double sup_bound = 1.0;
    long long trials = 100000;
    std::string csv;
};

int run_concentration(const ConcentrationOpts& o) {
    require_seed(o.global, "tail probabilities are estimated by Monte Carlo");
    if (o.trials < 1) throw config_error("--trials must be >= 1");

    std::vector<samdisc::TailFamily> fams;
    if (o.family == "both")
        fams = {samdisc::TailFamily::two_point, samdisc::TailFamily::uniform};
    else if (o.family == "two_point")
        fams = {samdisc::TailFamily::two_point};
    else if (o.family == "uniform")
        fams = {samdisc::TailFamily::uniform};
    else
        throw config_error("--family must be both, two_point, or uniform");

    json rows = json::array();
    bool all_pass = true;
    std::uint64_t row_index = 0;
    for (samdisc::TailFamily fam : fams) {
        for (long long m : o.m_list) {
            for (double eta : o.eta_list) {
                double empirical = samdisc::mc_tail(fam, o.sup_bound, m, eta, o.trials,
                                                    samdisc::Rng::mix(o.global.seed, row_index),
                                                    o.global.threads);
                double bound = samdisc::bernstein_tail(m, eta, o.sup_bound);
                double p = std::min(bound, 1.0);
                double slack = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(o.trials)) + 1e-12;
                bool pass = empirical <= p + slack;
                all_pass = all_pass && pass;
                json r;
                r["m"] = m;
                r["eta"] = eta;
                r["sup_bound"] = o.sup_bound;
                r["family"] = samdisc::tail_family_name(fam);
                r["empirical"] = empirical;
                r["bound"] = bound;
                r["pass"] = pass;
                rows.push_back(r);
                ++row_index;
            }
        }
    }

    samdisc::FamilySpec demo = samdisc::FamilySpec::from_cardinality(1, 1.0, 0.125);
    long long demo_m = samdisc::union_bound_m({demo});

    json j = base_report("concentration", "bernstein-tail-union-budget");
    j["trials"] = o.trials;
    j["seed"] = o.global.seed;
    j["rows"] = rows;
    json uj;
    uj["cardinality"] = 1;
    uj["sup_bound"] = 1.0;
    uj["eta"] = 0.125;
    uj["m_star"] = demo_m;
    j["union_demo"] = uj;
    j["pass"] = all_pass;
    emit_report(j, o.global.out);

    if (!o.csv.empty()) {
        std::ofstream f = open_csv(o.csv);
        f << "m,eta,M,family,empirical,bound,pass\n";
        for (const auto& r : rows)
            f << r["m"].get<long long>() << ',' << r["eta"].get<double>() << ','
              << r["sup_bound"].get<double>() << ',' << r["family"].get<std::string>() << ','
              << r["empirical"].get<double>() << ',' << r["bound"].get<double>() << ','
              << (r["pass"].get<bool>() ? 1 : 0) << '\n';
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> raw(argv + 1, argv + argc);

    CLI::App app{"sampling discretization toolkit"};
    app.require_subcommand(0, 1);

    CertifyOpts co;
    CLI::App* certify = app.add_subcommand("certify", "two-sided discretization constants for a fixed node set");
    add_space_options(certify, co.space);
    add_global_options(certify, co.global);
    certify->add_option("--q", co.q, "Lq exponent")->take_last();
    certify->add_option("--m", co.m, "node count")->take_last();
    certify->add_flag("--equispaced", co.equispaced, "equispaced nodes (d = 1)");
    certify->add_option("--points-file", co.points_file, "load nodes from a file")->take_last();
    certify->add_option("--target-lower", co.target_lower, "required lower constant")->take_last();
    certify->add_option("--target-upper", co.target_upper, "required upper constant (inf allowed)")->take_last();
    certify->add_option("--trials", co.params.trials, "random probes (q != 2)")->take_last();
    certify->add_option("--starts", co.params.starts, "adversarial restarts (q != 2)")->take_last();
    certify->add_option("--steps", co.params.steps, "ascent steps per restart (q != 2)")->take_last();

    SearchOpts so;
    CLI::App* search = app.add_subcommand("search", "look for a node set meeting target constants");
    add_space_options(search, so.space);
    add_global_options(search, so.global);
    search->add_option("--q", so.q, "Lq exponent")->take_last();
    search->add_option("--m", so.m, "node count")->take_last();
    search->add_option("--target-lower", so.target_lower, "required lower constant")->take_last();
    search->add_option("--target-upper", so.target_upper, "required upper constant (inf allowed)")->take_last();
    search->add_option("--restarts", so.restarts, "random node sets to try")->take_last();
    search->add_option("--points-out", so.points_out, "save the best node set here")->take_last();
    search->add_option("--trials", so.params.trials, "random probes (q != 2)")->take_last();
    search->add_option("--starts", so.params.starts, "adversarial restarts (q != 2)")->take_last();
    search->add_option("--steps", so.params.steps, "ascent steps per restart (q != 2)")->take_last();

    ScalingOpts sc;
    CLI::App* scaling = app.add_subcommand("scaling", "smallest certifying m across hyperbolic cross levels");
    add_global_options(scaling, sc.global);
    scaling->add_option("--dim", sc.dim, "torus dimension d")->take_last()->check(CLI::PositiveNumber);
    scaling->add_option("--levels", sc.levels, "cross levels, comma separated")->delimiter(',');
    scaling->add_option("--target-lower", sc.target_lower, "required lower constant")->take_last();
    scaling->add_option("--target-upper", sc.target_upper, "required upper constant (inf allowed)")->take_last();
    scaling->add_option("--restarts", sc.restarts, "node sets per sample count")->take_last();
    scaling->add_option("--csv", sc.csv, "write the table as CSV here")->take_last();

    EntropyOpts eo;
    CLI::App* entropy = app.add_subcommand("entropy", "covering/packing brackets for the unit ball");
    add_space_options(entropy, eo.space);
    add_global_options(entropy, eo.global);
    entropy->add_option("--q", eo.q, "Lq exponent of the ball")->take_last();
    entropy->add_option("--radius", eo.radius, "ball radius B")->take_last();
    entropy->add_option("--kmax", eo.kmax, "bracket 2^k centers for k = 1..kmax")->take_last();
    entropy->add_option("--surrogate", eo.surrogate, "cloud surrogate member count")->take_last();
    entropy->add_option("--mesh", eo.mesh, "mesh surrogate points per axis (selects mesh mode)")->take_last();
    entropy->add_flag("--real-coeffs", eo.real_coeffs, "restrict to real coefficients");
    entropy->add_option("--probes", eo.probes, "resolution probes per cloud member")->take_last();
    entropy->add_option("--csv", eo.csv, "write brackets as CSV here")->take_last();
    entropy->add_option("--dump-net", eo.dump_net_path, "dump a net to this file")->take_last();
    entropy->add_option("--dump-net-eps", eo.dump_net_eps, "net radius for --dump-net")->take_last();

    SandwichOpts sw;
    CLI::App* sandwich = app.add_subcommand("sandwich", "piecewise-constant sandwich decomposition checks");
    add_space_options(sandwich, sw.space);
    add_global_options(sandwich, sw.global);
    sandwich->add_option("--q", sw.q, "Lq exponent")->take_last();
    sandwich->add_option("--a", sw.a, "ladder ratio a (0 = automatic)")->take_last();
    sandwich->add_option("--j0", sw.j0, "ladder floor level (default automatic)")->take_last();
    sandwich->add_option("--delta", sw.delta, "sampling accuracy for the norm-transfer check")->take_last();
    sandwich->add_option("--radius", sw.radius, "ball radius B")->take_last();
    sandwich->add_option("--draws", sw.draws, "random polynomials to decompose")->take_last();
    sandwich->add_option("--surrogate", sw.surrogate, "cloud surrogate member count")->take_last();
    sandwich->add_option("--probes", sw.probes, "resolution probes per cloud member")->take_last();
    sandwich->add_option("--m", sw.m, "sample nodes for the norm-transfer check (0 = min(m*, cap))")->take_last();
    sandwich->add_option("--m-cap", sw.m_cap, "cap on automatic m")->take_last();
    sandwich->add_option("--xi-sets", sw.xi_sets, "independent node sets")->take_last();
    sandwich->add_flag("--strict", sw.strict, "refuse ladders finer than the surrogate resolution");
    sandwich->add_option("--dump-decomposition", sw.dump_decomposition, "CSV dump of the first draw")->take_last();
    sandwich->add_option("--dump-ladder", sw.dump_ladder, "JSON dump of the ladder and its budget")->take_last();

    ConcentrationOpts cn;
    CLI::App* concentration = app.add_subcommand("concentration", "Bernstein tails against Monte Carlo");
    add_global_options(concentration, cn.global);
    concentration->add_option("--family", cn.family, "both, two_point, or uniform")->take_last();
    concentration->add_option("--m-list", cn.m_list, "sample counts, comma separated")->delimiter(',');
    concentration->add_option("--eta-list", cn.eta_list, "accuracies, comma separated")->delimiter(',');
    concentration->add_option("--sup-bound", cn.sup_bound, "sup bound M of the family")->take_last();
    concentration->add_option("--trials", cn.trials, "Monte Carlo trials per row")->take_last();
    concentration->add_option("--csv", cn.csv, "write rows as CSV here")->take_last();

    try {
        std::vector<std::string> merged = merge_arguments(raw);
        std::vector<std::string> argv2{"samdisc"};
        for (auto& t : merged) argv2.push_back(std::move(t));
        std::vector<const char*> ptrs;
        ptrs.reserve(argv2.size());
        for (const auto& s : argv2) ptrs.push_back(s.c_str());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());

        if (certify->parsed()) return run_certify(co);
        if (search->parsed()) return run_search(so);
        if (scaling->parsed()) return run_scaling(sc);
        if (entropy->parsed()) return run_entropy(eo);
        if (sandwich->parsed()) return run_sandwich(sw);
        if (concentration->parsed()) return run_concentration(cn);
        std::cout << app.help();
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
