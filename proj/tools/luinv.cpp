// luinv: command-line front end for local unitary invariant labels,
// evaluation, graphs and verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
// 3 resource guard.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "luinv/closedform.hpp"
#include "luinv/contract.hpp"
#include "luinv/errors.hpp"
#include "luinv/invgraph.hpp"
#include "luinv/perm.hpp"
#include "luinv/state_io.hpp"
#include "luinv/states.hpp"
#include "luinv/verify.hpp"

namespace {

using namespace luinv;
using nlohmann::json;

constexpr int schema_version = 1;

enum Exit : int { ok = 0, verification_failed = 1, usage = 2, resource = 3 };

Kind parse_kind(const std::string& s) {
    if (s == "pure") return Kind::pure;
    if (s == "mixed") return Kind::mixed;
    throw parse_error("kind must be pure or mixed, got '" + s + "'");
}

Dims parse_dims(const std::string& text) {
    std::vector<int> n;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            n.push_back(v);
        } catch (const std::logic_error&) {
            throw parse_error("bad dimension list '" + text + "'");
        }
    }
    if (n.empty()) throw parse_error("empty dimension list");
    for (int v : n)
        if (v < 1) throw parse_error("dimensions must be positive");
    return Dims(std::move(n));
}

/// Grade from an image-list label, or the fallback for named labels.
int infer_grade(const std::string& label, int fallback) {
    const auto open = label.find('[');
    if (open == std::string::npos) return fallback;
    const auto close = label.find(']', open);
    if (close == std::string::npos) throw parse_error("unterminated image list in '" + label + "'");
    int count = 1;
    for (auto i = open; i < close; ++i) count += label[i] == ',';
    return count;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------

struct EnumerateOptions {
    int m = 3;
    std::optional<int> r;
    std::optional<int> k;
    std::string kind = "mixed";
    bool generators_only = false;
    bool count = false;
    std::string format = "table";
    std::string algorithm = "brute";
};

int cmd_enumerate(const EnumerateOptions& o) {
    const Kind kind = parse_kind(o.kind);
    int r = 0;
    if (o.r) {
        r = *o.r;
    } else if (o.k) {
        r = kind == Kind::pure ? *o.k - 1 : *o.k;
    } else {
        throw parse_error("enumerate needs --r or --k");
    }
    if (r < 0) throw parse_error("tuple length must be non-negative");

    std::vector<OrbitLabel> labels;
    if (o.algorithm == "s3") {
        if (o.m != 3) throw parse_error("the s3 algorithm only handles m = 3");
        for (const auto& rep : s3_orbit_representatives(r)) labels.push_back(canonical_form(rep));
        std::sort(labels.begin(), labels.end());
        if (o.generators_only)
            std::erase_if(labels, [](const OrbitLabel& l) { return !is_transitive(l.rep()); });
    } else if (o.algorithm == "brute") {
        labels = o.generators_only ? generator_labels(o.m, r) : enumerate_orbits(o.m, r);
    } else {
        throw parse_error("algorithm must be brute or s3");
    }

    if (o.count) {
        if (o.format == "json")
            std::cout << json{{"schema_version", schema_version}, {"m", o.m}, {"r", r}, {"count", labels.size()}}.dump()
                      << "\n";
        else
            std::cout << labels.size() << "\n";
        return ok;
    }
    if (o.format == "json") {
        json arr = json::array();
        for (const auto& l : labels) {
            json perms = json::array();
            for (const auto& p : l.rep().perms()) perms.push_back(p.images());
            arr.push_back({{"label", to_string(l)}, {"perms", perms}, {"transitive", is_transitive(l.rep())}});
        }
        std::cout << json{{"schema_version", schema_version}, {"m", o.m}, {"r", r}, {"kind", o.kind}, {"labels", arr}}.dump(2)
                  << "\n";
        return ok;
    }
    for (const auto& l : labels) {
        std::string text = to_string(l);
        if (text.empty()) text = "()";
        std::cout << text << "\t" << (is_transitive(l.rep()) ? "transitive" : "factorizable");
        if (o.m == 1) std::cout << "\tgrade-1 norm";
        std::cout << "\n";
    }
    return ok;
}

// ---------------------------------------------------------------------------

int cmd_counts(int max_r) {
    std::cout << std::left << std::setw(4) << "m" << std::setw(4) << "r" << std::setw(12) << "labels"
              << "generators\n";
    for (int m = 1; m <= 3; ++m)
        for (int r = 1; r <= max_r; ++r)
            std::cout << std::setw(4) << m << std::setw(4) << r << std::setw(12) << enumerate_orbits(m, r).size()
                      << generator_labels(m, r).size() << "\n";
    return ok;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
    std::string label;
    std::optional<std::string> kind;
    int m = 3;
    std::string state;
};

int cmd_eval(const EvalOptions& o) {
    const State state = load_state(o.state);
    const bool have_pure = std::holds_alternative<PureState>(state);
    const Kind kind = o.kind ? parse_kind(*o.kind) : (have_pure ? Kind::pure : Kind::mixed);
    const int m = infer_grade(o.label, o.m);
    const PermTuple sigma = parse_tuple(o.label, m);
    const int parties = have_pure ? std::get<PureState>(state).dims.parties() : std::get<DensityMatrix>(state).dims.parties();
    const int expected = kind == Kind::pure ? parties - 1 : parties;
    if (sigma.arity() != expected)
        throw parse_error("label has " + std::to_string(sigma.arity()) + " permutations, a " + kind_name(kind) +
                          " label on " + std::to_string(parties) + " parties needs " + std::to_string(expected));

    cplx contracted;
    std::optional<cplx> closed;
    if (kind == Kind::pure) {
        if (!have_pure) throw parse_error("pure invariants need a pure state file");
        const auto& psi = std::get<PureState>(state);
        contracted = eval_pure_sequential(sigma, psi);
        if (m <= 3) closed = closed_form(sigma, psi);
    } else {
        const DensityMatrix rho = have_pure ? projector(std::get<PureState>(state)) : std::get<DensityMatrix>(state);
        contracted = eval_mixed_sequential(sigma, rho);
        if (m <= 3) closed = closed_form(sigma, rho);
    }
    double difference = 0.0;
    json out{{"schema_version", schema_version},
             {"label", to_string(canonical_form(sigma))},
             {"kind", kind_name(kind)},
             {"m", m},
             {"value", complex_json(contracted)},
             {"contract", complex_json(contracted)}};
    if (closed) {
        difference = std::abs(*closed - contracted) / std::max({1.0, std::abs(*closed), std::abs(contracted)});
        out["closed_form"] = complex_json(*closed);
        out["formula"] = formula_text(kind == Kind::pure ? sigma.with_identity_appended() : sigma,
                                      kind == Kind::pure ? "pi" : "rho");
    } else {
        out["closed_form"] = nullptr;
    }
    out["difference"] = difference;
    std::cout << out.dump(2) << "\n";
    if (difference > 1e-8) {
        std::cerr << "error: closed form and contraction disagree by " << difference << "\n";
        return verification_failed;
    }
    return ok;
}

// ---------------------------------------------------------------------------

struct GraphOptions {
    int m = 3;
    std::optional<int> k;
    std::string label;
    std::string kind = "pure";
    bool decompose = false;
    bool expressible = false;
    bool formula = false;
    std::string format = "dot";
};

int cmd_graph(const GraphOptions& o) {
    const Kind kind = parse_kind(o.kind);
    const int m = infer_grade(o.label, o.m);
    const PermTuple sigma = parse_tuple(o.label, m);
    const int parties = kind == Kind::pure ? sigma.arity() + 1 : sigma.arity();
    if (o.k && *o.k != parties)
        throw parse_error("label has " + std::to_string(sigma.arity()) + " permutations, which does not match --k " +
                          std::to_string(*o.k) + " for a " + kind_name(kind) + " label");
    const PermTuple full = kind == Kind::pure ? sigma.with_identity_appended() : sigma;
    const auto canon = canonical_form(full);
    const InvGraph g = build_graph(canon.rep());
    const std::string symbol = kind == Kind::pure ? "pi" : "rho";

    if (o.decompose) {
        if (kind != Kind::pure) throw parse_error("--decompose applies to pure labels");
        if (m > 3) throw parse_error("--decompose prints formulas and needs m <= 3");
        const auto writings = alternate_writings(sigma, Kind::pure);
        if (o.format == "json") {
            json arr = json::array();
            for (const auto& w : writings)
                arr.push_back({{"class", to_string(w.graph)}, {"formula", w.formula},
                               {"graph", canonical_graph(build_graph(w.graph.rep()))}});
            std::cout << json{{"schema_version", schema_version}, {"label", to_string(sigma)}, {"classes", arr}}.dump(2)
                      << "\n";
        } else {
            for (const auto& w : writings) std::cout << "[" << to_string(w.graph) << "]\t" << w.formula << "\n";
        }
        return ok;
    }
    if (o.expressible) {
        const auto order = expressible_ordering(g);
        if (!order) {
            std::cout << "none\n";
        } else {
            for (std::size_t i = 0; i < order->size(); ++i) std::cout << (i ? " " : "") << (*order)[i];
            std::cout << "\n";
        }
        return ok;
    }
    if (o.formula) {
        if (m > 3) throw parse_error("closed formulas exist only for m <= 3");
        std::cout << formula_text(canon.rep(), symbol) << "\n";
        return ok;
    }
    if (o.format == "json") {
        auto doc = graph_to_json(g);
        doc["schema_version"] = schema_version;
        doc["canonical"] = canonical_graph(g);
        std::cout << doc.dump(2) << "\n";
    } else if (o.format == "dot") {
        std::cout << dot_export(g);
    } else {
        throw parse_error("graph format must be dot or json");
    }
    return ok;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::optional<std::string> dims;
    int samples = 50;
    std::optional<std::string> report;
};

int cmd_verify(const VerifyOptions& o) {
    SuiteOptions opt;
    opt.seed = o.seed;
    opt.samples = o.samples;
    if (o.dims) opt.dims = parse_dims(*o.dims);
    const auto reports = run_suite(o.suite, opt);

    bool all_passed = true;
    std::cout << std::left << std::setw(24) << "check" << std::setw(8) << "result" << std::setw(14) << "residual"
              << std::setw(12) << "tolerance"
              << "parameters\n";
    for (const auto& r : reports) {
        all_passed = all_passed && r.passed;
        char residual[32], tolerance[32];
        std::snprintf(residual, sizeof residual, "%.3e", r.max_residual);
        std::snprintf(tolerance, sizeof tolerance, "%.1e", r.tolerance);
        std::cout << std::setw(24) << r.check << std::setw(8) << (r.passed ? "pass" : "FAIL") << std::setw(14) << residual
                  << std::setw(12) << tolerance << r.parameters.dump() << "\n";
        if (!r.passed) std::cout << "    witness: " << r.witness.dump() << "\n";
        if (r.inconclusive) std::cout << "    inconclusive: " << r.inconclusive << "\n";
    }
    if (o.report) {
        std::ofstream out(*o.report);
        if (!out) throw parse_error("cannot write report to " + *o.report);
        out << json{{"schema_version", schema_version}, {"reports", reports_to_json(reports)}}.dump(2) << "\n";
    }
    return all_passed ? ok : verification_failed;
}

// ---------------------------------------------------------------------------

struct RandomStateOptions {
    std::string dims;
    std::string kind = "pure";
    std::uint64_t seed = 1;
    std::optional<int> rank;
    std::optional<std::string> out;
};

int cmd_random_state(const RandomStateOptions& o) {
    const Dims dims = parse_dims(o.dims);
    const Kind kind = parse_kind(o.kind);
    std::string text;
    if (kind == Kind::pure) {
        text = to_json(random_pure(dims, o.seed));
    } else {
        const int rank = o.rank.value_or(static_cast<int>(dims.total()));
        text = to_json(random_density(dims, o.seed, rank));
    }
    if (o.out) {
        std::ofstream f(*o.out);
        if (!f) throw parse_error("cannot write " + *o.out);
        f << text;
    } else {
        std::cout << text;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local unitary invariant polynomials: labels, evaluation, graphs and checks"};
    app.require_subcommand(1);
    std::size_t max_dim = luinv::max_total_dimension.load();
    app.add_option("--max-dim", max_dim, "Largest total Hilbert-space dimension accepted")->check(CLI::PositiveNumber);

    EnumerateOptions en;
    auto* enumerate = app.add_subcommand("enumerate", "List invariant labels (simultaneous-conjugation orbits)");
    enumerate->add_option("--m", en.m, "Grade")->check(CLI::PositiveNumber);
    enumerate->add_option("--r", en.r, "Number of permutations per label");
    enumerate->add_option("--k", en.k, "Number of parties (labels have k-1 entries for pure, k for mixed)");
    enumerate->add_option("--kind", en.kind, "pure or mixed")->check(CLI::IsMember({"pure", "mixed"}));
    enumerate->add_flag("--generators-only", en.generators_only, "Only transitive labels");
    enumerate->add_flag("--count", en.count, "Print the number of labels only");
    enumerate->add_option("--format", en.format, "table or json")->check(CLI::IsMember({"table", "json"}));
    enumerate->add_option("--algorithm", en.algorithm, "brute or s3")->check(CLI::IsMember({"brute", "s3"}));

    int counts_r = 5;
    auto* counts = app.add_subcommand("counts", "Table of label and generator counts for m <= 3");
    counts->add_option("--max-r", counts_r, "Largest tuple length")->check(CLI::Range(1, 7));

    EvalOptions ev;
    auto* eval = app.add_subcommand("eval", "Evaluate an invariant on a state file");
    eval->add_option("--label", ev.label, "Label, e.g. s,s2 or [2,3,1],[3,1,2]")->required();
    eval->add_option("--kind", ev.kind, "pure or mixed (default: from the state file)");
    eval->add_option("--m", ev.m, "Grade for named labels")->check(CLI::Range(1, luinv::max_grade));
    eval->add_option("--state", ev.state, "State file (JSON)")->required();

    GraphOptions gr;
    auto* graph = app.add_subcommand("graph", "Graph, formula and decomposition of a label");
    graph->add_option("--label", gr.label, "Label")->required();
    graph->add_option("--m", gr.m, "Grade for named labels")->check(CLI::Range(1, luinv::max_grade));
    graph->add_option("--k", gr.k, "Number of parties (checked against the label)");
    graph->add_option("--kind", gr.kind, "pure or mixed")->check(CLI::IsMember({"pure", "mixed"}));
    graph->add_flag("--decompose", gr.decompose, "List the classes of the pure label with their formulas");
    graph->add_flag("--expressible", gr.expressible, "Print an adjacent-loop vertex ordering or none");
    graph->add_flag("--formula", gr.formula, "Print the matrix formula");
    graph->add_option("--format", gr.format, "dot or json")->check(CLI::IsMember({"dot", "json", "table"}));

    VerifyOptions ve;
    auto* verify = app.add_subcommand("verify", "Run verification checks");
    verify->add_option("--suite", ve.suite, "all, counts, lu, independence, classes, purification or identities")
        ->check(CLI::IsMember(luinv::suite_names()));
    verify->add_option("--seed", ve.seed, "Random seed");
    verify->add_option("--dims", ve.dims, "Local dimensions, e.g. 2,2,2");
    verify->add_option("--samples", ve.samples, "Samples for the invariance check")->check(CLI::PositiveNumber);
    verify->add_option("--report", ve.report, "Write the JSON report here");

    RandomStateOptions rs;
    auto* random_state = app.add_subcommand("random-state", "Write a random state file");
    random_state->add_option("--dims", rs.dims, "Local dimensions, e.g. 2,3")->required();
    random_state->add_option("--kind", rs.kind, "pure or mixed")->check(CLI::IsMember({"pure", "mixed"}));
    random_state->add_option("--seed", rs.seed, "Random seed");
    random_state->add_option("--rank", rs.rank, "Rank of a mixed state")->check(CLI::PositiveNumber);
    random_state->add_option("--out", rs.out, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    luinv::max_total_dimension = max_dim;
    try {
        if (*enumerate) return cmd_enumerate(en);
        if (*counts) return cmd_counts(counts_r);
        if (*eval) return cmd_eval(ev);
        if (*graph) return cmd_graph(gr);
        if (*verify) return cmd_verify(ve);
        if (*random_state) return cmd_random_state(rs);
    } catch (const luinv::resource_error& e) {
        std::cerr << "error: resource limit: " << e.what() << "\n";
        return resource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
