// clawmark — flows, tables, fibers, and move certificates for group-based
// claw-tree models from the command line.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "clawmark/certificate.hpp"
#include "clawmark/fiber.hpp"
#include "clawmark/random.hpp"
#include "clawmark/reducer.hpp"

namespace {

using clawmark::Error;
using clawmark::ErrorKind;
using json = nlohmann::ordered_json;

struct RunConfig {
    std::string group;
    int n = 0;
    int d_max = 0;
    int k_max = 0;
    std::uint64_t flow_cap = clawmark::kDefaultFlowCap;
    std::uint64_t table_cap = clawmark::kDefaultTableCap;
    std::uint64_t completion_cap = clawmark::kDefaultCompletionCap;
    std::uint64_t state_cap = 200000;
    std::string cache_path;
    int threads = 1;
    std::uint64_t seed = 12345;
    std::string output;
    std::string format = "json";
};

json config_json(const RunConfig& cfg) {
    return json{{"group", cfg.group},
                {"n", cfg.n},
                {"d_max", cfg.d_max},
                {"k_max", cfg.k_max},
                {"flow_cap", cfg.flow_cap},
                {"table_cap", cfg.table_cap},
                {"completion_cap", cfg.completion_cap},
                {"state_cap", cfg.state_cap},
                {"cache_path", cfg.cache_path},
                {"threads", cfg.threads},
                {"seed", cfg.seed},
                {"output", cfg.output},
                {"format", cfg.format}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) clawmark::fail(ErrorKind::Parse, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) clawmark::fail(ErrorKind::Parse, "cannot open " + path + " for writing");
    out << text;
}

json rows_json(const clawmark::GroupSpec& spec, const std::vector<clawmark::Flow>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        json r = json::array();
        for (clawmark::ElemIdx e : row) r.push_back(clawmark::format_element(spec, e));
        out.push_back(std::move(r));
    }
    return out;
}

json signature_json(const clawmark::ColumnSignature& sig) {
    json out = json::array();
    for (const auto& col : sig.counts) out.push_back(col);
    return out;
}

int run_flows(const RunConfig& cfg, bool count_only) {
    clawmark::GroupSpec spec = clawmark::GroupSpec::parse(cfg.group);
    if (count_only) {
        std::cout << clawmark::flow_count(spec, cfg.n, cfg.flow_cap) << "\n";
        return 0;
    }
    std::ostringstream out;
    for (const clawmark::Flow& f : clawmark::enumerate_flows(spec, cfg.n, cfg.flow_cap))
        out << clawmark::format_flow(spec, f) << "\n";
    write_output(cfg.output, out.str());
    return 0;
}

int run_polytope(const RunConfig& cfg) {
    clawmark::GroupSpec spec = clawmark::GroupSpec::parse(cfg.group);
    write_output(cfg.output,
                 clawmark::format_matrix(clawmark::polytope_vertices(spec, cfg.n, cfg.flow_cap)));
    return 0;
}

int run_check(const std::string& pairfile) {
    auto [t0, t1] = clawmark::parse_pair_file(read_file(pairfile));
    if (!clawmark::compatible(t0, t1)) {
        std::cout << "incompatible\n";
        return 1;
    }
    std::cout << "compatible, d=" << t0.degree() << "\n";
    return 0;
}

int run_phi(const RunConfig& cfg, bool use_symmetry) {
    clawmark::GroupSpec spec = clawmark::GroupSpec::parse(cfg.group);
    clawmark::ResultCache cache(cfg.cache_path);
    clawmark::WidthOptions options;
    options.flow_cap = cfg.flow_cap;
    options.table_cap = cfg.table_cap;
    options.completion_cap = cfg.completion_cap;
    options.threads = cfg.threads;
    options.use_symmetry = use_symmetry;
    options.cache = cfg.cache_path.empty() ? nullptr : &cache;

    clawmark::PhiReport report =
        clawmark::phi_evidence(spec, cfg.n, cfg.d_max, cfg.k_max, options);

    json out;
    out["config"] = config_json(cfg);
    out["group"] = report.group;
    out["n"] = report.n;
    out["d_max"] = report.d_max;
    out["k_max"] = report.k_max;
    out["width"] = report.width;
    out["vacuous"] = report.vacuous;
    out["exceeded"] = report.exceeded;
    out["capped"] = report.capped;
    out["fibers_examined"] = report.fibers_examined;
    json per = json::array();
    for (const clawmark::WidthReport& w : report.per_degree)
        per.push_back(json{{"d", w.d},
                           {"width", w.width},
                           {"vacuous", w.vacuous},
                           {"exceeded", w.exceeded},
                           {"capped", w.capped},
                           {"fibers_examined", w.fibers_examined},
                           {"tables_examined", w.tables_examined}});
    out["per_degree"] = std::move(per);
    if (report.witness_signature && report.witness) {
        out["witness"] = json{{"d", report.witness_d},
                              {"signature", signature_json(*report.witness_signature)},
                              {"tables", json::array({rows_json(spec, report.witness->first.rows),
                                                      rows_json(spec, report.witness->second.rows)})}};
    } else {
        out["witness"] = nullptr;
    }
    out["caveat"] = report.caveat;
    write_output(cfg.output, out.dump(2) + "\n");
    if (report.exceeded) return 1;
    if (report.capped) return 2;
    return 0;
}

int run_connect(const RunConfig& cfg, const std::string& pairfile, bool trace,
                std::uint64_t align_states) {
    auto [t0, t1] = clawmark::parse_pair_file(read_file(pairfile));
    clawmark::ConnectConfig config;
    config.k_max = cfg.k_max;
    config.bfs_state_cap = cfg.state_cap;
    config.completion_cap = cfg.completion_cap;
    config.align.max_states = align_states;
    if (trace) config.trace = &std::cerr;

    clawmark::Certificate cert;
    try {
        cert = clawmark::connect_tables(t0, t1, config);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Precondition) {
            std::cerr << "not connected: " << e.what() << "\n";
            return 1;
        }
        throw;
    }
    std::string text = clawmark::serialize_certificate(cert);
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        write_output(cfg.output, text);
        json summary;
        summary["config"] = config_json(cfg);
        summary["connected"] = true;
        summary["k"] = cert.k;
        summary["steps"] = cert.steps.size();
        summary["output"] = cfg.output;
        std::cout << summary.dump(2) << "\n";
    }
    return 0;
}

int run_verify(const std::string& certfile) {
    std::vector<std::string> warnings;
    clawmark::Certificate cert = clawmark::parse_certificate(read_file(certfile), &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    clawmark::VerifyResult result = clawmark::verify_certificate(cert);
    if (result.accepted) {
        std::cout << "accepted: k=" << cert.k << ", steps=" << cert.steps.size() << "\n";
        return 0;
    }
    std::cout << "rejected: " << result.reason << " at step " << result.step << ": "
              << result.message << "\n";
    return 1;
}

int run_bench(const RunConfig& cfg, const std::string& suite, bool as_json) {
    if (suite != "small")
        clawmark::fail(ErrorKind::Parse, "unknown bench suite '" + suite + "'");
    struct Entry {
        std::string name;
        double ms;
        std::string detail;
    };
    std::vector<Entry> results;
    auto timed = [&](const std::string& name, const std::function<std::string()>& body) {
        auto start = std::chrono::steady_clock::now();
        std::string detail = body();
        auto stop = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(stop - start).count();
        results.push_back(Entry{name, ms, detail});
    };

    timed("polytope Z2 n=3", [] {
        auto m = clawmark::polytope_vertices(clawmark::GroupSpec::parse("Z2"), 3);
        return std::to_string(m.size()) + " vertices";
    });
    timed("width Z2 n=4 d=3 k=2", [] {
        auto r = clawmark::markov_width(clawmark::GroupSpec::parse("Z2"), 4, 3, 2);
        return "width " + std::to_string(r.width);
    });
    timed("width Z3 n=3 d=3 k=3", [] {
        auto r = clawmark::markov_width(clawmark::GroupSpec::parse("Z3"), 3, 3, 3);
        return "width " + std::to_string(r.width);
    });
    timed("connect+verify Z2 n=6 d=3 x5", [&] {
        clawmark::Rng rng(cfg.seed);
        clawmark::GroupSpec spec = clawmark::GroupSpec::parse("Z2");
        int steps = 0;
        for (int i = 0; i < 5; ++i) {
            clawmark::Table a = clawmark::random_table(spec, 6, 3, rng);
            clawmark::Table b = clawmark::shuffled_compatible_mate(a, rng);
            clawmark::Certificate cert = clawmark::connect_tables(a, b);
            if (!clawmark::verify_certificate(cert).accepted)
                clawmark::fail(ErrorKind::Internal, "bench certificate rejected");
            steps += static_cast<int>(cert.steps.size());
        }
        return std::to_string(steps) + " steps total";
    });

    if (as_json) {
        json out;
        out["config"] = config_json(cfg);
        out["suite"] = suite;
        json items = json::array();
        for (const Entry& e : results)
            items.push_back(json{{"name", e.name}, {"ms", e.ms}, {"detail", e.detail}});
        out["results"] = std::move(items);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "suite " << suite << ", seed " << cfg.seed << "\n";
        for (const Entry& e : results)
            std::cout << e.name << ": " << e.ms << " ms (" << e.detail << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flows, fibers, and move certificates for group-based claw-tree models"};
    app.require_subcommand(1);

    RunConfig cfg;
    int rc = 0;

    auto add_caps = [&](CLI::App* sub) {
        sub->add_option("--flow-cap", cfg.flow_cap, "flow enumeration cap")
            ->envname("CLAWMARK_FLOW_CAP")
            ->check(CLI::PositiveNumber);
        sub->add_option("--table-cap", cfg.table_cap, "table enumeration cap")
            ->envname("CLAWMARK_TABLE_CAP")
            ->check(CLI::PositiveNumber);
        sub->add_option("--completion-cap", cfg.completion_cap, "move completion cap")
            ->envname("CLAWMARK_COMPLETION_CAP")
            ->check(CLI::PositiveNumber);
    };

    // flows
    auto* flows = app.add_subcommand("flows", "list the flows of G^n");
    bool count_only = false;
    flows->add_option("group", cfg.group, "group literal, e.g. Z2 or Z2xZ3")->required();
    flows->add_option("n", cfg.n, "number of leaves")->required()->check(CLI::PositiveNumber);
    flows->add_flag("--count", count_only, "print only the number of flows");
    flows->add_option("-o,--output", cfg.output, "output file (default stdout)");
    add_caps(flows);
    flows->callback([&] { rc = run_flows(cfg, count_only); });

    // polytope
    auto* polytope = app.add_subcommand("polytope", "vertex matrix of the model polytope");
    polytope->add_option("group", cfg.group, "group literal")->required();
    polytope->add_option("n", cfg.n, "number of leaves")->required()->check(CLI::PositiveNumber);
    polytope->add_option("-o,--output", cfg.output, "output file (default stdout)");
    add_caps(polytope);
    polytope->callback([&] { rc = run_polytope(cfg); });

    // check
    auto* check = app.add_subcommand("check", "compatibility of a table pair");
    std::string pairfile;
    check->add_option("pairfile", pairfile, "pair file (two tables separated by ---)")
        ->required()
        ->check(CLI::ExistingFile);
    check->callback([&] { rc = run_check(pairfile); });

    // phi
    auto* phi = app.add_subcommand("phi", "truncated Markov width evidence");
    bool use_symmetry = false;
    cfg.d_max = 3;
    phi->add_option("group", cfg.group, "group literal")->required();
    phi->add_option("n", cfg.n, "number of leaves")->required()->check(CLI::PositiveNumber);
    phi->add_option("--dmax", cfg.d_max, "largest fiber degree to enumerate")
        ->check(CLI::NonNegativeNumber);
    phi->add_option("--kmax", cfg.k_max, "largest move degree to try (default |G|+1)")
        ->check(CLI::PositiveNumber);
    phi->add_option("--threads", cfg.threads, "worker threads")
        ->envname("CLAWMARK_THREADS")
        ->check(CLI::PositiveNumber);
    phi->add_option("--cache", cfg.cache_path, "width result cache file")
        ->envname("CLAWMARK_CACHE");
    phi->add_flag("--symmetry", use_symmetry, "prune fibers equal up to column permutation");
    phi->add_option("--seed", cfg.seed, "seed recorded in the report");
    phi->add_option("-o,--output", cfg.output, "output file (default stdout)");
    add_caps(phi);
    phi->callback([&] {
        if (cfg.k_max == 0)
            cfg.k_max = clawmark::GroupSpec::parse(cfg.group).order() + 1;
        rc = run_phi(cfg, use_symmetry);
    });

    // connect
    auto* connect = app.add_subcommand("connect", "certificate connecting a compatible pair");
    bool trace = false;
    std::uint64_t align_states = 20000;
    connect->add_option("pairfile", pairfile, "pair file (two tables separated by ---)")
        ->required()
        ->check(CLI::ExistingFile);
    connect->add_option("-o,--output", cfg.output, "certificate file (default stdout)");
    connect->add_option("--kmax", cfg.k_max, "move degree bound (0 = automatic)")
        ->check(CLI::NonNegativeNumber);
    connect->add_option("--state-cap", cfg.state_cap, "fiber search state cap")
        ->envname("CLAWMARK_STATE_CAP")
        ->check(CLI::PositiveNumber);
    connect->add_option("--align-states", align_states, "alignment search state budget")
        ->check(CLI::PositiveNumber);
    connect->add_flag("--trace", trace, "log reduction phases to stderr");
    add_caps(connect);
    connect->callback([&] { rc = run_connect(cfg, pairfile, trace, align_states); });

    // verify
    auto* verify = app.add_subcommand("verify", "replay a certificate independently");
    std::string certfile;
    verify->add_option("certfile", certfile, "certificate JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    verify->callback([&] { rc = run_verify(certfile); });

    // bench
    auto* bench = app.add_subcommand("bench", "timing of the small desk-scale suite");
    std::string suite = "small";
    bool bench_json = false;
    bench->add_option("suite", suite, "suite name (small)");
    bench->add_flag("--json", bench_json, "machine-readable output");
    bench->add_option("--seed", cfg.seed, "seed for the randomized workloads")
        ->envname("CLAWMARK_SEED");
    bench->callback([&] { rc = run_bench(cfg, suite, bench_json); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
