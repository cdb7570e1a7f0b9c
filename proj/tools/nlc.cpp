// nlc: command-line driver for the no-lonely-colour construction.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlc/nlc.hpp"

namespace {

using nlc::io::Json;

constexpr int exit_ok = 0;
constexpr int exit_io = 1;
constexpr int exit_not_found = 2;
constexpr int exit_supplier = 3;
constexpr int exit_fail = 4;
constexpr int exit_inconclusive = 5;
constexpr int exit_usage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fills options of `sub` that were not given on the command line from the
// matching section of the config document.
void apply_config(CLI::App& sub, const Json& config)
{
    if (!config.is_object())
        throw UsageError("config must be a JSON object");
    if (!config.contains(sub.get_name()))
        return;
    const auto& section = config.at(sub.get_name());
    if (!section.is_object())
        throw UsageError("config section '" + sub.get_name() + "' must be an object");
    for (const auto& [key, value] : section.items()) {
        auto* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw UsageError("unknown config key '" + key + "' for " + sub.get_name());
        if (opt->count() > 0)
            continue;
        auto text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        try {
            if (value.is_array())
                for (const auto& item : value)
                    opt->add_result(text(item));
            else
                opt->add_result(text(value));
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
}

template <typename T>
const T& require(const std::optional<T>& value, const char* flag)
{
    if (!value)
        throw UsageError(std::string(flag) + " is required");
    return *value;
}

void emit(const std::optional<std::string>& out, const std::string& text)
{
    if (out)
        nlc::io::write_atomic(*out, text);
    else
        std::cout << text;
}

unsigned thread_count()
{
    if (const char* env = std::getenv("NLC_THREADS")) {
        try {
            auto n = std::stoul(env);
            if (n >= 1)
                return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        throw UsageError("NLC_THREADS must be a positive integer");
    }
    return 1;
}

// ------------------------------------------------------------ gen-hypergraph

struct GenArgs {
    std::size_t d = 2, n = 1, r_max = 1;
    std::size_t girth = 0, chi = 0;
    std::uint64_t seed = 1;
    std::string certify = "enumerate";
    std::optional<std::string> out;
};

nlc::TranquilityCertificate certify_by(
    const std::string& method, const nlc::Hypergraph& h, const nlc::LabellingFamily& lam)
{
    if (method == "enumerate")
        return nlc::certify_tranquil(h, lam);
    nlc::TranquilityCertificate cert;
    cert.max_walk_length = h.vertex_count() + 1;
    cert.counterexample = nlc::find_counterexample_by_cuts(h, lam);
    return cert;
}

int run_gen(const GenArgs& a)
{
    nlc::SliceSpec spec { a.d, a.n, a.r_max };
    auto slice = nlc::build_slice(spec);
    nlc::io::HypergraphDocument doc { slice.hypergraph, slice.labelling, std::nullopt, "enumeration", Json::object() };
    doc.source["generator"] = "gallai-slice";
    doc.source["d"] = a.d;
    doc.source["n"] = a.n;
    doc.source["r_max"] = a.r_max;
    if (a.girth > 0 || a.chi > 0) {
        auto pruned = nlc::prune_for_girth(slice.hypergraph, slice.labelling, a.girth, a.chi, a.seed);
        if (!pruned) {
            std::cerr << "nlc: NOT_FOUND: pruned slice has chromatic number below " << a.chi << "\n";
            return exit_not_found;
        }
        doc.hypergraph = pruned->hypergraph;
        doc.labelling = pruned->labelling;
        doc.source["girth"] = a.girth;
        doc.source["chi"] = a.chi;
        doc.source["seed"] = a.seed;
        doc.source["deleted_vertices"] = pruned->deleted;
        doc.source["kept_vertices"] = pruned->kept_vertices;
    }
    if (a.certify != "none") {
        doc.certificate = certify_by(a.certify, doc.hypergraph, doc.labelling);
        doc.certificate_method = a.certify == "enumerate" ? "enumeration" : "cuts";
    }
    nlc::io::write_atomic(require(a.out, "--out"), nlc::io::dump(nlc::io::to_json(doc)));
    std::cout << "vertices " << doc.hypergraph.vertex_count() << "\nhyperedges " << doc.hypergraph.edge_count()
              << "\nuniformity " << doc.hypergraph.uniformity() << "\n";
    if (doc.certificate) {
        std::cout << "certificate " << (doc.certificate->tranquil() ? "TRANQUIL" : "COUNTEREXAMPLE") << "\n";
        if (!doc.certificate->tranquil())
            return exit_fail;
    }
    return exit_ok;
}

// ------------------------------------------------------------ check-tranquil

struct CheckArgs {
    std::optional<std::string> in, out;
    std::string method = "enumerate";
    bool search = false;
    std::size_t budget = 1'000'000;
};

int run_check(const CheckArgs& a)
{
    auto doc = nlc::io::hypergraph_document_from_json(nlc::io::parse(nlc::io::read_file(require(a.in, "--in"))));
    Json report;
    int code = exit_ok;
    if (a.search) {
        auto found = nlc::search_tranquil_labelling(doc.hypergraph, a.budget);
        report["search"] = found.status == nlc::SearchStatus::found ? "FOUND"
            : found.status == nlc::SearchStatus::exhausted            ? "NOT_FOUND"
                                                                      : "BUDGET";
        report["explored"] = found.explored;
        if (found.status != nlc::SearchStatus::found) {
            std::cout << nlc::io::dump(report);
            return found.status == nlc::SearchStatus::exhausted ? exit_not_found : exit_inconclusive;
        }
        doc.labelling = *found.family;
    }
    auto cert = certify_by(a.method, doc.hypergraph, doc.labelling);
    doc.certificate = cert;
    doc.certificate_method = a.method == "enumerate" ? "enumeration" : "cuts";
    report["certificate"] = nlc::io::certificate_to_json(cert, doc.certificate_method);
    if (!cert.tranquil())
        code = exit_fail;
    if (a.out)
        nlc::io::write_atomic(*a.out, nlc::io::dump(nlc::io::to_json(doc)));
    std::cout << nlc::io::dump(report);
    return code;
}

// --------------------------------------------------------------------- build

struct BuildArgs {
    std::size_t g = 3, k = 3;
    std::string level3;
    std::size_t slice_budget = 4096;
    std::uint64_t seed = 1;
    std::optional<std::string> out;
};

// "cycle:M" or "slice:N:R" (a d = 2 slice, pruned to the girth requirement).
nlc::HypergraphSupplier supplier_for(const BuildArgs& a)
{
    auto fallback = nlc::standard_supplier({ a.slice_budget, a.seed });
    if (a.level3.empty())
        return fallback;
    std::vector<std::string> parts;
    std::stringstream ss(a.level3);
    for (std::string part; std::getline(ss, part, ':');)
        parts.push_back(part);
    auto number = [&](std::size_t i) -> std::size_t {
        try {
            return std::stoul(parts.at(i));
        } catch (const std::exception&) {
            throw UsageError("bad --level3 value '" + a.level3 + "'");
        }
    };
    if (parts.size() == 2 && parts[0] == "cycle") {
        auto m = number(1);
        if (m < 3 || m % 2 == 0)
            throw UsageError("--level3 cycle length must be odd and at least 3");
        return nlc::override_supplier(2, nlc::cycle_hypergraph(m), fallback);
    }
    if (parts.size() == 3 && parts[0] == "slice") {
        nlc::SliceSpec spec { 2, number(1), number(2) };
        auto seed = a.seed;
        return [spec, seed, fallback](const nlc::SupplyRequest& req) -> std::optional<nlc::SuppliedHypergraph> {
            if (req.uniformity != 2)
                return fallback(req);
            return nlc::slice_hypergraph(spec, req.min_girth, req.min_chromatic, seed);
        };
    }
    throw UsageError("bad --level3 value '" + a.level3 + "'");
}

void print_levels(const nlc::ConstructedGraph& top)
{
    std::vector<const nlc::ConstructedGraph*> chain;
    for (auto* cg = &top; cg != nullptr; cg = cg->child.get())
        chain.insert(chain.begin(), cg);
    std::cout << std::left << std::setw(7) << "level" << std::setw(10) << "|V|" << std::setw(10) << "|E|"
              << std::setw(9) << "colours" << std::setw(8) << "|V(H)|" << std::setw(8) << "|E(H)|"
              << "supplier\n";
    for (const auto* cg : chain) {
        std::cout << std::left << std::setw(7) << cg->level << std::setw(10) << cg->vertex_count() << std::setw(10)
                  << cg->graph.edge_count() << std::setw(9) << cg->colouring.colour_count() << std::setw(8)
                  << (cg->hypergraph ? std::to_string(cg->hypergraph->vertex_count()) : "-") << std::setw(8)
                  << (cg->hypergraph ? std::to_string(cg->hypergraph->edge_count()) : "-") << cg->supplier << "\n";
    }
}

int run_build(const BuildArgs& a)
{
    auto supplier = supplier_for(a);
    auto cg = nlc::build(a.g, a.k, supplier);
    if (a.out)
        nlc::io::write_atomic(*a.out, nlc::io::dump(nlc::io::to_json(cg)));
    print_levels(cg);
    return exit_ok;
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
    std::optional<std::string> in, report;
    std::vector<std::string> checks;
    std::size_t cycle_cap = nlc::default_cycle_cap;
};

int run_verify(const VerifyArgs& a)
{
    auto cg = nlc::io::instance_from_json(nlc::io::parse(nlc::io::read_file(require(a.in, "--in"))));
    nlc::VerifyOptions options;
    options.cycle_cap = a.cycle_cap == 0 ? std::nullopt : std::optional<std::size_t>(a.cycle_cap);
    options.threads = thread_count();
    if (!a.checks.empty()) {
        options.checks.clear();
        for (const auto& name : a.checks) {
            auto c = nlc::check_from_string(name);
            if (!c)
                throw UsageError("unknown check '" + name + "'");
            options.checks.push_back(*c);
        }
    }
    auto report = nlc::verify_constructed(cg, options);
    auto text = nlc::io::dump(nlc::io::to_json(report));
    if (a.report)
        nlc::io::write_atomic(*a.report, text);
    std::cout << text;
    if (report.any(nlc::Verdict::fail))
        return exit_fail;
    if (report.any(nlc::Verdict::inconclusive))
        return exit_inconclusive;
    return exit_ok;
}

// -------------------------------------------------------------------- export

struct ExportArgs {
    std::optional<std::string> in, out;
    std::string format = "dot";
};

int run_export(const ExportArgs& a)
{
    auto cg = nlc::io::instance_from_json(nlc::io::parse(nlc::io::read_file(require(a.in, "--in"))));
    if (a.format == "dot")
        emit(a.out, nlc::io::to_dot(cg.graph, cg.colouring));
    else if (a.format == "graphml")
        emit(a.out, nlc::io::to_graphml(cg.graph, cg.colouring));
    else
        emit(a.out, nlc::io::dump(nlc::io::to_json(cg)));
    return exit_ok;
}

// --------------------------------------------------------------------- stats

struct StatsArgs {
    std::optional<std::string> in;
    bool exact = false;
};

int run_stats(const StatsArgs& a)
{
    auto j = nlc::io::parse(nlc::io::read_file(require(a.in, "--in")));
    auto format = nlc::io::get_as<std::string>(j, "format");
    if (format == "nlc-hypergraph") {
        auto doc = nlc::io::hypergraph_document_from_json(j);
        const auto& h = doc.hypergraph;
        std::cout << "vertices " << h.vertex_count() << "\nhyperedges " << h.edge_count() << "\nuniformity "
                  << h.uniformity() << "\nberge_girth " << nlc::berge_girth(h) << "\n";
        if (a.exact)
            std::cout << "chromatic_number " << nlc::hypergraph_chromatic_number(h) << "\n";
        std::cout << "certificate "
                  << (!doc.certificate ? "none" : doc.certificate->tranquil() ? "TRANQUIL" : "COUNTEREXAMPLE") << "\n";
        return exit_ok;
    }
    auto cg = nlc::io::instance_from_json(j);
    print_levels(cg);
    std::cout << "girth " << nlc::girth(cg.graph) << "\n";
    if (a.exact && cg.vertex_count() > 0)
        std::cout << "chromatic_number " << nlc::chromatic_number(cg.graph) << "\n";
    bool recurrence = true;
    for (const nlc::ConstructedGraph* level = &cg; level->child; level = level->child.get())
        if (level->hypergraph
            && level->vertex_count()
                != level->hypergraph->vertex_count() + level->hypergraph->edge_count() * level->child->vertex_count())
            recurrence = false;
    std::cout << "vertex_recurrence " << (recurrence ? "ok" : "broken") << "\n";
    return recurrence ? exit_ok : exit_fail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "No-lonely-colour graphs via tranquil hypergraphs" };
    app.require_subcommand(1);
    std::optional<std::string> config_path;
    app.add_option("--config", config_path, "JSON config; command-line flags win");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-hypergraph", "Gallai slice with canonical labelling");
    gen_cmd->add_option("--d", gen.d, "dimension (uniformity)")->check(CLI::Range(2, 64));
    gen_cmd->add_option("--n", gen.n, "box side")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--r-max", gen.r_max, "largest radius")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--girth", gen.girth, "prune to this Berge girth");
    gen_cmd->add_option("--chi", gen.chi, "required chromatic number after pruning");
    gen_cmd->add_option("--seed", gen.seed, "pruning seed");
    gen_cmd->add_option("--certify", gen.certify, "certification method")
        ->check(CLI::IsMember({ "enumerate", "cuts", "none" }));
    gen_cmd->add_option("--out", gen.out, "output file");

    CheckArgs chk;
    auto* chk_cmd = app.add_subcommand("check-tranquil", "certify a labelled hypergraph");
    chk_cmd->add_option("--in", chk.in, "hypergraph file");
    chk_cmd->add_option("--method", chk.method, "enumerate or cuts")->check(CLI::IsMember({ "enumerate", "cuts" }));
    chk_cmd->add_flag("--search", chk.search, "search for a tranquil labelling first");
    chk_cmd->add_option("--budget", chk.budget, "search node budget")->check(CLI::PositiveNumber);
    chk_cmd->add_option("--out", chk.out, "write the certified document here");

    BuildArgs bld;
    auto* bld_cmd = app.add_subcommand("build", "run the construction up to level k");
    bld_cmd->add_option("--g", bld.g, "girth target")->check(CLI::PositiveNumber);
    bld_cmd->add_option("--k", bld.k, "chromatic target (levels)")->check(CLI::PositiveNumber);
    bld_cmd->add_option("--level3", bld.level3, "level-3 hypergraph: cycle:M or slice:N:R");
    bld_cmd->add_option("--slice-budget", bld.slice_budget, "largest slice tried for r >= 3")
        ->check(CLI::PositiveNumber);
    bld_cmd->add_option("--seed", bld.seed, "pruning seed");
    bld_cmd->add_option("--out", bld.out, "instance file");

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "check an instance");
    ver_cmd->add_option("--in", ver.in, "instance file");
    ver_cmd->add_option("--checks", ver.checks, "comma-separated subset of checks")->delimiter(',');
    ver_cmd->add_option("--cycle-cap", ver.cycle_cap, "cycle enumeration cap, 0 for none");
    ver_cmd->add_option("--report", ver.report, "also write the report here");

    ExportArgs exp;
    auto* exp_cmd = app.add_subcommand("export", "write the graph as dot, graphml or json");
    exp_cmd->add_option("--in", exp.in, "instance file");
    exp_cmd->add_option("--format", exp.format, "dot, graphml or json")
        ->check(CLI::IsMember({ "dot", "graphml", "json" }));
    exp_cmd->add_option("--out", exp.out, "output file (stdout if absent)");

    StatsArgs sts;
    auto* sts_cmd = app.add_subcommand("stats", "summarise an instance or hypergraph file");
    sts_cmd->add_option("--in", sts.in, "input file");
    sts_cmd->add_flag("--exact", sts.exact, "also compute the exact chromatic number");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (config_path) {
            auto config = nlc::io::parse(nlc::io::read_file(*config_path));
            for (auto* sub : app.get_subcommands())
                apply_config(*sub, config);
        }
        if (gen_cmd->parsed())
            return run_gen(gen);
        if (chk_cmd->parsed())
            return run_check(chk);
        if (bld_cmd->parsed())
            return run_build(bld);
        if (ver_cmd->parsed())
            return run_verify(ver);
        if (exp_cmd->parsed())
            return run_export(exp);
        return run_stats(sts);
    } catch (const UsageError& e) {
        std::cerr << "nlc: usage: " << e.what() << "\n";
        return exit_usage;
    } catch (const nlc::SupplierFailure& e) {
        std::cerr << "nlc: " << e.what() << "\n";
        return exit_supplier;
    } catch (const nlc::Error& e) {
        std::cerr << "nlc: " << e.what() << "\n";
        return e.code() == nlc::ErrorCode::invalid_argument ? exit_usage : exit_io;
    } catch (const std::exception& e) {
        std::cerr << "nlc: I/O: " << e.what() << "\n";
        return exit_io;
    }
}
