#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mlcake/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;      // I/O and unexpected errors
constexpr int kExitValidation = 2;   // bad documents or protocol preconditions
constexpr int kExitUnsupported = 3;  // layer count outside 2^a * 3^b, b <= 1
constexpr int kExitCertificate = 4;  // claimed fairness contradicted by the verifier

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + path);
    out << content;
}

struct SolveArgs {
    std::string protocol;
    std::string in_path;
    std::string out_path;
    std::string render_path;
    bool verify = false;
    bool count_queries = false;
};

int run_solve(const SolveArgs& args) {
    const mlcake::Instance inst = mlcake::load_instance(read_file(args.in_path));
    const mlcake::ProtocolResult result = mlcake::run_protocol(args.protocol, inst);

    nlohmann::ordered_json out =
        nlohmann::ordered_json::parse(mlcake::save_allocation(inst, result, args.protocol));

    bool certificate_ok = true;
    if (args.verify) {
        const mlcake::FairnessReport report = mlcake::fairness_report(inst, result.allocation);
        certificate_ok = report.supports(result.certificate);
        out["report"] = nlohmann::ordered_json::parse(mlcake::save_report(report));
    }
    if (!args.out_path.empty())
        write_file(args.out_path, out.dump(2) + "\n");
    else
        std::cout << out.dump(2) << "\n";

    if (!args.render_path.empty())
        write_file(args.render_path, mlcake::render_svg(inst, result.allocation));

    if (args.count_queries) {
        for (std::size_t i = 0; i < result.transcript.size(); ++i) {
            const auto& q = result.transcript[i];
            std::cerr << "agent " << i + 1 << ": short_eval=" << q.short_eval
                      << " short_cut=" << q.short_cut << " long_eval=" << q.long_eval
                      << " long_cut=" << q.long_cut << "\n";
        }
    }
    if (!certificate_ok) {
        std::cerr << "claimed certificate '" << mlcake::certificate_name(result.certificate)
                  << "' is violated\n";
        return kExitCertificate;
    }
    return kExitOk;
}

int run_verify(const std::string& in_path, const std::string& alloc_path) {
    const mlcake::Instance inst = mlcake::load_instance(read_file(in_path));
    const mlcake::AllocationDocument doc =
        mlcake::load_allocation(read_file(alloc_path), inst.cake);
    const mlcake::FairnessReport report = mlcake::fairness_report(inst, doc.allocation);
    std::cout << mlcake::save_report(report);
    if (!doc.certificate.empty()) {
        mlcake::Certificate claimed;
        if (doc.certificate == "exact") claimed = mlcake::Certificate::Exact;
        else if (doc.certificate == "envy-free") claimed = mlcake::Certificate::EnvyFree;
        else if (doc.certificate == "proportional") claimed = mlcake::Certificate::Proportional;
        else throw mlcake::validation_error("unknown certificate: " + doc.certificate);
        if (!report.supports(claimed)) {
            std::cerr << "claimed certificate '" << doc.certificate << "' is violated\n";
            return kExitCertificate;
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact protocols for multi-layered cake cutting"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Run a protocol on an instance");
    solve->add_option("--protocol", solve_args.protocol,
                      "cutchoose2 | exact2x2 | ef3x2 | prop3x3 | prop3n | prop")
        ->required();
    solve->add_option("--in", solve_args.in_path, "instance JSON")->required();
    solve->add_option("--out", solve_args.out_path, "allocation JSON (stdout when omitted)");
    solve->add_flag("--verify", solve_args.verify, "embed a fairness report; exit 4 on violation");
    solve->add_option("--render", solve_args.render_path, "write an SVG of the allocation");
    solve->add_flag("--count-queries", solve_args.count_queries, "print query tallies to stderr");

    std::string verify_in, verify_alloc;
    auto* verify = app.add_subcommand("verify", "Check an allocation against an instance");
    verify->add_option("--in", verify_in, "instance JSON")->required();
    verify->add_option("--alloc", verify_alloc, "allocation JSON")->required();

    std::uint64_t gen_seed = 0;
    std::size_t gen_n = 2, gen_m = 2, gen_cells = 3;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate a seeded random instance");
    gen->add_option("--seed", gen_seed)->required();
    gen->add_option("--n", gen_n, "agents")->required();
    gen->add_option("--m", gen_m, "layers")->required();
    gen->add_option("--cells", gen_cells, "density cells per layer");
    gen->add_option("--out", gen_out, "instance JSON (stdout when omitted)");

    std::string oracle_in;
    int oracle_grid = 32;
    auto* oracle = app.add_subcommand("oracle", "Brute-force two-knife search (n=2, m=2)");
    oracle->add_option("--in", oracle_in, "instance JSON")->required();
    oracle->add_option("--grid", oracle_grid, "grid resolution (<= 64)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(solve_args);
        if (verify->parsed()) return run_verify(verify_in, verify_alloc);
        if (gen->parsed()) {
            const std::string doc =
                mlcake::save_instance(mlcake::generate_instance(gen_seed, gen_n, gen_m, gen_cells));
            if (gen_out.empty()) std::cout << doc;
            else write_file(gen_out, doc);
            return kExitOk;
        }
        if (oracle->parsed()) {
            const mlcake::Instance inst = mlcake::load_instance(read_file(oracle_in));
            const mlcake::TwoKnifeSearch best = mlcake::exhaustive_2x2_oracle(inst, oracle_grid);
            nlohmann::ordered_json out{{"deficiency", best.deficiency.str()},
                                       {"x", best.x.str()},
                                       {"y", best.y.str()}};
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const mlcake::unsupported_shape_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const mlcake::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
