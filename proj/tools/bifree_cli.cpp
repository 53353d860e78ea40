#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bifree/io.hpp"
#include "bifree/matrix_checks.hpp"

using namespace bifree;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_output(const json& j, const std::string& out_path) {
    const std::string text = dump_pretty(j);
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot open output file: " + out_path);
    out << text;
}

struct Options {
    std::string op;
    std::string mode = "exact";
    Index order = -1;
    Index pmax = -1;
    Index qmax = -1;
    std::vector<std::string> inputs;
    std::string output;
};

template <typename Scalar>
void run_transform(const Options& opt) {
    const TwoBand<Scalar> d =
        two_band_from_json<Scalar>(read_json_file(opt.inputs[0]), opt.order);
    PartialTransform<Scalar> t =
        opt.op == "s"   ? partial_s_transform(d)
        : opt.op == "t" ? partial_t_transform(d)
                        : partial_r_reduced(d);
    write_output(transform_to_json(t), opt.output);
    std::cerr << "partial " << opt.op << "-transform of order-" << d.order()
              << " data; published series order " << t.series.order() << "\n";
}

template <typename Scalar>
void run_convolve(const Options& opt) {
    const TwoBand<Scalar> a =
        two_band_from_json<Scalar>(read_json_file(opt.inputs[0]), opt.order);
    const TwoBand<Scalar> b =
        two_band_from_json<Scalar>(read_json_file(opt.inputs[1]), opt.order);
    const ConvolutionResult<Scalar> r =
        opt.op == "bbmult" ? bb_mult(a, b) : bp_mult(a, b);
    write_output(two_band_to_json(r.result), opt.output);
    std::cerr << conv_op_name(r.op) << ": published reliable order "
              << r.reliable_order << "\n";
}

template <typename Scalar>
void run_oracle(const Options& opt) {
    const ConvOp op = opt.op == "bbmult"   ? ConvOp::bbmult
                      : opt.op == "bpmult" ? ConvOp::bpmult
                                           : ConvOp::bbadd;
    const TwoBand<Scalar> a = two_band_from_json<Scalar>(read_json_file(opt.inputs[0]));
    const TwoBand<Scalar> b = two_band_from_json<Scalar>(read_json_file(opt.inputs[1]));
    const TwoBand<Scalar> r = oracle_moments(op, a, b, opt.pmax, opt.qmax);
    write_output(two_band_to_json(r), opt.output);
    std::cerr << "oracle " << conv_op_name(op) << ": exact moments to order "
              << r.order() << "\n";
}

int run_selfcheck(int seeds, std::vector<Index> dims, double tolerance) {
    if (dims.empty()) dims = {1, 2, 4, 8};
    std::uint64_t base_seed = 20150406ull;
    if (const char* env = std::getenv("BIFREE_SEED")) base_seed = std::strtoull(env, nullptr, 10);
    const auto records = run_self_checks(dims, seeds, base_seed, tolerance);
    bool all_pass = true;
    for (const auto& r : records) {
        std::cout << "dim=" << r.dim << " seed=" << r.seed
                  << " mult_residual=" << r.mult_residual
                  << " add_residual=" << r.add_residual << (r.pass ? " PASS" : " FAIL")
                  << "\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "all factorization checks passed"
                           : "factorization checks FAILED")
              << " (" << records.size() << " samples)\n";
    return all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bifree: partial bi-free S/T-transforms, bi-free convolutions and "
                 "their operator-model cross-check"};
    app.require_subcommand(1);

    Options opt;
    int seeds = 100;
    double tolerance = 1e-9;
    std::vector<Index> dims;

    CLI::App* transform = app.add_subcommand(
        "transform", "compute a 2-variable partial transform of a two-band distribution");
    transform->add_option("--op", opt.op, "s | t | rtilde")
        ->required()
        ->check(CLI::IsMember({"s", "t", "rtilde"}));
    transform->add_option("--order", opt.order, "truncation / realization order");
    transform->add_option("--mode", opt.mode)->check(CLI::IsMember({"exact", "float"}));
    transform->add_option("input", opt.inputs, "distribution JSON file")
        ->required()
        ->expected(1);
    transform->add_option("-o,--output", opt.output, "output file (default stdout)");

    CLI::App* convolve = app.add_subcommand(
        "convolve", "bi-free convolution of two two-band distributions via transforms");
    convolve->add_option("--op", opt.op, "bbmult | bpmult")
        ->required()
        ->check(CLI::IsMember({"bbmult", "bpmult"}));
    convolve->add_option("--order", opt.order, "truncation / realization order");
    convolve->add_option("--mode", opt.mode)->check(CLI::IsMember({"exact", "float"}));
    convolve->add_option("inputs", opt.inputs, "two distribution JSON files")
        ->required()
        ->expected(2);
    convolve->add_option("-o,--output", opt.output, "output file (default stdout)");

    CLI::App* oracle = app.add_subcommand(
        "oracle", "exact joint moments from the free-product operator model");
    oracle->add_option("--op", opt.op, "bbmult | bpmult | bbadd")
        ->required()
        ->check(CLI::IsMember({"bbmult", "bpmult", "bbadd"}));
    oracle->add_option("--pmax", opt.pmax, "largest left power")->required();
    oracle->add_option("--qmax", opt.qmax, "largest right power")->required();
    oracle->add_option("--mode", opt.mode)->check(CLI::IsMember({"exact", "float"}));
    oracle->add_option("inputs", opt.inputs, "two distribution JSON files")
        ->required()
        ->expected(2);
    oracle->add_option("-o,--output", opt.output, "output file (default stdout)");

    CLI::App* selfcheck = app.add_subcommand(
        "selfcheck", "verify the resolvent factorization identities on random matrices");
    selfcheck->add_option("--seeds", seeds, "samples per dimension");
    selfcheck->add_option("--dim", dims, "matrix dimensions (default 1 2 4 8)");
    selfcheck->add_option("--tolerance", tolerance, "relative residual bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (transform->parsed()) {
            if (opt.mode == "exact") run_transform<Rational>(opt);
            else run_transform<Complex>(opt);
        } else if (convolve->parsed()) {
            if (opt.mode == "exact") run_convolve<Rational>(opt);
            else run_convolve<Complex>(opt);
        } else if (oracle->parsed()) {
            if (opt.pmax < 0 || opt.qmax < 0) throw ParseError("--pmax/--qmax must be >= 0");
            if (opt.mode == "exact") run_oracle<Rational>(opt);
            else run_oracle<Complex>(opt);
        } else if (selfcheck->parsed()) {
            return run_selfcheck(seeds, dims, tolerance);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal invariant failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
