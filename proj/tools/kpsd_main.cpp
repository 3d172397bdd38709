// kpsd: membership, extreme-ray classification and certificates for the
// k-PSD closure cone S^{n,k}_+. JSON on stdout, prose on stderr.
//
// Exit codes: 0 positive verdict (member / extreme / valid / dimension 1),
// 1 negative verdict, 2 usage or input error, 3 numerical failure or
// refused borderline decision, 4 unknown (middle k without --oracle).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "kpsd/generators.hpp"
#include "kpsd/matrix_io.hpp"
#include "kpsd/oracle.hpp"
#include "kpsd/report_json.hpp"

namespace {

using namespace kpsd;

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;
constexpr int exit_numerical = 3;
constexpr int exit_unknown = 4;

struct CommonOpts {
    std::string file;
    int k = 0;
    Tolerances tol;
};

void add_tol_flags(CLI::App* cmd, Tolerances& tol) {
    cmd->add_option("--tol-eig", tol.eig_psd, "eigenvalue nonnegativity slack");
    cmd->add_option("--tol-rank", tol.rank_rel, "relative rank threshold");
    cmd->add_option("--tol-det", tol.det_zero, "determinant zero band");
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_member(const CommonOpts& o) {
    const SymMatrix m = read_matrix_file(o.file);
    const ConeSpec spec(m.dim(), o.k, o.tol);
    const MembershipReport rep = membership(m, spec);
    json out{{"schema_version", "1"},
             {"command", "member"},
             {"file", o.file},
             {"spec", spec_to_json(spec)}};
    out.update(membership_to_json(rep));
    emit(out);
    return rep.member ? exit_ok : exit_negative;
}

int run_classify(const CommonOpts& o, bool use_oracle, std::uint64_t seed) {
    const SymMatrix m = read_matrix_file(o.file);
    const ConeSpec spec(m.dim(), o.k, o.tol);

    ExtremeVerdict verdict = [&] {
        try {
            return classify(m, spec, use_oracle);
        } catch (const AmbiguityError&) {
            throw;
        } catch (const NumericalError&) {
            // the deterministic face direction collapsed; retry with the
            // seeded randomized search before giving up
            if (!use_oracle) throw;
            auto cert = decomposition_search(m, spec, 500, seed);
            if (!cert) throw;
            ExtremeVerdict v;
            v.tag = VerdictTag::NotExtreme;
            v.certificate = std::move(*cert);
            return v;
        }
    }();

    json out{{"schema_version", "1"},
             {"command", "classify"},
             {"file", o.file},
             {"oracle", use_oracle},
             {"seed", seed},
             {"spec", spec_to_json(spec)}};
    out.update(verdict_to_json(verdict));
    emit(out);
    switch (verdict.tag) {
    case VerdictTag::Extreme: return exit_ok;
    case VerdictTag::Unknown: return exit_unknown;
    default: return exit_negative;
    }
}

int run_gen(const std::string& kind, int n, int k, std::uint64_t seed,
            const std::vector<double>& dvals, const std::string& style_name,
            const Tolerances& tol) {
    SymMatrix m(1);
    std::string header = "# " + kind + " n=" + std::to_string(n);
    if (kind == "gnk") {
        m = gnk(n, k);
        header += " k=" + std::to_string(k);
    } else if (kind == "nls") {
        const DiagonalCongruence D =
            dvals.empty() ? random_congruence(n, seed) : DiagonalCongruence(dvals);
        m = nls(n, k, D, tol);
        header += " k=" + std::to_string(k) + " seed=" + std::to_string(seed);
    } else if (kind == "rank1") {
        std::vector<double> x = dvals;
        if (x.empty()) {
            SplitMix64 rng(seed);
            x.resize(n);
            for (double& v : x) v = rng.uniform(-1.0, 1.0);
        }
        if (static_cast<int>(x.size()) != n)
            throw ArgumentError("gen rank1: need n vector entries");
        m = rank_one(x);
        header += " seed=" + std::to_string(seed);
    } else if (kind == "random") {
        SampleStyle style = SampleStyle::Psd;
        if (style_name == "boundary") style = SampleStyle::Boundary;
        else if (style_name == "signed") style = SampleStyle::Signed;
        else if (style_name != "psd") throw ArgumentError("gen random: unknown style");
        m = random_member(ConeSpec(n, k, tol), seed, style);
        header += " k=" + std::to_string(k) + " seed=" + std::to_string(seed) +
                  " style=" + style_name;
    } else {
        throw ArgumentError("gen: unknown kind '" + kind + "'");
    }
    std::cout << header << "\n" << write_matrix_text(m);
    return exit_ok;
}

int run_oracle(const CommonOpts& o) {
    const SymMatrix m = read_matrix_file(o.file);
    const ConeSpec spec(m.dim(), o.k, o.tol);
    const FaceReport report = face_dimension(m, spec);
    json out{{"schema_version", "1"},
             {"command", "oracle"},
             {"file", o.file},
             {"spec", spec_to_json(spec)}};
    out.update(face_report_to_json(report));
    emit(out);
    return report.dimension == 1 ? exit_ok : exit_negative;
}

int run_verify(const std::string& file, const std::string& cert_path, int k_flag,
               const Tolerances& tol) {
    const SymMatrix m = read_matrix_file(file);
    std::ifstream in(cert_path);
    if (!in) throw ArgumentError("cannot open certificate file: " + cert_path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("certificate file: ") + e.what());
    }

    int k = k_flag;
    if (k == 0 && j.contains("spec")) k = j["spec"].value("k", 0);
    if (k == 0) throw ArgumentError("verify: block size not given (--k) and absent from json");
    const json cert_json = j.contains("certificate") ? j["certificate"] : j;
    DecompCertificate cert = [&] {
        try {
            return certificate_from_json(cert_json);
        } catch (const json::exception& e) {
            throw ArgumentError(std::string("certificate file: ") + e.what());
        }
    }();

    const ConeSpec spec(m.dim(), k, tol);
    const VerifyOutcome outcome = verify_certificate(m, cert, spec);
    json out{{"schema_version", "1"},
             {"command", "verify"},
             {"file", file},
             {"certificate_file", cert_path},
             {"spec", spec_to_json(spec)},
             {"valid", outcome.valid}};
    if (!outcome.valid) out["reason"] = outcome.reason;
    emit(out);
    return outcome.valid ? exit_ok : exit_negative;
}

int run_project(const CommonOpts& o, int max_sweeps) {
    const SymMatrix m = read_matrix_file(o.file);
    const ConeSpec spec(m.dim(), o.k, o.tol);
    const ProjectionResult res = project_dykstra(m, spec, max_sweeps);
    json out{{"schema_version", "1"},
             {"command", "project"},
             {"file", o.file},
             {"spec", spec_to_json(spec)},
             {"distance", frob_norm(m - res.point)},
             {"residual", res.residual},
             {"sweeps", res.sweeps},
             {"matrix", matrix_to_json(res.point)}};
    emit(out);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-PSD closure cone toolkit"};
    app.require_subcommand(1);

    CommonOpts member_opts;
    auto* member = app.add_subcommand("member", "decide membership in S^{n,k}_+");
    member->add_option("file", member_opts.file, "matrix file")->required();
    member->add_option("--k", member_opts.k, "block size")->required();
    add_tol_flags(member, member_opts.tol);

    CommonOpts classify_opts;
    bool use_oracle = false;
    std::uint64_t classify_seed = 0;
    auto* classify_cmd = app.add_subcommand("classify", "extreme-ray classification");
    classify_cmd->add_option("file", classify_opts.file, "matrix file")->required();
    classify_cmd->add_option("--k", classify_opts.k, "block size")->required();
    classify_cmd->add_flag("--oracle", use_oracle, "resolve middle k with the face oracle");
    classify_cmd->add_option("--seed", classify_seed, "seed for the randomized fallback search");
    add_tol_flags(classify_cmd, classify_opts.tol);

    std::string gen_kind;
    int gen_n = 0, gen_k = 0;
    std::uint64_t gen_seed = 0;
    std::vector<double> gen_d;
    std::string gen_style = "psd";
    Tolerances gen_tol;
    auto* gen = app.add_subcommand("gen", "emit a generator matrix as text");
    gen->add_option("kind", gen_kind, "gnk | nls | rank1 | random")->required();
    gen->add_option("--n", gen_n, "dimension")->required();
    gen->add_option("--k", gen_k, "block size");
    gen->add_option("--seed", gen_seed, "seed");
    gen->add_option("--d", gen_d, "diagonal entries (nls) or vector (rank1)");
    gen->add_option("--style", gen_style, "random style: psd | boundary | signed");
    add_tol_flags(gen, gen_tol);

    CommonOpts oracle_opts;
    auto* oracle_cmd = app.add_subcommand("oracle", "face-dimension oracle");
    oracle_cmd->add_option("file", oracle_opts.file, "matrix file")->required();
    oracle_cmd->add_option("--k", oracle_opts.k, "block size")->required();
    add_tol_flags(oracle_cmd, oracle_opts.tol);

    std::string verify_file, verify_cert;
    int verify_k = 0;
    Tolerances verify_tol;
    auto* verify = app.add_subcommand("verify", "replay a decomposition certificate");
    verify->add_option("file", verify_file, "matrix file")->required();
    verify->add_option("certificate", verify_cert, "certificate json (classify output)")
        ->required();
    verify->add_option("--k", verify_k, "block size (defaults to the certificate's spec)");
    add_tol_flags(verify, verify_tol);

    CommonOpts project_opts;
    int max_sweeps = 200;
    auto* project = app.add_subcommand("project", "Dykstra projection onto S^{n,k}_+");
    project->add_option("file", project_opts.file, "matrix file")->required();
    project->add_option("--k", project_opts.k, "block size")->required();
    project->add_option("--max-sweeps", max_sweeps, "sweep cap");
    add_tol_flags(project, project_opts.tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*member) return run_member(member_opts);
        if (*classify_cmd) return run_classify(classify_opts, use_oracle, classify_seed);
        if (*gen) return run_gen(gen_kind, gen_n, gen_k, gen_seed, gen_d, gen_style, gen_tol);
        if (*oracle_cmd) return run_oracle(oracle_opts);
        if (*verify) return run_verify(verify_file, verify_cert, verify_k, verify_tol);
        if (*project) return run_project(project_opts, max_sweeps);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const AmbiguityError& e) {
        std::cerr << "numerical ambiguity: " << e.what() << "\n";
        return exit_numerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const InternalError& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_usage;
}
