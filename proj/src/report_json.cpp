#include "kpsd/report_json.hpp"

namespace kpsd {

const char* verdict_name(VerdictTag tag) {
    switch (tag) {
    case VerdictTag::NotMember: return "not_member";
    case VerdictTag::ZeroMatrix: return "zero";
    case VerdictTag::Extreme: return "extreme";
    case VerdictTag::NotExtreme: return "not_extreme";
    case VerdictTag::Unknown: return "unknown";
    }
    return "?";
}

const char* reason_name(ExtremeReason reason) {
    switch (reason) {
    case ExtremeReason::AllBlocksRank1: return "all_blocks_rank1";
    case ExtremeReason::Kn1RankCondition: return "kn1_rank_condition";
    case ExtremeReason::OracleFaceDim1: return "oracle_face_dim1";
    }
    return "?";
}

const char* kind_name(CertKind kind) {
    switch (kind) {
    case CertKind::Perturbation2x2: return "perturbation_2x2";
    case CertKind::RankOnePerturbation: return "rank_one_perturbation";
    case CertKind::PsdConicSplit: return "psd_conic_split";
    case CertKind::FaceDirection: return "face_direction";
    }
    return "?";
}

const char* det_sign_name(DetSign sign) {
    switch (sign) {
    case DetSign::Negative: return "negative";
    case DetSign::Zero: return "zero";
    case DetSign::Positive: return "positive";
    }
    return "?";
}

json to_json(const Tolerances& tol) {
    return json{{"eig_psd", tol.eig_psd}, {"rank_rel", tol.rank_rel}, {"det_zero", tol.det_zero}};
}

json spec_to_json(const ConeSpec& spec) {
    return json{{"n", spec.n}, {"k", spec.k}, {"tol", to_json(spec.tol)}};
}

json matrix_to_json(const SymMatrix& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.dim()) * m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) data.push_back(m(i, j));
    return json{{"n", m.dim()}, {"data", data}};
}

SymMatrix matrix_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (n < 1 || data.size() != static_cast<std::size_t>(n) * n)
        throw ArgumentError("matrix json: bad dimensions");
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j2 = 0; j2 < n; ++j2) rows[i][j2] = data[static_cast<std::size_t>(i) * n + j2];
    return SymMatrix::from_rows(rows);
}

json membership_to_json(const MembershipReport& report) {
    json violations = json::array();
    for (const auto& [block, lam] : report.violations)
        violations.push_back(json{{"indices", block.indices}, {"min_eigenvalue", lam}});
    return json{{"member", report.member},
                {"blocks_checked", report.blocks_checked},
                {"violations", violations}};
}

json certificate_to_json(const DecompCertificate& cert) {
    json j{{"kind", kind_name(cert.kind)},
           {"a", matrix_to_json(cert.a)},
           {"b", matrix_to_json(cert.b)}};
    switch (cert.kind) {
    case CertKind::Perturbation2x2:
        j["i"] = cert.i;
        j["j"] = cert.j;
        j["eps"] = cert.eps;
        break;
    case CertKind::RankOnePerturbation:
        j["u"] = cert.u;
        j["eps"] = cert.eps;
        break;
    case CertKind::FaceDirection:
        j["eps"] = cert.eps;
        break;
    case CertKind::PsdConicSplit:
        break;
    }
    return j;
}

DecompCertificate certificate_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    DecompCertificate cert{matrix_from_json(j.at("a")), matrix_from_json(j.at("b")),
                           CertKind::PsdConicSplit};
    if (kind == "perturbation_2x2") {
        cert.kind = CertKind::Perturbation2x2;
        cert.i = j.at("i").get<int>();
        cert.j = j.at("j").get<int>();
        cert.eps = j.at("eps").get<double>();
    } else if (kind == "rank_one_perturbation") {
        cert.kind = CertKind::RankOnePerturbation;
        cert.u = j.at("u").get<std::vector<double>>();
        cert.eps = j.at("eps").get<double>();
    } else if (kind == "face_direction") {
        cert.kind = CertKind::FaceDirection;
        cert.eps = j.at("eps").get<double>();
    } else if (kind != "psd_conic_split") {
        throw ArgumentError("certificate json: unknown kind '" + kind + "'");
    }
    return cert;
}

json face_report_to_json(const FaceReport& report) {
    json active = json::array();
    for (const auto& [block, kernel] : report.active_blocks)
        active.push_back(json{{"indices", block.indices},
                              {"kernel_dim", kernel.size()},
                              {"kernel", kernel}});
    json basis = json::array();
    for (const SymMatrix& b : report.basis) basis.push_back(matrix_to_json(b));
    return json{{"dimension", report.dimension},
                {"constraint_count", report.constraint_count},
                {"active_blocks", active},
                {"basis", basis}};
}

json verdict_to_json(const ExtremeVerdict& verdict) {
    json j{{"verdict", verdict_name(verdict.tag)}};
    if (verdict.reason) j["reason"] = reason_name(*verdict.reason);
    if (verdict.certificate) j["certificate"] = certificate_to_json(*verdict.certificate);
    if (verdict.membership_report) j["membership"] = membership_to_json(*verdict.membership_report);

    json diag = json::object();
    if (verdict.kn1) {
        diag["block_ranks"] = verdict.kn1->block_ranks;
        diag["det_sign"] = det_sign_name(verdict.kn1->det);
        diag["branch"] = std::string(1, verdict.kn1->branch);
    }
    if (verdict.face_dimension) diag["face_dimension"] = *verdict.face_dimension;
    if (verdict.face_dim_hint) diag["face_dim_hint"] = *verdict.face_dim_hint;
    if (!diag.empty()) j["diagnostics"] = diag;
    return j;
}

} // namespace kpsd
