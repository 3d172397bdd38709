#pragma once

#include <json.hpp>

#include "kpsd/cone.hpp"
#include "kpsd/extreme.hpp"
#include "kpsd/oracle.hpp"

namespace kpsd {

using json = nlohmann::json;

const char* verdict_name(VerdictTag tag);
const char* reason_name(ExtremeReason reason);
const char* kind_name(CertKind kind);
const char* det_sign_name(DetSign sign);

json to_json(const Tolerances& tol);
json spec_to_json(const ConeSpec& spec);
json matrix_to_json(const SymMatrix& m);
SymMatrix matrix_from_json(const json& j);
json membership_to_json(const MembershipReport& report);
json certificate_to_json(const DecompCertificate& cert);
DecompCertificate certificate_from_json(const json& j);
json face_report_to_json(const FaceReport& report);

/// The classify verdict with its certificate and diagnostics embedded.
json verdict_to_json(const ExtremeVerdict& verdict);

} // namespace kpsd
