#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kpsd/cone.hpp"
#include "kpsd/extreme.hpp"
#include "kpsd/symmat.hpp"

namespace kpsd {

/// Output of the face-dimension oracle: the span of the minimal face of
/// the cone at M. M is extreme iff dimension == 1.
struct FaceReport {
    int dimension = 0;
    std::vector<SymMatrix> basis; ///< spans the face subspace
    /// blocks that contributed constraints, with an orthonormal kernel
    /// basis per block
    std::vector<std::pair<IndexSet, std::vector<std::vector<double>>>> active_blocks;
    long long constraint_count = 0; ///< scalar equations before elimination
};

/// Ground-truth extremeness test at desk scale. For every singular k x k
/// block M_I with kernel vector v, a direction P keeps M +- tP in the cone
/// for small t iff P_I v = 0; the dimension of that linear system's null
/// space is the dimension of the minimal face's span.
FaceReport face_dimension(const SymMatrix& m, const ConeSpec& spec);

/// Converts a face of dimension >= 2 into a decomposition certificate by
/// line-searching along a face direction orthogonal to M.
DecompCertificate decomposition_from_face(const SymMatrix& m, const ConeSpec& spec,
                                          const FaceReport& report);

/// Randomized second opinion: random symmetric directions filtered through
/// the active-block kernel conditions, then line-searched. Returns the
/// first replay-verified certificate, or nothing after `trials` attempts.
std::optional<DecompCertificate> decomposition_search(const SymMatrix& m, const ConeSpec& spec,
                                                      int trials, std::uint64_t seed);

} // namespace kpsd
