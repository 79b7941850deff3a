#pragma once

namespace qg {

// Group/representation checks run on integer-built data, so these are
// bug detectors rather than roundoff allowances.
inline constexpr double TOL_REP = 1e-12;
inline constexpr double TOL_CHAR = 1e-12;

// Coupling-condition linear algebra.
inline constexpr double TOL_COUPLING = 1e-10;
inline constexpr double RANK_TOL = 1e-10;  // relative to largest singular value

// Kernel-space extraction.
inline constexpr double KERNEL_SVTOL = 1e-10;  // absolute, entries are O(1)
inline constexpr double TOL_ORTH = 1e-12;

// Spectral scan.
inline constexpr double K_REFINE_TOL = 1e-10;
inline constexpr double MULT_SVTOL = 1e-7;  // relative to largest singular value
inline constexpr double K_MERGE_TOL = 1e-8;
inline constexpr double K_MATCH_TOL = 1e-8;

}  // namespace qg
