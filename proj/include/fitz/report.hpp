#pragma once

#include <optional>

#include "fitz/types.hpp"

namespace fitz {

/// The two pairs that violate a checked inequality. For single-point checks
/// both slots hold the same pair; per-check semantics are documented with
/// each operation.
struct PairWitness {
  PrimalDualPair first;
  PrimalDualPair second;
};

/// Outcome of a theorem-derived check.
///
/// Invariants: passed == true iff witness is absent; when failed, margin is
/// the (non-positive) slack of the violated inequality at the witness.
/// A vacuous check (nothing to scan) reports margin = +infinity.
struct CheckReport {
  bool passed = true;
  std::optional<PairWitness> witness;
  double margin = kInfinity;
};

}  // namespace fitz
