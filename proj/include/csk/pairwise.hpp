#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csk/projection.hpp"
#include "csk/types.hpp"

namespace csk {

/// Cauchy-family estimators require a cauchy sketch; l2sq requires a normal
/// or sparse one. Throws estimator_mismatch otherwise.
void check_estimator_compatibility(EstimatorKind kind,
                                   const GeneratorKind& generator);

struct PairEstimate {
    std::size_t i = 0, j = 0;
    double value = 0.0;
    bool flagged = false;        // all-zero MLE sample convention
    std::string error;           // nonempty when the estimator failed
};

struct PairwiseResult {
    std::vector<PairEstimate> rows;  // lexicographic (i, j) order
    std::size_t error_count = 0;
};

/// All n(n-1)/2 pairs, or just the requested subset. Per-pair failures are
/// recorded on the row and do not stop the run.
PairwiseResult pairwise_estimates(
    const Sketch& sketch, EstimatorKind kind, double lambda = 0.25,
    const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>&
        pairs = std::nullopt);

void write_pairwise_csv(std::ostream& out, const PairwiseResult& result,
                        const std::string& provenance = {});

/// Two-column CSV of row indices -> pair list.
std::vector<std::pair<std::size_t, std::size_t>> load_pairs_csv(
    const std::string& path, char delimiter = ',');

}  // namespace csk
