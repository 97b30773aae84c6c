#include "csk/pairwise.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "csk/csv.hpp"
#include "csk/estimators.hpp"

namespace csk {

void check_estimator_compatibility(EstimatorKind kind,
                                   const GeneratorKind& generator) {
    const bool l2_estimator = kind == EstimatorKind::l2sq;
    const bool l2_sketch = generator.tag == GeneratorTag::normal ||
                           generator.tag == GeneratorTag::sparse;
    if (l2_estimator != l2_sketch) {
        fail(errc::estimator_mismatch,
             std::string("estimator ") + estimator_name(kind) +
                 " does not match the sketch generator");
    }
}

PairwiseResult pairwise_estimates(
    const Sketch& sketch, EstimatorKind kind, double lambda,
    const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>&
        pairs) {
    check_estimator_compatibility(kind, sketch.config.kind);
    PairwiseResult result;
    const auto estimate_one = [&](std::size_t i, std::size_t j) {
        PairEstimate row;
        row.i = i;
        row.j = j;
        try {
            const DiffSample diff = diff_sample(sketch, i, j);
            const Estimate est = apply_estimator(kind, diff.x, lambda);
            row.value = est.value;
            row.flagged = est.flagged;
        } catch (const Error& e) {
            row.error = errc_name(e.code());
            ++result.error_count;
        }
        result.rows.push_back(row);
    };
    if (pairs) {
        for (const auto& [i, j] : *pairs) estimate_one(i, j);
    } else {
        for (std::size_t i = 0; i < sketch.n; ++i) {
            for (std::size_t j = i + 1; j < sketch.n; ++j) {
                estimate_one(i, j);
            }
        }
    }
    return result;
}

void write_pairwise_csv(std::ostream& out, const PairwiseResult& result,
                        const std::string& provenance) {
    out << "# cauchysketch pairwise";
    if (!provenance.empty()) out << ' ' << provenance;
    out << '\n';
    out << "i,j,estimate,status\n";
    char buf[40];
    for (const PairEstimate& row : result.rows) {
        out << row.i << ',' << row.j << ',';
        if (!row.error.empty()) {
            out << "nan," << row.error << '\n';
            continue;
        }
        std::snprintf(buf, sizeof buf, "%.12g", row.value);
        out << buf << ',' << (row.flagged ? "all_zero" : "ok") << '\n';
    }
    out << "# rows=" << result.rows.size() << " errors=" << result.error_count
        << '\n';
}

std::vector<std::pair<std::size_t, std::size_t>> load_pairs_csv(
    const std::string& path, char delimiter) {
    const DataMatrix m = load_matrix_csv(path, delimiter, false);
    if (m.cols() != 2) {
        fail(errc::parse, "pair list must have exactly two columns");
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        if (row[0] < 0 || row[1] < 0 || row[0] != std::floor(row[0]) ||
            row[1] != std::floor(row[1])) {
            fail(errc::parse,
                 "pair indices must be nonnegative integers (row " +
                     std::to_string(r) + ")");
        }
        pairs.emplace_back(static_cast<std::size_t>(row[0]),
                           static_cast<std::size_t>(row[1]));
    }
    return pairs;
}

}  // namespace csk
