#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdm/ebm.hpp"
#include "sdm/matrix.hpp"

// Energy-ordered classification: rows are ranked by model energy, the
// largest gap in the sorted energies marks the next class boundary, and the
// resulting leaves are summarized as 0-1 association rules.
//
// Binarization conventions: a row-level bit is 1 iff the value strictly
// exceeds the global per-feature median; a rule's feature bit is 1 iff the
// leaf's per-feature mean strictly exceeds that median; a prediction bit is
// the per-feature majority of the leaf's row-level bits (ties give 0).

namespace sdm {

struct GapSplit {
    double threshold = 0.0;   // midpoint of the widest gap
    double gap = 0.0;
    std::size_t boundary = 0; // number of sorted energies at or below the threshold
};

// Widest successive gap in sorted order; ties go to the lowest boundary.
// Empty result when every energy is equal.  Throws below 2 elements.
std::optional<GapSplit> max_gap_split(std::span<const double> energies);

// 2^s capped at 2^20, unless an explicit override is supplied.
std::size_t target_class_count(std::size_t s, std::optional<std::size_t> override_k = {});

struct TreeNode {
    double e_lo = 0.0, e_hi = 0.0;       // member energy range
    double threshold = 0.0;              // split point (interior nodes)
    int left = -1, right = -1;
    int class_id = -1;                   // assigned on leaves, ascending energy
    std::vector<std::size_t> members;    // training row indices

    bool is_leaf() const { return left < 0; }
};

struct ClassTree {
    std::vector<TreeNode> nodes;     // nodes[0] is the root
    std::vector<int> leaves;         // node index per class id
    std::vector<double> energies;    // per training row
    double global_lo = 0.0, global_hi = 0.0;
};

// Greedy division: always split the leaf with the widest internal gap, stop
// once the leaf count reaches k_target, every remaining gap falls below
// tau * (global energy range), or only singletons remain.
ClassTree build_tree(const RowMatrix& rows, const EbmModel& model, std::size_t k_target,
                     double tau);

// Same construction from precomputed energies.
ClassTree build_tree_energies(std::vector<double> energies, std::size_t k_target, double tau);

struct AssociationRule {
    std::string bits;        // s-length 0/1 feature pattern
    double e_lo = 0.0;
    double e_hi = 0.0;
    std::string pred_bits;   // s-length 0/1 prediction pattern
    int class_id = 0;
    std::size_t support = 0; // member count
};

std::vector<AssociationRule> extract_rules(const ClassTree& tree, const RowMatrix& rows);

// Rule whose energy range contains the row's energy; when none does, the
// rule with the nearest range midpoint.  Ties go to the lower class id.
const AssociationRule& classify_point(std::span<const AssociationRule> rules,
                                      const EbmModel& model, std::span<const double> row);

// Line format "RULE,<class_id>,<bits>,<e_lo>,<e_hi>,<pred_bits>,<support>",
// reals in 17-significant-digit decimals, '#' comment lines ignored.
void write_rules(std::span<const AssociationRule> rules, const std::string& path);
std::vector<AssociationRule> read_rules(const std::string& path);

}  // namespace sdm
