#include "sdm/phase_tree.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "sdm/errors.hpp"
#include "sdm/real_text.hpp"

namespace sdm {

std::optional<GapSplit> max_gap_split(std::span<const double> energies) {
    if (energies.size() < 2) throw validation_error("max_gap_split: need at least 2 energies");
    std::vector<double> sorted(energies.begin(), energies.end());
    std::sort(sorted.begin(), sorted.end());

    GapSplit best;
    bool found = false;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const double gap = sorted[i + 1] - sorted[i];
        if (gap > best.gap) {
            best.gap = gap;
            best.threshold = sorted[i] + gap / 2.0;
            best.boundary = i + 1;
            found = true;
        }
    }
    if (!found) return std::nullopt;  // all energies equal
    return best;
}

std::size_t target_class_count(std::size_t s, std::optional<std::size_t> override_k) {
    if (s < 1) throw validation_error("target_class_count: s must be >= 1");
    if (override_k) {
        if (*override_k < 1) throw validation_error("target_class_count: override must be >= 1");
        return *override_k;
    }
    constexpr std::size_t kCap = std::size_t{1} << 20;
    if (s >= 20) return kCap;
    return std::size_t{1} << s;
}

namespace {

struct CandidateSplit {
    std::size_t node = 0;
    GapSplit split;
};

// widest-gap split of one leaf's members, if it has one
std::optional<GapSplit> leaf_split(const ClassTree& tree, const TreeNode& node) {
    if (node.members.size() < 2) return std::nullopt;
    std::vector<double> vals(node.members.size());
    for (std::size_t i = 0; i < node.members.size(); ++i)
        vals[i] = tree.energies[node.members[i]];
    return max_gap_split(vals);
}

}  // namespace

ClassTree build_tree_energies(std::vector<double> energies, std::size_t k_target, double tau) {
    if (energies.empty()) throw validation_error("build_tree: no rows");
    if (k_target < 1) throw validation_error("build_tree: k_target must be >= 1");
    if (!(tau >= 0.0 && tau < 1.0)) throw validation_error("build_tree: tau must be in [0,1)");

    ClassTree tree;
    tree.energies = std::move(energies);
    tree.global_lo = *std::min_element(tree.energies.begin(), tree.energies.end());
    tree.global_hi = *std::max_element(tree.energies.begin(), tree.energies.end());
    const double gap_floor = tau * (tree.global_hi - tree.global_lo);

    TreeNode root;
    root.e_lo = tree.global_lo;
    root.e_hi = tree.global_hi;
    root.members.resize(tree.energies.size());
    for (std::size_t i = 0; i < tree.energies.size(); ++i) root.members[i] = i;
    tree.nodes.push_back(std::move(root));

    std::vector<CandidateSplit> candidates;
    if (auto s = leaf_split(tree, tree.nodes[0])) candidates.push_back({0, *s});

    std::size_t leaf_count = 1;
    while (leaf_count < k_target && !candidates.empty()) {
        // widest gap first; ties go to the older node
        std::size_t best = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i) {
            if (candidates[i].split.gap > candidates[best].split.gap ||
                (candidates[i].split.gap == candidates[best].split.gap &&
                 candidates[i].node < candidates[best].node))
                best = i;
        }
        if (candidates[best].split.gap < gap_floor || candidates[best].split.gap <= 0.0) break;

        const CandidateSplit chosen = candidates[best];
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));

        TreeNode lo_child, hi_child;
        const double thr = chosen.split.threshold;
        for (std::size_t idx : tree.nodes[chosen.node].members) {
            (tree.energies[idx] <= thr ? lo_child : hi_child).members.push_back(idx);
        }
        auto span_of = [&](TreeNode& n) {
            n.e_lo = std::numeric_limits<double>::infinity();
            n.e_hi = -std::numeric_limits<double>::infinity();
            for (std::size_t idx : n.members) {
                n.e_lo = std::min(n.e_lo, tree.energies[idx]);
                n.e_hi = std::max(n.e_hi, tree.energies[idx]);
            }
        };
        span_of(lo_child);
        span_of(hi_child);

        const int lo_idx = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(std::move(lo_child));
        const int hi_idx = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(std::move(hi_child));
        tree.nodes[chosen.node].threshold = thr;
        tree.nodes[chosen.node].left = lo_idx;
        tree.nodes[chosen.node].right = hi_idx;
        ++leaf_count;

        for (int child : {lo_idx, hi_idx})
            if (auto s = leaf_split(tree, tree.nodes[static_cast<std::size_t>(child)]))
                candidates.push_back({static_cast<std::size_t>(child), *s});
    }

    // class ids in ascending energy order
    std::vector<int> leaf_nodes;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        if (tree.nodes[i].is_leaf()) leaf_nodes.push_back(static_cast<int>(i));
    std::sort(leaf_nodes.begin(), leaf_nodes.end(), [&](int a, int b) {
        return tree.nodes[static_cast<std::size_t>(a)].e_lo <
               tree.nodes[static_cast<std::size_t>(b)].e_lo;
    });
    for (std::size_t id = 0; id < leaf_nodes.size(); ++id)
        tree.nodes[static_cast<std::size_t>(leaf_nodes[id])].class_id = static_cast<int>(id);
    tree.leaves = std::move(leaf_nodes);
    return tree;
}

ClassTree build_tree(const RowMatrix& rows, const EbmModel& model, std::size_t k_target,
                     double tau) {
    return build_tree_energies(batch_energies(model, rows), k_target, tau);
}

std::vector<AssociationRule> extract_rules(const ClassTree& tree, const RowMatrix& rows) {
    if (rows.n_rows != tree.energies.size())
        throw validation_error("extract_rules: row count does not match tree");
    const std::size_t s = rows.n_cols;

    // global per-feature medians
    std::vector<double> median(s);
    {
        std::vector<double> col(rows.n_rows);
        for (std::size_t j = 0; j < s; ++j) {
            for (std::size_t i = 0; i < rows.n_rows; ++i) col[i] = rows.at(i, j);
            std::sort(col.begin(), col.end());
            const std::size_t mid = rows.n_rows / 2;
            median[j] = (rows.n_rows % 2 != 0) ? col[mid] : (col[mid - 1] + col[mid]) / 2.0;
        }
    }

    std::vector<AssociationRule> rules(tree.leaves.size());
    for (std::size_t id = 0; id < tree.leaves.size(); ++id) {
        const TreeNode& leaf = tree.nodes[static_cast<std::size_t>(tree.leaves[id])];
        if (leaf.members.empty()) throw validation_error("extract_rules: empty leaf");
        AssociationRule& rule = rules[id];
        rule.class_id = leaf.class_id;
        rule.support = leaf.members.size();
        rule.e_lo = leaf.e_lo;
        rule.e_hi = leaf.e_hi;
        rule.bits.assign(s, '0');
        rule.pred_bits.assign(s, '0');
        for (std::size_t j = 0; j < s; ++j) {
            double mean = 0.0;
            std::size_t ones = 0;
            for (std::size_t idx : leaf.members) {
                mean += rows.at(idx, j);
                if (rows.at(idx, j) > median[j]) ++ones;
            }
            mean /= static_cast<double>(leaf.members.size());
            if (mean > median[j]) rule.bits[j] = '1';
            if (2 * ones > leaf.members.size()) rule.pred_bits[j] = '1';
        }
    }
    return rules;
}

const AssociationRule& classify_point(std::span<const AssociationRule> rules,
                                      const EbmModel& model, std::span<const double> row) {
    if (rules.empty()) throw validation_error("classify_point: empty rule list");
    const double energy = ebm_energy(model, row);

    const AssociationRule* contained = nullptr;
    for (const auto& r : rules) {
        if (energy >= r.e_lo && energy <= r.e_hi &&
            (!contained || r.class_id < contained->class_id))
            contained = &r;
    }
    if (contained) return *contained;

    const AssociationRule* nearest = &rules[0];
    double best_dist = std::fabs(energy - (rules[0].e_lo + rules[0].e_hi) / 2.0);
    for (const auto& r : rules.subspan(1)) {
        const double dist = std::fabs(energy - (r.e_lo + r.e_hi) / 2.0);
        if (dist < best_dist || (dist == best_dist && r.class_id < nearest->class_id)) {
            best_dist = dist;
            nearest = &r;
        }
    }
    return *nearest;
}

namespace {

bool valid_bits(std::string_view bits) {
    if (bits.empty()) return false;
    for (char ch : bits)
        if (ch != '0' && ch != '1') return false;
    return true;
}

}  // namespace

void write_rules(std::span<const AssociationRule> rules, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    for (const auto& r : rules) {
        out << "RULE," << r.class_id << ',' << r.bits << ',' << format_real17(r.e_lo) << ','
            << format_real17(r.e_hi) << ',' << r.pred_bits << ',' << r.support << '\n';
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

std::vector<AssociationRule> read_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "' for reading");

    std::vector<AssociationRule> rules;
    std::string line;
    std::size_t line_no = 0;
    std::size_t s = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string at = "rules file line " + std::to_string(line_no);

        auto cells = split_csv(line);
        if (cells.size() != 7 || cells[0] != "RULE")
            throw validation_error(at + ": expected 7 RULE fields");
        auto class_id = parse_int(cells[1]);
        auto e_lo = parse_real(cells[3]);
        auto e_hi = parse_real(cells[4]);
        auto support = parse_int(cells[6]);
        if (!class_id) throw validation_error(at + ": bad class id");
        if (!valid_bits(cells[2]) || !valid_bits(cells[5]))
            throw validation_error(at + ": bit fields must be non-empty 0/1 strings");
        if (!e_lo || !e_hi) throw validation_error(at + ": unparseable energy bound");
        if (*e_lo > *e_hi) throw validation_error(at + ": energy range inverted");
        if (!support || *support < 0) throw validation_error(at + ": bad support count");
        if (cells[2].size() != cells[5].size())
            throw validation_error(at + ": bits and prediction bits differ in length");
        if (s == 0) s = cells[2].size();
        else if (cells[2].size() != s)
            throw validation_error(at + ": feature count differs from earlier rules");

        AssociationRule r;
        r.class_id = static_cast<int>(*class_id);
        r.bits = std::string(cells[2]);
        r.e_lo = *e_lo;
        r.e_hi = *e_hi;
        r.pred_bits = std::string(cells[5]);
        r.support = static_cast<std::size_t>(*support);
        rules.push_back(std::move(r));
    }
    return rules;
}

}  // namespace sdm
