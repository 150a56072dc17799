#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cipanova {

/// Raised for any malformed or inconsistent constraint string.
class ModelSpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A model over J group means: a partition of the groups into equality
/// classes plus a strict partial order over the classes.
///
/// Group indices are 0-based internally; the DSL and printed form are 1-based
/// (`mu1` is group 0). Classes are sorted by their lowest member, so class 0
/// always contains group 0 and serves as the baseline (intercept) class.
struct ConstraintModel {
    std::string name;
    int num_groups = 0;
    std::vector<std::vector<int>> classes;
    /// (a, b) means mean(class a) < mean(class b). Stored transitively closed
    /// and sorted.
    std::vector<std::pair<int, int>> order;

    [[nodiscard]] int num_classes() const { return static_cast<int>(classes.size()); }
    [[nodiscard]] bool is_null() const { return classes.size() == 1 && order.empty(); }
    [[nodiscard]] bool is_encompassing() const {
        return num_classes() == num_groups && order.empty();
    }
    [[nodiscard]] bool has_inequalities() const { return !order.empty(); }

    friend bool operator==(const ConstraintModel& a, const ConstraintModel& b) {
        return a.num_groups == b.num_groups && a.classes == b.classes && a.order == b.order;
    }
};

/// Encompassing design of a model: equality classes kept, order dropped.
struct EncompassingDesign {
    int num_groups = 0;
    /// Location parameters: intercept plus one δ per non-baseline class.
    int q = 0;
    std::vector<int> class_of_group;
    /// 1-based lowest original group index of each non-baseline class, i.e.
    /// the subscript of the corresponding δ.
    std::vector<int> delta_labels;

    [[nodiscard]] int delta_dim() const { return q - 1; }
};

/// Parses e.g. "mu2 < mu1 < mu4 < {mu3 = mu5}" for `num_groups` groups.
///
/// Grammar: comma-separated chains; a chain is terms joined by `<`, `>` or
/// `=`; a term is `muK`, a brace equality group `{muA = muB}` or a brace set
/// `{muA, muB}` whose members are related pairwise to the neighbouring term.
/// Groups that are never mentioned become free singletons.
[[nodiscard]] ConstraintModel parse_model_spec(std::string_view text, int num_groups,
                                               std::string name = {});

/// Canonical DSL text; parsing it back yields an identical model.
[[nodiscard]] std::string to_spec_string(const ConstraintModel& model);

[[nodiscard]] EncompassingDesign encompassing_of(const ConstraintModel& model);

/// n×q design: an intercept column, then one indicator column per non-baseline
/// class. Rows are ordered group 1 units, group 2 units, and so on.
[[nodiscard]] Eigen::MatrixXd build_design(const EncompassingDesign& design,
                                           std::span<const int> group_sizes);

/// True iff every order relation holds strictly on the collapsed means, with
/// the baseline class at 0 and class c at delta[c - 1].
[[nodiscard]] bool region_contains(const ConstraintModel& model, std::span<const double> delta);

}  // namespace cipanova
