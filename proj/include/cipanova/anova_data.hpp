#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cipanova {

/// One-way ANOVA data, stored sorted by group so that rows line up with the
/// design matrices (group 1 units first).
struct AnovaData {
    std::vector<double> responses;
    std::vector<int> groups;  // 0-based, nondecreasing
    std::vector<int> group_sizes;

    [[nodiscard]] int num_groups() const { return static_cast<int>(group_sizes.size()); }
    [[nodiscard]] std::size_t size() const { return responses.size(); }

    /// Stable-sorts by group and validates that every group 0..J−1 is nonempty.
    [[nodiscard]] static AnovaData from_labels(std::vector<int> groups, std::vector<double> responses,
                                               int num_groups);
};

class DataFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvImport {
    AnovaData data;
    /// Original label of each contiguous group, i.e. labels[j] became group j + 1.
    std::vector<std::string> labels;
    std::vector<std::string> warnings;
};

/// Reads `group,response` CSV (header required, columns in any order).
/// Labels are relabeled to contiguous 1..J in numeric order when every label
/// is numeric, lexicographic order otherwise.
[[nodiscard]] CsvImport parse_csv(std::istream& in);
[[nodiscard]] CsvImport ingest_csv(const std::filesystem::path& path);

}  // namespace cipanova
