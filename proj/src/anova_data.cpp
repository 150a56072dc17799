#include "cipanova/anova_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>

namespace cipanova {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(const std::string& cell) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

AnovaData AnovaData::from_labels(std::vector<int> groups, std::vector<double> responses, int num_groups) {
    if (groups.size() != responses.size()) {
        throw std::invalid_argument("group and response columns differ in length");
    }
    if (num_groups < 1) {
        throw std::invalid_argument("need at least one group");
    }
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return groups[a] < groups[b]; });
    AnovaData data;
    data.group_sizes.assign(static_cast<std::size_t>(num_groups), 0);
    for (std::size_t i : order) {
        const int g = groups[i];
        if (g < 0 || g >= num_groups) {
            throw std::invalid_argument("group label out of range");
        }
        data.groups.push_back(g);
        data.responses.push_back(responses[i]);
        ++data.group_sizes[static_cast<std::size_t>(g)];
    }
    for (int g = 0; g < num_groups; ++g) {
        if (data.group_sizes[static_cast<std::size_t>(g)] == 0) {
            throw DataFormatError("group " + std::to_string(g + 1) + " has no observations");
        }
    }
    return data;
}

CsvImport parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> group_col;
    std::optional<std::size_t> response_col;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto header = split_commas(line);
        columns = header.size();
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == "group") {
                group_col = c;
            } else if (header[c] == "response") {
                response_col = c;
            }
        }
        break;
    }
    if (!group_col || !response_col) {
        throw DataFormatError("CSV header must name the columns 'group' and 'response'");
    }

    std::vector<std::string> raw_labels;
    std::vector<double> responses;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_commas(line);
        if (cells.size() != columns) {
            throw DataFormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                                  " columns, found " + std::to_string(cells.size()));
        }
        const auto value = parse_number(cells[*response_col]);
        if (!value || !std::isfinite(*value)) {
            throw DataFormatError("line " + std::to_string(line_no) + ": response '" + cells[*response_col] +
                                  "' is not a number");
        }
        if (cells[*group_col].empty()) {
            throw DataFormatError("line " + std::to_string(line_no) + ": empty group label");
        }
        raw_labels.push_back(cells[*group_col]);
        responses.push_back(*value);
    }
    if (responses.empty()) {
        throw DataFormatError("CSV contains no data rows");
    }

    bool all_numeric = true;
    for (const auto& label : raw_labels) {
        all_numeric = all_numeric && parse_number(label).has_value();
    }
    std::vector<std::string> distinct = raw_labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (all_numeric) {
        std::stable_sort(distinct.begin(), distinct.end(),
                         [](const std::string& a, const std::string& b) { return *parse_number(a) < *parse_number(b); });
    }

    CsvImport out;
    std::map<std::string, int> index;
    for (std::size_t j = 0; j < distinct.size(); ++j) {
        index[distinct[j]] = static_cast<int>(j);
        out.labels.push_back(distinct[j]);
        const std::string expected = std::to_string(j + 1);
        const bool same = all_numeric ? (*parse_number(distinct[j]) == static_cast<double>(j + 1))
                                      : distinct[j] == expected;
        if (!same) {
            out.warnings.push_back("group label '" + distinct[j] + "' relabeled to " + expected);
        }
    }
    std::vector<int> groups;
    groups.reserve(raw_labels.size());
    for (const auto& label : raw_labels) {
        groups.push_back(index.at(label));
    }
    out.data = AnovaData::from_labels(std::move(groups), std::move(responses), static_cast<int>(distinct.size()));
    return out;
}

CsvImport ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataFormatError("cannot open data file '" + path.string() + "'");
    }
    return parse_csv(in);
}

}  // namespace cipanova
