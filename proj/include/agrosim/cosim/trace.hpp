#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agrosim::cosim {

/// Column names of the four value groups in a trace. Fixed once an engine is built.
struct TraceSchema {
    std::vector<std::string> truth;
    std::vector<std::string> monitored;
    std::vector<std::string> controlled;
    std::vector<std::string> references;

    /// Header in trace column order: t, truth, monitored, controlled, references.
    std::vector<std::string> columns() const;
    std::size_t width() const;
    std::optional<std::size_t> column(std::string_view name) const;
};

/// One synchronized sample, taken at the start of a DE round.
/// Each group is aligned with the matching name list of the schema.
struct TraceRecord {
    double t = 0.0;
    std::vector<double> truth;
    std::vector<double> monitored;
    std::vector<double> controlled;
    std::vector<double> references;

    /// Value by flat column index (0 is t).
    double at(std::size_t column) const;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Trace {
    TraceSchema schema;
    std::vector<TraceRecord> records;

    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }

    /// Whole column by name; throws std::out_of_range for unknown names.
    std::vector<double> column(std::string_view name) const;
};

} // namespace agrosim::cosim
