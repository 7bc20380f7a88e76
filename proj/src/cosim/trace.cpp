#include "agrosim/cosim/trace.hpp"

#include <stdexcept>

namespace agrosim::cosim {

std::vector<std::string> TraceSchema::columns() const {
    std::vector<std::string> out;
    out.reserve(width());
    out.emplace_back("t");
    for (const auto* group : {&truth, &monitored, &controlled, &references}) {
        out.insert(out.end(), group->begin(), group->end());
    }
    return out;
}

std::size_t TraceSchema::width() const {
    return 1 + truth.size() + monitored.size() + controlled.size() + references.size();
}

std::optional<std::size_t> TraceSchema::column(std::string_view name) const {
    const auto cols = columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == name) return i;
    }
    return std::nullopt;
}

double TraceRecord::at(std::size_t column) const {
    if (column == 0) return t;
    --column;
    for (const auto* group : {&truth, &monitored, &controlled, &references}) {
        if (column < group->size()) return (*group)[column];
        column -= group->size();
    }
    throw std::out_of_range("trace column index");
}

std::vector<double> Trace::column(std::string_view name) const {
    const auto idx = schema.column(name);
    if (!idx) throw std::out_of_range("unknown trace column: " + std::string(name));
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.at(*idx));
    return out;
}

} // namespace agrosim::cosim
