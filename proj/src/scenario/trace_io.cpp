#include "agrosim/scenario/trace_io.hpp"

#include <cstdio>

namespace agrosim::scenario {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_csv_header(std::ostream& os, const cosim::TraceSchema& schema) {
    const auto cols = schema.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
}

void write_csv_record(std::ostream& os, const cosim::TraceRecord& rec) {
    os << format_number(rec.t);
    for (const auto* group : {&rec.truth, &rec.monitored, &rec.controlled, &rec.references}) {
        for (double v : *group) os << ',' << format_number(v);
    }
    os << '\n';
}

void write_csv_error(std::ostream& os, double t, const std::string& message) {
    std::string quoted;
    for (char c : message) {
        if (c == '"') quoted += '"';
        quoted += c == '\n' ? ' ' : c;
    }
    os << "error," << format_number(t) << ",\"" << quoted << "\"\n";
}

} // namespace agrosim::scenario
