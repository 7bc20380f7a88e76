#pragma once

#include "agrosim/cosim/trace.hpp"

#include <ostream>
#include <string>

namespace agrosim::scenario {

/// Trace CSV: header row, `%.9g` numbers, LF line endings.
void write_csv_header(std::ostream& os, const cosim::TraceSchema& schema);
void write_csv_record(std::ostream& os, const cosim::TraceRecord& rec);
/// Marker row closing a trace whose run failed at time `t`.
void write_csv_error(std::ostream& os, double t, const std::string& message);

std::string format_number(double v);

} // namespace agrosim::scenario
