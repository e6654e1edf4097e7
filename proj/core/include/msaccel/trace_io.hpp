#pragma once

#include <string>
#include <vector>

#include "msaccel/accel.hpp"

namespace msaccel {

// Fixed trace schema, comma separated, '.' decimal, doubles at 17
// significant digits. wall_ms is excluded from determinism comparisons.
inline constexpr const char* kTraceHeader =
    "t,f,gap,A,lambda,lambda_prime,up_flag,E,D,N,hess_evals,lin_solves,hvps,"
    "grad_evals,wall_ms";

inline constexpr const char* kTraceSchemaVersion = "msaccel.trace.v1";

std::string format_double(double v);  // %.17g

std::string trace_to_csv(const std::vector<TraceRecord>& trace);

// Rejects a wrong header or malformed rows with a parse Error.
std::vector<TraceRecord> trace_from_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace msaccel
