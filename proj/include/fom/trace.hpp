#ifndef FOM_TRACE_HPP
#define FOM_TRACE_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fom/vec.hpp"

namespace fom {

struct TraceRecord {
    std::size_t k = 0;
    double f_value = 0.0;
    double grad_norm = 0.0;
    double lambda = 0.0;
    std::uint64_t oracle_queries = 0;  // cumulative
    std::uint64_t wall_ns = 0;         // stays 0 unless timing was requested
};

/// Per-iteration record of one method run plus the aggregates certificates
/// and rate fits need.
struct RunTrace {
    std::vector<TraceRecord> records;
    std::vector<Vector> iterates;   // kept only on request (huge-n runs skip it)
    std::vector<Vector> gradients;  // kept only when certificates are wanted
    std::vector<double> lambdas;    // weights aligned with iterates/gradients

    Vector averaged;          // running lambda-weighted average of the iterates
    Vector last;              // final iterate
    double sum_lambda = 0.0;  // S_N
    std::uint64_t seed = 0;
    std::uint64_t total_queries = 0;
    std::uint64_t coordinate_touches = 0;
    double wall_seconds = 0.0;
    bool budget_exhausted = false;
    std::string method;

    std::size_t iterations() const { return records.empty() ? 0 : records.back().k; }

    double final_value() const {
        return records.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : records.back().f_value;
    }
};

inline void write_trace_csv(std::ostream& out, const RunTrace& t,
                            const std::string& preamble = "") {
    if (!preamble.empty()) out << preamble;
    out << "k,f_value,grad_norm,lambda_k,oracle_queries,wall_ns\n";
    out << std::setprecision(17);
    for (const auto& r : t.records)
        out << r.k << ',' << r.f_value << ',' << r.grad_norm << ',' << r.lambda << ','
            << r.oracle_queries << ',' << r.wall_ns << '\n';
}

inline void save_trace_csv(const std::string& path, const RunTrace& t,
                           const std::string& preamble = "") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_trace_csv(out, t, preamble);
}

struct ParsedTrace {
    std::vector<TraceRecord> records;
    std::vector<std::string> comments;
};

inline ParsedTrace read_trace_csv(std::istream& in) {
    ParsedTrace t;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line);
            continue;
        }
        if (!header_seen) {  // fixed header row
            header_seen = true;
            continue;
        }
        TraceRecord r;
        char c;
        std::istringstream ss(line);
        ss >> r.k >> c >> r.f_value >> c >> r.grad_norm >> c >> r.lambda >> c >>
            r.oracle_queries >> c >> r.wall_ns;
        if (ss.fail()) throw std::runtime_error("trace csv: bad row: " + line);
        t.records.push_back(r);
    }
    return t;
}

}  // namespace fom

#endif  // FOM_TRACE_HPP
