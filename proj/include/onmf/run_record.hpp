#ifndef ONMF_RUN_RECORD_HPP_
#define ONMF_RUN_RECORD_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "onmf/clustering.hpp"
#include "onmf/solvers.hpp"

namespace onmf {

/// Everything one experiment run produces besides the factors themselves.
/// JSON serialization round-trips losslessly.
struct RunRecord {
    SolverConfig config;
    Hyperparams hyper;
    std::string dataset;
    IterationTrace trace;
    std::optional<MetricReport> doc_metrics;
    std::optional<MetricReport> word_metrics;
    std::size_t violations = 0;  // objective increases beyond the slack
    std::string started_at;
    std::string finished_at;
};

std::string to_json(const RunRecord& record);
RunRecord run_record_from_json(const std::string& json_text);

void write_run_record(const std::filesystem::path& path, const RunRecord& record);
RunRecord read_run_record(const std::filesystem::path& path);

// Columns: iter,objective,inner_b,inner_c,inner_s,kkt,ms. Row 0 is the
// initial point. The ms column is zero unless with_timing is set; run
// timings always live in the JSON record (wall clock in the CSV would break
// byte-for-byte reproducibility of identical runs).
void write_trace_csv(const std::filesystem::path& path, const IterationTrace& trace,
                     bool with_timing = false);

std::string current_timestamp();

}  // namespace onmf

#endif  // ONMF_RUN_RECORD_HPP_
