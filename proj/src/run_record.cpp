#include "onmf/run_record.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "onmf/matrix_market.hpp"

namespace onmf {

namespace {

using nlohmann::json;

json trace_to_json(const IterationTrace& t) {
    json j;
    j["objective"] = t.objective;
    j["inner_counts"] = json::array();
    for (const auto& row : t.inner_counts) {
        j["inner_counts"].push_back({row[0], row[1], row[2]});
    }
    j["kkt_overall"] = t.kkt_overall;
    j["wall_ms"] = t.wall_ms;
    if (t.converged_at) {
        j["converged_at"] = *t.converged_at;
    } else {
        j["converged_at"] = nullptr;
    }
    j["clamp_events"] = t.clamp_events;
    return j;
}

IterationTrace trace_from_json(const json& j) {
    IterationTrace t;
    t.objective = j.at("objective").get<std::vector<double>>();
    for (const auto& row : j.at("inner_counts")) {
        t.inner_counts.push_back({row.at(0).get<std::size_t>(), row.at(1).get<std::size_t>(),
                                  row.at(2).get<std::size_t>()});
    }
    t.kkt_overall = j.at("kkt_overall").get<std::vector<double>>();
    t.wall_ms = j.at("wall_ms").get<std::vector<double>>();
    if (!j.at("converged_at").is_null()) t.converged_at = j.at("converged_at").get<std::size_t>();
    t.clamp_events = j.at("clamp_events").get<std::size_t>();
    return t;
}

json metrics_to_json(const MetricReport& m) {
    return json{{"mutual_information", m.mutual_information},
                {"entropy", m.entropy},
                {"purity", m.purity},
                {"fmeasure", m.fmeasure}};
}

MetricReport metrics_from_json(const json& j) {
    MetricReport m;
    m.mutual_information = j.at("mutual_information").get<double>();
    m.entropy = j.at("entropy").get<double>();
    m.purity = j.at("purity").get<double>();
    m.fmeasure = j.at("fmeasure").get<double>();
    return m;
}

}  // namespace

std::string to_json(const RunRecord& record) {
    json j;
    j["config"] = {{"algorithm", to_string(record.config.algorithm)},
                   {"delta", record.config.delta},
                   {"sigma", record.config.sigma},
                   {"step", record.config.step},
                   {"max_outer_iters", record.config.max_outer_iters},
                   {"max_inner_iters", record.config.max_inner_iters},
                   {"seed", record.config.seed},
                   {"init", record.config.init == InitKind::provided ? "provided"
                                                                     : "uniform_random"}};
    j["hyperparams"] = {{"alpha", record.hyper.alpha},
                        {"beta", record.hyper.beta},
                        {"p", record.hyper.p},
                        {"q", record.hyper.q}};
    j["dataset"] = record.dataset;
    j["trace"] = trace_to_json(record.trace);
    j["doc_metrics"] = record.doc_metrics ? metrics_to_json(*record.doc_metrics) : json(nullptr);
    j["word_metrics"] =
        record.word_metrics ? metrics_to_json(*record.word_metrics) : json(nullptr);
    j["violations"] = record.violations;
    j["started_at"] = record.started_at;
    j["finished_at"] = record.finished_at;
    return j.dump(2);
}

RunRecord run_record_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("run record: ") + e.what());
    }
    RunRecord r;
    const json& cfg = j.at("config");
    const auto algorithm = algorithm_from_string(cfg.at("algorithm").get<std::string>());
    if (!algorithm) {
        throw ParseError("run record: unknown algorithm '" +
                         cfg.at("algorithm").get<std::string>() + "'");
    }
    r.config.algorithm = *algorithm;
    r.config.delta = cfg.at("delta").get<double>();
    r.config.sigma = cfg.at("sigma").get<double>();
    r.config.step = cfg.at("step").get<double>();
    r.config.max_outer_iters = cfg.at("max_outer_iters").get<std::size_t>();
    r.config.max_inner_iters = cfg.at("max_inner_iters").get<std::size_t>();
    r.config.seed = cfg.at("seed").get<std::uint64_t>();
    r.config.init = cfg.at("init").get<std::string>() == "provided" ? InitKind::provided
                                                                    : InitKind::uniform_random;
    const json& hp = j.at("hyperparams");
    r.hyper.alpha = hp.at("alpha").get<double>();
    r.hyper.beta = hp.at("beta").get<double>();
    r.hyper.p = hp.at("p").get<std::size_t>();
    r.hyper.q = hp.at("q").get<std::size_t>();
    r.dataset = j.at("dataset").get<std::string>();
    r.trace = trace_from_json(j.at("trace"));
    if (!j.at("doc_metrics").is_null()) r.doc_metrics = metrics_from_json(j.at("doc_metrics"));
    if (!j.at("word_metrics").is_null()) r.word_metrics = metrics_from_json(j.at("word_metrics"));
    r.violations = j.at("violations").get<std::size_t>();
    r.started_at = j.at("started_at").get<std::string>();
    r.finished_at = j.at("finished_at").get<std::string>();
    return r;
}

void write_run_record(const std::filesystem::path& path, const RunRecord& record) {
    std::ofstream out(path);
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    out << to_json(record) << "\n";
    if (!out) throw ParseError(path.string() + ": write failed");
}

RunRecord read_run_record(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return run_record_from_json(ss.str());
}

void write_trace_csv(const std::filesystem::path& path, const IterationTrace& trace,
                     bool with_timing) {
    std::ofstream out(path);
    if (!out) throw ParseError(path.string() + ": cannot open file for writing");
    out << "iter,objective,inner_b,inner_c,inner_s,kkt,ms\n";
    for (std::size_t k = 0; k < trace.objective.size(); ++k) {
        const auto& inner = trace.inner_counts[k];
        out << k << "," << format_double(trace.objective[k]) << "," << inner[0] << "," << inner[1]
            << "," << inner[2] << "," << format_double(trace.kkt_overall[k]) << ","
            << (with_timing ? format_double(trace.wall_ms[k]) : "0") << "\n";
    }
    if (!out) throw ParseError(path.string() + ": write failed");
}

std::string current_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace onmf
