#ifndef ENTROLAB_EXPERIMENT_HPP
#define ENTROLAB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "entrolab/serialization.hpp"

namespace entrolab {

// Exit codes: 0 success, 1 error, 2 certification unavailable (a math
// outcome, not a failure).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCertificationUnavailable = 2;

// A validated experiment description. `raw` keeps the full JSON for
// hashing; paths are resolved against the config file's directory.
struct ExperimentConfig {
    json raw;
    std::string task;
    std::filesystem::path base_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;
    Limits limits;

    static ExperimentConfig load(const std::filesystem::path& file);
    static ExperimentConfig from_json(json j, std::filesystem::path base_dir);

    std::uint64_t hash() const { return fnv1a64(raw.dump()); }
};

struct SeriesRow {
    std::string label;
    std::size_t size = 0;
    double value_nats = 0.0;
    std::string bound_kind;
};

struct ResultRecord {
    std::string task;
    std::uint64_t config_hash = 0;
    std::string toolkit_version;
    std::vector<SeriesRow> series;
    json details;
    int exit_code = kExitOk;
    // Wall time is reported on stderr only; identical configs must produce
    // byte-identical result files.
    double wall_ms = 0.0;
};

ResultRecord run_experiment(const ExperimentConfig& config);

json result_to_json(const ResultRecord& record);
std::string result_csv(const ResultRecord& record);
// Two-column TSV (x = |F| or index, y = value); throws on an empty series.
std::string plotdata_tsv(const ResultRecord& record);

// Atomically writes result.json and table.csv (and plot.tsv when asked)
// under out_dir.
void write_outputs(const ResultRecord& record, const std::filesystem::path& out_dir,
                   bool emit_plotdata);

} // namespace entrolab

#endif
