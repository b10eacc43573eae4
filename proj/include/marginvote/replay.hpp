// Crowdsourced-label ingestion and replay of delta-margin voting over
// recorded votes: dataset loading/filtering, per-item replays with or
// without replacement, the filter-grid experiment, and the
// theory-vs-experiment comparison.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "marginvote/core.hpp"
#include "marginvote/rng.hpp"

namespace marginvote {

struct LabelRecord {
    std::string worker_id;
    std::string item_id;
    int label = 0; // 0 or 1
    int gold = 0;  // 0 or 1
};

class LabelDataset {
public:
    static LabelDataset from_records(std::vector<LabelRecord> records);

    const std::vector<LabelRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }

    const std::map<std::string, double>& worker_accuracy() const { return worker_accuracy_; }
    const std::map<std::string, double>& item_accuracy() const { return item_accuracy_; }

    // Mean of per-worker accuracies across every recruited worker.
    double pool_accuracy() const { return pool_accuracy_; }

    std::size_t worker_count() const { return worker_accuracy_.size(); }
    std::size_t item_count() const { return item_ids_.size(); }

    // Item ids in sorted order; the replay iteration order.
    const std::vector<std::string>& items() const { return item_ids_; }

    // Per-item correctness bits (label == gold), in record order.
    const std::vector<std::uint8_t>& item_votes(const std::string& item_id) const;

private:
    std::vector<LabelRecord> records_;
    std::map<std::string, double> worker_accuracy_;
    std::map<std::string, double> item_accuracy_;
    std::map<std::string, std::vector<std::uint8_t>> votes_by_item_;
    std::vector<std::string> item_ids_;
    double pool_accuracy_ = 0.0;
};

// CSV schema (header required): worker_id,item_id,label,gold with binary
// label and gold columns. source_name only decorates error messages.
LabelDataset load_labels(std::istream& in, const std::string& source_name = "<stream>");
LabelDataset load_labels_file(const std::string& path);
void save_labels_file(const LabelDataset& dataset, const std::string& path);

// Test-fixture generator: every worker labels every item, correctly with
// independent probability p; gold labels are fair coin flips.
LabelDataset generate_synthetic(double p, int n_workers, int n_items, std::uint64_t seed);

// Keeps workers with accuracy > tau_w and items with accuracy > tau_i,
// judged on the input dataset's maps; the result's maps are recomputed on
// the surviving records. An empty result is legal.
LabelDataset filter_dataset(const LabelDataset& ds, double tau_w, double tau_i);

enum class Replacement { with_replacement, without_replacement };
enum class Consensus { correct, incorrect, unresolved };

const char* to_string(Consensus c);
const char* to_string(Replacement r);

struct ReplayOutcome {
    std::string item_id;
    Consensus consensus = Consensus::unresolved;
    long long votes_cast = 0;
};

// One delta-margin vote over an item's recorded labels. Unresolved is only
// reachable without replacement, when the labels run out first.
ReplayOutcome replay_item(const LabelDataset& ds, const std::string& item_id, long long delta,
                          Replacement replacement, SplitMix64& rng);

struct ReplayConfig {
    long long delta = 2;
    Replacement replacement = Replacement::without_replacement;
    int repetitions = 20;
    std::uint64_t seed = 0;
    double tau_w = 0.0; // worker-accuracy filter, strict lower bound
    double tau_i = 0.0; // item-accuracy filter, strict lower bound
};

struct ReplayRow {
    std::string item_id;
    int repetition = 0;
    Consensus consensus = Consensus::unresolved;
    long long votes_cast = 0;
};

// Filters, then runs config.repetitions replays per surviving item.
std::vector<ReplayRow> run_replay(const LabelDataset& ds, const ReplayConfig& config);

struct GridCell {
    double tau_w = 0.0, tau_i = 0.0;
    long long delta = 0;
    long long items = 0;
    long long replays = 0;
    long long resolved = 0;
    double mean_correct = 0.0;   // over resolved replays
    double mean_votes = 0.0;     // over resolved replays
    double unresolved_rate = 0.0;
    bool empty_setting = false;
};

// Without-replacement replays across a (tau_w, tau_i) x delta lattice; empty
// filter results yield flagged rows rather than disappearing.
std::vector<GridCell> grid_experiment(const LabelDataset& ds,
                                      const std::vector<long long>& delta_set,
                                      const std::vector<std::pair<double, double>>& tau_grid,
                                      int repetitions = 20, std::uint64_t seed = 0,
                                      int threads = 1);

struct TheoryComparisonRow {
    long long delta = 0;
    int experiment = 0;
    double q_exp = 0.0;
    double e_exp = 0.0;
    double q_diff = 0.0; // q_exp - q_th
    double e_diff = 0.0; // e_exp - e_th
};

struct TheoryEntry {
    long long delta = 0;
    double q_th = 0.0;
    double e_th = 0.0;
};

struct TheoryComparison {
    double pool_accuracy = 0.0;
    std::vector<TheoryEntry> theory;       // one per delta
    std::vector<TheoryComparisonRow> rows; // delta-major, experiment-minor
};

// With-replacement replays of the whole item set, repeated `experiments`
// times per delta; theory values use the pool accuracy.
TheoryComparison theory_comparison(const LabelDataset& ds,
                                   const std::vector<long long>& delta_set, int experiments = 100,
                                   std::uint64_t seed = 0, int threads = 1);

} // namespace marginvote
