#include "marginvote/replay.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "marginvote/closed_form.hpp"
#include "marginvote/montecarlo.hpp"
#include "parallel.hpp"

namespace marginvote {

namespace {

void require_binary(int value, const char* field) {
    if (value != 0 && value != 1)
        throw ValidationError(std::string(field) + " must be 0 or 1, got " +
                              std::to_string(value));
}

} // namespace

LabelDataset LabelDataset::from_records(std::vector<LabelRecord> records) {
    LabelDataset ds;
    std::set<std::pair<std::string, std::string>> seen;
    std::map<std::string, std::pair<long long, long long>> worker_counts; // correct, total
    std::map<std::string, std::pair<long long, long long>> item_counts;

    for (const auto& r : records) {
        require_binary(r.label, "label");
        require_binary(r.gold, "gold");
        if (r.worker_id.empty() || r.item_id.empty())
            throw ValidationError("worker_id and item_id must be non-empty");
        if (!seen.emplace(r.worker_id, r.item_id).second)
            throw ValidationError("duplicate vote for (worker=" + r.worker_id +
                                  ", item=" + r.item_id + ")");
        const long long correct = r.label == r.gold ? 1 : 0;
        auto& wc = worker_counts[r.worker_id];
        wc.first += correct;
        wc.second += 1;
        auto& ic = item_counts[r.item_id];
        ic.first += correct;
        ic.second += 1;
        ds.votes_by_item_[r.item_id].push_back(static_cast<std::uint8_t>(correct));
    }

    for (const auto& [worker, counts] : worker_counts)
        ds.worker_accuracy_[worker] =
            static_cast<double>(counts.first) / static_cast<double>(counts.second);
    for (const auto& [item, counts] : item_counts)
        ds.item_accuracy_[item] =
            static_cast<double>(counts.first) / static_cast<double>(counts.second);
    for (const auto& [item, votes] : ds.votes_by_item_) ds.item_ids_.push_back(item);

    if (!ds.worker_accuracy_.empty()) {
        double sum = 0.0;
        for (const auto& [worker, accuracy] : ds.worker_accuracy_) sum += accuracy;
        ds.pool_accuracy_ = sum / static_cast<double>(ds.worker_accuracy_.size());
    }
    ds.records_ = std::move(records);
    return ds;
}

const std::vector<std::uint8_t>& LabelDataset::item_votes(const std::string& item_id) const {
    const auto it = votes_by_item_.find(item_id);
    if (it == votes_by_item_.end())
        throw ValidationError("unknown item id: " + item_id);
    return it->second;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

int parse_binary_field(const std::string& text, const char* field, long long line_no,
                       const std::string& source) {
    if (text == "0") return 0;
    if (text == "1") return 1;
    throw ParseError(source + ":" + std::to_string(line_no) + ": " + field +
                     " must be 0 or 1, got '" + text + "'");
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace

LabelDataset load_labels(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(source_name + ":1: empty file, expected header worker_id,item_id,label,gold");
    if (strip_cr(line) != "worker_id,item_id,label,gold")
        throw ParseError(source_name + ":1: expected header worker_id,item_id,label,gold, got '" +
                         strip_cr(line) + "'");
    std::vector<LabelRecord> records;
    long long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw ParseError(source_name + ":" + std::to_string(line_no) + ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        LabelRecord r;
        r.worker_id = fields[0];
        r.item_id = fields[1];
        r.label = parse_binary_field(fields[2], "label", line_no, source_name);
        r.gold = parse_binary_field(fields[3], "gold", line_no, source_name);
        records.push_back(std::move(r));
    }
    return LabelDataset::from_records(std::move(records));
}

LabelDataset load_labels_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open labels file: " + path);
    return load_labels(in, path);
}

void save_labels_file(const LabelDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write labels file: " + path);
    out << "worker_id,item_id,label,gold\n";
    for (const auto& r : dataset.records())
        out << r.worker_id << ',' << r.item_id << ',' << r.label << ',' << r.gold << '\n';
}

LabelDataset generate_synthetic(double p, int n_workers, int n_items, std::uint64_t seed) {
    WorkerAccuracy accuracy(p); // validates the range
    if (n_workers < 1 || n_items < 1)
        throw ValidationError("synthetic dataset needs at least one worker and one item");

    const auto id_of = [](const char* prefix, int index, int count) {
        int width = 1;
        for (int c = count - 1; c >= 10; c /= 10) ++width;
        std::string digits = std::to_string(index);
        return std::string(prefix) +
               std::string(static_cast<size_t>(width) - std::min<size_t>(width, digits.size()), '0') +
               digits;
    };

    SplitMix64 gold_rng(derive_stream(seed, 0));
    std::vector<int> gold(static_cast<size_t>(n_items));
    for (auto& g : gold) g = gold_rng.next_unit() < 0.5 ? 0 : 1;

    std::vector<LabelRecord> records;
    records.reserve(static_cast<size_t>(n_workers) * static_cast<size_t>(n_items));
    for (int w = 0; w < n_workers; ++w) {
        SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(w) + 1));
        for (int i = 0; i < n_items; ++i) {
            const bool correct = rng.next_unit() < accuracy.value();
            LabelRecord r;
            r.worker_id = id_of("w", w, n_workers);
            r.item_id = id_of("i", i, n_items);
            r.gold = gold[static_cast<size_t>(i)];
            r.label = correct ? r.gold : 1 - r.gold;
            records.push_back(std::move(r));
        }
    }
    return LabelDataset::from_records(std::move(records));
}

LabelDataset filter_dataset(const LabelDataset& ds, double tau_w, double tau_i) {
    if (!(tau_w >= 0.0 && tau_w <= 1.0 && tau_i >= 0.0 && tau_i <= 1.0))
        throw ValidationError("filter thresholds must lie in [0,1]");
    std::vector<LabelRecord> kept;
    for (const auto& r : ds.records()) {
        if (ds.worker_accuracy().at(r.worker_id) > tau_w &&
            ds.item_accuracy().at(r.item_id) > tau_i)
            kept.push_back(r);
    }
    return LabelDataset::from_records(std::move(kept));
}

const char* to_string(Consensus c) {
    switch (c) {
        case Consensus::correct: return "correct";
        case Consensus::incorrect: return "incorrect";
        case Consensus::unresolved: return "unresolved";
    }
    return "unknown";
}

const char* to_string(Replacement r) {
    return r == Replacement::with_replacement ? "with" : "without";
}

ReplayOutcome replay_item(const LabelDataset& ds, const std::string& item_id, long long delta,
                          Replacement replacement, SplitMix64& rng) {
    if (delta < 1) throw ValidationError("replay threshold must be >= 1");
    const auto& votes = ds.item_votes(item_id);
    const auto n = static_cast<std::uint64_t>(votes.size());

    ReplayOutcome outcome;
    outcome.item_id = item_id;
    long long lead = 0;

    if (replacement == Replacement::with_replacement) {
        while (std::llabs(lead) < delta) {
            if (outcome.votes_cast >= kWalkStepCap)
                throw SimulationError("replay exceeded the step cap on item " + item_id);
            lead += votes[static_cast<size_t>(rng.next_below(n))] ? 1 : -1;
            ++outcome.votes_cast;
        }
    } else {
        // Partial Fisher-Yates: draw without repeating a recorded vote.
        std::vector<std::uint32_t> order(votes.size());
        std::iota(order.begin(), order.end(), 0u);
        for (std::uint64_t t = 0; t < n && std::llabs(lead) < delta; ++t) {
            const std::uint64_t j = t + rng.next_below(n - t);
            std::swap(order[static_cast<size_t>(t)], order[static_cast<size_t>(j)]);
            lead += votes[order[static_cast<size_t>(t)]] ? 1 : -1;
            ++outcome.votes_cast;
        }
        if (std::llabs(lead) < delta) {
            outcome.consensus = Consensus::unresolved;
            return outcome;
        }
    }
    outcome.consensus = lead > 0 ? Consensus::correct : Consensus::incorrect;
    return outcome;
}

std::vector<ReplayRow> run_replay(const LabelDataset& ds, const ReplayConfig& config) {
    if (config.repetitions < 1) throw ValidationError("repetitions must be >= 1");
    const LabelDataset subset = filter_dataset(ds, config.tau_w, config.tau_i);
    std::vector<ReplayRow> rows;
    const auto& items = subset.items();
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (int rep = 0; rep < config.repetitions; ++rep) {
            SplitMix64 rng(derive_stream(derive_stream(config.seed, i), static_cast<std::uint64_t>(rep)));
            const ReplayOutcome outcome =
                replay_item(subset, items[i], config.delta, config.replacement, rng);
            rows.push_back({outcome.item_id, rep, outcome.consensus, outcome.votes_cast});
        }
    }
    return rows;
}

std::vector<GridCell> grid_experiment(const LabelDataset& ds,
                                      const std::vector<long long>& delta_set,
                                      const std::vector<std::pair<double, double>>& tau_grid,
                                      int repetitions, std::uint64_t seed, int threads) {
    if (delta_set.empty() || tau_grid.empty())
        throw ValidationError("grid experiment requires non-empty grids");
    if (repetitions < 1) throw ValidationError("repetitions must be >= 1");

    std::vector<GridCell> cells(tau_grid.size() * delta_set.size());
    detail::parallel_for(static_cast<long long>(tau_grid.size()), threads, [&](long long s) {
        const auto [tau_w, tau_i] = tau_grid[static_cast<size_t>(s)];
        const LabelDataset subset = filter_dataset(ds, tau_w, tau_i);
        for (std::size_t d = 0; d < delta_set.size(); ++d) {
            GridCell cell;
            cell.tau_w = tau_w;
            cell.tau_i = tau_i;
            cell.delta = delta_set[d];
            cell.items = static_cast<long long>(subset.item_count());
            cell.empty_setting = subset.empty();
            if (!subset.empty()) {
                long long correct = 0, resolved = 0, votes = 0;
                const auto& items = subset.items();
                for (std::size_t i = 0; i < items.size(); ++i) {
                    for (int rep = 0; rep < repetitions; ++rep) {
                        SplitMix64 rng(derive_stream(
                            derive_stream(derive_stream(derive_stream(seed, static_cast<std::uint64_t>(s)), d),
                                          i),
                            static_cast<std::uint64_t>(rep)));
                        const ReplayOutcome outcome = replay_item(
                            subset, items[i], cell.delta, Replacement::without_replacement, rng);
                        ++cell.replays;
                        if (outcome.consensus == Consensus::unresolved) continue;
                        ++resolved;
                        votes += outcome.votes_cast;
                        if (outcome.consensus == Consensus::correct) ++correct;
                    }
                }
                cell.resolved = resolved;
                if (resolved > 0) {
                    cell.mean_correct = static_cast<double>(correct) / static_cast<double>(resolved);
                    cell.mean_votes = static_cast<double>(votes) / static_cast<double>(resolved);
                }
                cell.unresolved_rate =
                    static_cast<double>(cell.replays - resolved) / static_cast<double>(cell.replays);
            }
            cells[static_cast<size_t>(s) * delta_set.size() + d] = cell;
        }
    });
    return cells;
}

TheoryComparison theory_comparison(const LabelDataset& ds,
                                   const std::vector<long long>& delta_set, int experiments,
                                   std::uint64_t seed, int threads) {
    if (ds.empty()) throw ValidationError("theory comparison requires a non-empty dataset");
    if (delta_set.empty()) throw ValidationError("theory comparison requires deltas");
    if (experiments < 1) throw ValidationError("experiment count must be >= 1");

    TheoryComparison result;
    result.pool_accuracy = ds.pool_accuracy();
    for (const long long delta : delta_set) {
        const VotingSpec spec(WorkerAccuracy(result.pool_accuracy), static_cast<double>(delta));
        result.theory.push_back({delta, consensus_quality(spec), expected_votes(spec)});
    }

    result.rows.resize(delta_set.size() * static_cast<size_t>(experiments));
    const auto& items = ds.items();
    detail::parallel_for(static_cast<long long>(result.rows.size()), threads, [&](long long u) {
        const std::size_t d = static_cast<size_t>(u) / static_cast<size_t>(experiments);
        const int experiment = static_cast<int>(static_cast<size_t>(u) % static_cast<size_t>(experiments));
        long long correct = 0, votes = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
            SplitMix64 rng(derive_stream(
                derive_stream(derive_stream(seed, d), static_cast<std::uint64_t>(experiment)), i));
            const ReplayOutcome outcome =
                replay_item(ds, items[i], delta_set[d], Replacement::with_replacement, rng);
            votes += outcome.votes_cast;
            if (outcome.consensus == Consensus::correct) ++correct;
        }
        TheoryComparisonRow row;
        row.delta = delta_set[d];
        row.experiment = experiment;
        row.q_exp = static_cast<double>(correct) / static_cast<double>(items.size());
        row.e_exp = static_cast<double>(votes) / static_cast<double>(items.size());
        row.q_diff = row.q_exp - result.theory[d].q_th;
        row.e_diff = row.e_exp - result.theory[d].e_th;
        result.rows[static_cast<size_t>(u)] = row;
    });
    return result;
}

} // namespace marginvote
