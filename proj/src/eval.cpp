#include "factscope/eval.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "factscope/text.hpp"

namespace factscope {

using nlohmann::json;

void EvalReport::finalize() {
    if (rows.empty()) {
        answer_presence = mean_space_size = mean_runtime_ms = 0.0;
        return;
    }
    std::size_t present = 0;
    double size_sum = 0.0, time_sum = 0.0;
    for (const auto& r : rows) {
        present += r.answer_present ? 1 : 0;
        size_sum += static_cast<double>(r.space_size);
        time_sum += r.elapsed_ms;
    }
    answer_presence = 100.0 * static_cast<double>(present) / rows.size();
    mean_space_size = size_sum / rows.size();
    mean_runtime_ms = time_sum / rows.size();
}

bool answer_presence(const KBStore& store, const SearchSpace& space,
                     const std::vector<std::string>& gold) {
    std::unordered_set<ItemCode> gold_codes;
    std::unordered_set<std::string> gold_norms;
    for (const auto& g : gold) {
        ItemCode code = store.find(g);
        if (code != kInvalidItem) gold_codes.insert(code);
        gold_norms.insert(normalize(g));
    }
    auto hit = [&](ItemCode x) {
        if (gold_codes.count(x)) return true;
        const auto& item = store.item(x);
        return item.kind == ItemKind::Literal && gold_norms.count(normalize(item.label)) > 0;
    };
    for (FactId fid : space.facts) {
        const Fact& f = store.fact(fid);
        if (hit(f.subject) || hit(f.object)) return true;
        for (const auto& [qp, qo] : f.qualifiers) {
            if (hit(qo)) return true;
        }
    }
    return false;
}

std::vector<BenchmarkInstance> read_benchmark_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open benchmark file: " + path);
    std::vector<BenchmarkInstance> instances;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line);
        BenchmarkInstance inst;
        inst.question = j.at("question").get<std::string>();
        inst.gold_answers = j.at("answers").get<std::vector<std::string>>();
        if (inst.gold_answers.empty()) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": instance without gold answers");
        }
        instances.push_back(std::move(inst));
    }
    return instances;
}

EvalReport run_benchmark(const Engine& engine,
                         const std::vector<BenchmarkInstance>& instances,
                         const QueryOptions& options) {
    EvalReport report;
    for (const auto& inst : instances) {
        auto start = std::chrono::steady_clock::now();
        auto space = engine.build_search_space(inst.question, options);
        auto end = std::chrono::steady_clock::now();

        QuestionResult row;
        row.question = inst.question;
        row.answer_present = answer_presence(engine.store(), space, inst.gold_answers);
        row.space_size = space.items_in_space.size();
        row.fact_count = space.facts.size();
        row.elapsed_ms = std::chrono::duration<double, std::milli>(end - start).count();
        report.rows.push_back(std::move(row));
    }
    report.finalize();
    return report;
}

void write_report_json(const EvalReport& report, const std::string& path) {
    json j;
    j["aggregates"] = {{"answer_presence_pct", report.answer_presence},
                       {"mean_space_size", report.mean_space_size},
                       {"mean_runtime_ms", report.mean_runtime_ms}};
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"question", r.question},
                        {"answer_present", r.answer_present},
                        {"space_size", r.space_size},
                        {"fact_count", r.fact_count},
                        {"elapsed_ms", r.elapsed_ms}});
    }
    j["per_question"] = std::move(rows);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << j.dump(2) << "\n";
}

void write_report_csv(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << "question,answer_present,space_size,fact_count,elapsed_ms\n";
    for (const auto& r : report.rows) {
        std::string q = r.question;
        for (auto& c : q) {
            if (c == ',' || c == '\n') c = ' ';
        }
        out << q << ',' << (r.answer_present ? 1 : 0) << ',' << r.space_size << ','
            << r.fact_count << ',' << r.elapsed_ms << "\n";
    }
}

GridResult grid_search(const Engine& engine,
                       const std::vector<BenchmarkInstance>& instances,
                       const std::vector<GridPoint>& grid) {
    if (grid.empty()) throw std::invalid_argument("empty grid");
    GridResult result;
    bool first = true;
    for (const auto& point : grid) {
        point.weights.validate();  // rejects rows not summing to 1
        QueryOptions options;
        options.weights = point.weights;
        options.k = point.k;
        options.p = point.p;
        auto report = run_benchmark(engine, instances, options);
        const bool better =
            first || report.answer_presence > result.best_report.answer_presence ||
            (report.answer_presence == result.best_report.answer_presence &&
             report.mean_space_size < result.best_report.mean_space_size);
        if (better) {
            result.best = point;
            result.best_report = report;
            first = false;
        }
        result.all.emplace_back(point, std::move(report));
    }
    return result;
}

KBStore make_synthetic_kb(std::size_t n_items, std::size_t n_facts, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<KBItem> items(n_items);
    const std::size_t n_predicates = std::max<std::size_t>(2, n_items / 50);
    for (std::size_t i = 0; i < n_items; ++i) {
        items[i].code = static_cast<ItemCode>(i);
        items[i].external_id = "it" + std::to_string(i);
        items[i].label = "item " + std::to_string(i);
        items[i].kind = i < n_predicates ? ItemKind::Predicate : ItemKind::Entity;
    }
    std::uniform_int_distribution<ItemCode> pred(0, static_cast<ItemCode>(n_predicates - 1));
    std::uniform_int_distribution<ItemCode> ent(static_cast<ItemCode>(n_predicates),
                                                static_cast<ItemCode>(n_items - 1));
    std::uniform_int_distribution<int> n_quals(0, 2);
    std::vector<Fact> facts(n_facts);
    for (std::size_t i = 0; i < n_facts; ++i) {
        Fact& f = facts[i];
        f.subject = ent(rng);
        f.predicate = pred(rng);
        f.object = ent(rng);
        const int q = n_quals(rng);
        for (int j = 0; j < q; ++j) f.qualifiers.emplace_back(pred(rng), ent(rng));
    }
    return KBStore::build(std::move(items), std::move(facts));
}

namespace {

MicroBenchRow summarize(std::string name, std::vector<double>& samples_us) {
    MicroBenchRow row;
    row.name = std::move(name);
    if (samples_us.empty()) return row;
    std::sort(samples_us.begin(), samples_us.end());
    row.median_us = samples_us[samples_us.size() / 2];
    double sum = 0.0;
    for (double s : samples_us) sum += s;
    row.mean_us = sum / samples_us.size();
    return row;
}

}  // namespace

MicroBenchReport micro_bench(const KBStore& store, std::size_t n_lookups,
                             std::size_t n_pairs, std::size_t naive_samples,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<ItemCode> pick(0,
                                                 static_cast<ItemCode>(store.item_count() - 1));
    MicroBenchReport report;
    using clock = std::chrono::steady_clock;

    // Lookups are too fast to time one by one; batches of 64 amortize the
    // clock overhead, samples are per-call microseconds.
    constexpr std::size_t kBatch = 64;
    std::vector<double> samples;
    volatile std::uint64_t sink = 0;

    samples.clear();
    for (std::size_t done = 0; done < n_lookups; done += kBatch) {
        const std::size_t batch = std::min(kBatch, n_lookups - done);
        std::vector<ItemCode> xs(batch);
        for (auto& x : xs) x = pick(rng);
        auto t0 = clock::now();
        for (ItemCode x : xs) sink = sink + store.neighborhood(x).size();
        auto t1 = clock::now();
        samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count() / batch);
    }
    report.neighborhood = summarize("neighborhood", samples);

    samples.clear();
    for (std::size_t done = 0; done < n_pairs; done += kBatch) {
        const std::size_t batch = std::min(kBatch, n_pairs - done);
        std::vector<std::pair<ItemCode, ItemCode>> ps(batch);
        for (auto& p : ps) p = {pick(rng), pick(rng)};
        auto t0 = clock::now();
        for (auto& [a, b] : ps) sink = sink + static_cast<std::uint64_t>(store.distance(a, b));
        auto t1 = clock::now();
        samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count() / batch);
    }
    report.distance = summarize("distance", samples);

    // Naive baselines scan the whole fact table per query.
    samples.clear();
    for (std::size_t i = 0; i < naive_samples; ++i) {
        ItemCode x = pick(rng);
        auto t0 = clock::now();
        std::size_t count = 0;
        for (const auto& f : store.facts()) {
            if (f.contains(x)) ++count;
        }
        sink = sink + count;
        auto t1 = clock::now();
        samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
    }
    report.naive_neighborhood = summarize("naive_neighborhood", samples);

    samples.clear();
    for (std::size_t i = 0; i < naive_samples; ++i) {
        ItemCode a = pick(rng);
        ItemCode b = pick(rng);
        auto t0 = clock::now();
        // hop1: co-occurrence in some fact; hop2: a shared co-occurring item.
        bool hop1 = false;
        std::vector<ItemCode> na, nb;
        for (const auto& f : store.facts()) {
            const bool has_a = f.contains(a);
            const bool has_b = f.contains(b);
            if (has_a && has_b) hop1 = true;
            auto add = [&](std::vector<ItemCode>& v) {
                v.push_back(f.subject);
                v.push_back(f.predicate);
                v.push_back(f.object);
                for (const auto& [qp, qo] : f.qualifiers) {
                    v.push_back(qp);
                    v.push_back(qo);
                }
            };
            if (has_a) add(na);
            if (has_b) add(nb);
        }
        if (!hop1) {
            std::sort(na.begin(), na.end());
            std::sort(nb.begin(), nb.end());
            na.erase(std::unique(na.begin(), na.end()), na.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            sink = sink + std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(),
                                          na.begin()) -
                    na.begin();
        }
        auto t1 = clock::now();
        samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
    }
    report.naive_distance = summarize("naive_distance", samples);
    (void)sink;
    return report;
}

}  // namespace factscope
