#include "factscope/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace factscope {

namespace {
constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

double norm_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}
}  // namespace

EmbeddingStore EmbeddingStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty embeddings file: " + path);
    std::istringstream header(line);
    std::size_t declared_count = 0, dim = 0;
    if (!(header >> declared_count >> dim) || dim == 0) {
        throw std::runtime_error("bad embeddings header in " + path + ": " + line);
    }

    EmbeddingStore store(dim);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        std::vector<double> values;
        values.reserve(dim);
        double x;
        while (ls >> x) values.push_back(x);
        if (values.size() != dim) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected " + std::to_string(dim) + " values, got " +
                                     std::to_string(values.size()));
        }
        if (store.contains(token)) {
            std::cerr << "warning: duplicate embedding token '" << token << "' at " << path
                      << ":" << lineno << ", last wins\n";
            ++store.warnings_;
        }
        store.add(std::move(token), std::move(values));
    }
    if (store.size() != declared_count) {
        std::cerr << "warning: embeddings header declares " << declared_count
                  << " vectors, file has " << store.size() << "\n";
        ++store.warnings_;
    }
    return store;
}

void EmbeddingStore::add(std::string token, std::vector<double> values) {
    if (dimension_ == 0) dimension_ = values.size();
    if (values.size() != dimension_) {
        throw std::runtime_error("embedding dimension mismatch for token: " + token);
    }
    auto it = index_.find(token);
    if (it != index_.end()) {
        std::copy(values.begin(), values.end(), values_.begin() + it->second * dimension_);
        norms_[it->second] = norm_of({values.data(), values.size()});
        return;
    }
    std::size_t row = norms_.size();
    index_.emplace(std::move(token), row);
    values_.insert(values_.end(), values.begin(), values.end());
    norms_.push_back(norm_of({values.data(), values.size()}));
}

std::size_t EmbeddingStore::index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? npos : it->second;
}

bool EmbeddingStore::contains(std::string_view token) const {
    return index_of(token) != npos;
}

std::optional<std::span<const double>> EmbeddingStore::vector(std::string_view token) const {
    std::size_t row = index_of(token);
    if (row == npos) return std::nullopt;
    return std::span<const double>(values_.data() + row * dimension_, dimension_);
}

double EmbeddingStore::sim(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty() || a.size() != b.size()) return 0.5;
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    const double na = norm_of(a);
    const double nb = norm_of(b);
    if (na == 0.0 || nb == 0.0) return 0.5;
    double cosine = dot / (na * nb);
    cosine = std::min(1.0, std::max(-1.0, cosine));
    return (cosine + 1.0) / 2.0;
}

double EmbeddingStore::sim(std::string_view a, std::string_view b) const {
    auto va = vector(a);
    auto vb = vector(b);
    if (!va || !vb) return 0.5;
    return sim(*va, *vb);
}

double EmbeddingStore::sim(std::string_view a, std::span<const double> vec) const {
    auto va = vector(a);
    if (!va) return 0.5;
    return sim(*va, vec);
}

std::vector<double> EmbeddingStore::phrase_vector(
    const std::vector<std::string>& tokens) const {
    std::vector<double> acc(dimension_, 0.0);
    std::size_t covered = 0;
    for (const auto& tok : tokens) {
        auto v = vector(tok);
        if (!v) continue;
        for (std::size_t i = 0; i < dimension_; ++i) acc[i] += (*v)[i];
        ++covered;
    }
    if (covered == 0) return {};
    for (double& x : acc) x /= static_cast<double>(covered);
    return acc;
}

}  // namespace factscope
