#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kvforge {

// Grading/truncation context shared by every series type. Values with
// different configs never mix silently; operations demand equal configs.
struct TruncationConfig {
    int n_generators = 0;
    int max_degree = 0;
    std::vector<std::string> generator_names;

    TruncationConfig() = default;

    TruncationConfig(int n, int max_deg, std::vector<std::string> names = {})
        : n_generators(n), max_degree(max_deg), generator_names(std::move(names)) {
        if (n < 1) throw std::invalid_argument("need at least one generator");
        if (max_deg < 1) throw std::invalid_argument("truncation degree must be >= 1");
        if (generator_names.empty()) generator_names = default_names(n);
        if (static_cast<int>(generator_names.size()) != n)
            throw std::invalid_argument("generator name count mismatch");
        for (std::size_t i = 0; i < generator_names.size(); ++i)
            for (std::size_t j = i + 1; j < generator_names.size(); ++j)
                if (generator_names[i] == generator_names[j])
                    throw std::invalid_argument("generator names must be distinct");
    }

    static std::vector<std::string> default_names(int n) {
        static const char* xyz[] = {"x", "y", "z"};
        std::vector<std::string> names;
        if (n <= 3) {
            for (int i = 0; i < n; ++i) names.emplace_back(xyz[i]);
        } else {
            for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
        }
        return names;
    }

    bool operator==(const TruncationConfig& o) const {
        return n_generators == o.n_generators && max_degree == o.max_degree &&
               generator_names == o.generator_names;
    }
    bool operator!=(const TruncationConfig& o) const { return !(*this == o); }

    const std::string& name(int gen) const {
        if (gen < 0 || gen >= n_generators)
            throw std::invalid_argument("generator index out of range");
        return generator_names[gen];
    }

    int generator_index(const std::string& name) const {
        for (int i = 0; i < n_generators; ++i)
            if (generator_names[i] == name) return i;
        throw std::invalid_argument("unknown generator name: " + name);
    }
};

inline void require_same_config(const TruncationConfig& a, const TruncationConfig& b) {
    if (a != b) throw std::invalid_argument("truncation config mismatch");
}

}  // namespace kvforge
