#pragma once

// Independent scalar source distributions with closed-form raw moments.
//
// Every random variable in this library is a polynomial over a list of
// mutually independent sources. A source is either a mean-zero Gaussian
// (nonzero means are expressed as polynomial constants) or a finite
// discrete law given by atoms and probabilities. One-point discrete laws
// are allowed; they realize degenerate (Dirac) distributions, including
// the constant regressor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "slr/errors.hpp"

namespace slr {

// Largest total degree any moment computation will accept.
inline constexpr unsigned kMaxTotalDegree = 64;

// Default tolerance for asserting exact moment identities.
inline constexpr double kDefaultTol = 1e-10;

enum class SourceKind { Gaussian, FiniteDiscrete };

struct DiscretePoint {
    double value = 0.0;
    double prob = 0.0;

    friend bool operator==(const DiscretePoint&, const DiscretePoint&) = default;
};

class SourceDistribution {
public:
    // Mean-zero Gaussian with the given variance (> 0).
    static SourceDistribution gaussian(std::string name, double variance) {
        if (!(variance > 0.0) || !std::isfinite(variance)) {
            throw std::invalid_argument("source '" + name +
                                        "': Gaussian variance must be positive and finite");
        }
        SourceDistribution s;
        s.name_ = std::move(name);
        s.kind_ = SourceKind::Gaussian;
        s.variance_ = variance;
        return s;
    }

    // Finite discrete law. Atom values must be pairwise distinct, all
    // probabilities in (0, 1], and the probabilities must sum to 1 within
    // 1e-12. Atoms are stored sorted by value.
    static SourceDistribution finite_discrete(std::string name,
                                              std::vector<DiscretePoint> points) {
        if (points.empty()) {
            throw std::invalid_argument("source '" + name + "': no atoms given");
        }
        std::sort(points.begin(), points.end(),
                  [](const DiscretePoint& a, const DiscretePoint& b) {
                      return a.value < b.value;
                  });
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const DiscretePoint& p = points[i];
            if (!std::isfinite(p.value)) {
                throw std::invalid_argument("source '" + name + "': atom value not finite");
            }
            if (!(p.prob > 0.0) || p.prob > 1.0) {
                throw std::invalid_argument("source '" + name +
                                            "': probabilities must lie in (0, 1]");
            }
            if (i > 0 && points[i - 1].value == p.value) {
                throw std::invalid_argument("source '" + name +
                                            "': atom values must be pairwise distinct");
            }
            total += p.prob;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument("source '" + name + "': probabilities sum to " +
                                        std::to_string(total) + ", expected 1");
        }
        SourceDistribution s;
        s.name_ = std::move(name);
        s.kind_ = SourceKind::FiniteDiscrete;
        s.points_ = std::move(points);
        return s;
    }

    // The two-point law putting mass 1/2 on -1 and +1.
    static SourceDistribution rademacher(std::string name) {
        return finite_discrete(std::move(name), {{-1.0, 0.5}, {+1.0, 0.5}});
    }

    // Degenerate law concentrated on a single value.
    static SourceDistribution dirac(std::string name, double value) {
        return finite_discrete(std::move(name), {{value, 1.0}});
    }

    const std::string& name() const { return name_; }
    SourceKind kind() const { return kind_; }

    double variance() const { return variance_; }
    const std::vector<DiscretePoint>& points() const { return points_; }

    // E[xi^n]. Gaussian: 0 for odd n, (n-1)!! sigma^n for even n.
    // Finite discrete: sum of prob * value^n over atoms.
    double raw_moment(unsigned n) const {
        if (n > kMaxTotalDegree) {
            throw DegreeOverflowError("raw moment of order " + std::to_string(n) +
                                      " exceeds the degree cap " +
                                      std::to_string(kMaxTotalDegree));
        }
        if (n == 0) return 1.0;
        if (kind_ == SourceKind::Gaussian) {
            if (n % 2 == 1) return 0.0;
            double m = 1.0;
            for (unsigned i = 1; i <= n / 2; ++i) {
                m *= static_cast<double>(2 * i - 1) * variance_;
            }
            return m;
        }
        double m = 0.0;
        for (const DiscretePoint& p : points_) {
            m += p.prob * std::pow(p.value, static_cast<int>(n));
        }
        return m;
    }

    friend bool operator==(const SourceDistribution&, const SourceDistribution&) = default;

private:
    SourceDistribution() = default;

    std::string name_;
    SourceKind kind_ = SourceKind::Gaussian;
    double variance_ = 1.0;
    std::vector<DiscretePoint> points_;
};

// Ordered list of independent sources with unique names.
class SourceList {
public:
    SourceList() = default;

    SourceList(std::initializer_list<SourceDistribution> sources) {
        for (const auto& s : sources) add(s);
    }

    explicit SourceList(std::vector<SourceDistribution> sources) {
        for (auto& s : sources) add(std::move(s));
    }

    void add(SourceDistribution source) {
        if (contains(source.name())) {
            throw std::invalid_argument("duplicate source name: " + source.name());
        }
        items_.push_back(std::move(source));
    }

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    bool contains(const std::string& name) const {
        return std::any_of(items_.begin(), items_.end(),
                           [&](const SourceDistribution& s) { return s.name() == name; });
    }

    const SourceDistribution& operator[](std::size_t i) const { return items_[i]; }

    const SourceDistribution& by_name(const std::string& name) const {
        return items_[index_of(name)];
    }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (items_[i].name() == name) return i;
        }
        throw UnknownSourceError(name);
    }

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    const std::vector<SourceDistribution>& items() const { return items_; }

    friend bool operator==(const SourceList&, const SourceList&) = default;

private:
    std::vector<SourceDistribution> items_;
};

}  // namespace slr
