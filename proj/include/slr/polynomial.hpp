#pragma once

// Real-coefficient multivariate polynomials over named sources.
//
// A PolyRandomVariable is the universal representation of a random
// variable in this library: a finite map from monomials (source name ->
// positive exponent) to nonzero real coefficients. The zero polynomial is
// the empty map; the identity polynomial in a single source realizes that
// source itself as a random variable.
//
// Example: 2*xi^2*eta + 1 is { {{"xi",2},{"eta",1}}: 2.0, {}: 1.0 }.

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "slr/errors.hpp"
#include "slr/source_distribution.hpp"

namespace slr {

// Exponent vector, keyed by source name. Entries always have exponent > 0.
using Monomial = std::map<std::string, unsigned>;

inline unsigned monomial_degree(const Monomial& m) {
    unsigned d = 0;
    for (const auto& [sym, e] : m) d += e;
    return d;
}

class PolyRandomVariable {
public:
    // Zero polynomial.
    PolyRandomVariable() = default;

    static PolyRandomVariable constant(double c) {
        PolyRandomVariable p;
        if (c != 0.0) p.terms_[Monomial{}] = c;
        return p;
    }

    // Identity polynomial in one source: the random variable xi itself.
    static PolyRandomVariable source(const std::string& name) {
        return monomial(1.0, Monomial{{name, 1}});
    }

    static PolyRandomVariable monomial(double coeff, Monomial m) {
        check_degree(monomial_degree(m));
        PolyRandomVariable p;
        if (coeff != 0.0) {
            for (auto it = m.begin(); it != m.end();) {
                it = (it->second == 0) ? m.erase(it) : std::next(it);
            }
            p.terms_[std::move(m)] = coeff;
        }
        return p;
    }

    const std::map<Monomial, double>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    // True when every non-constant coefficient has magnitude <= tol.
    bool is_constant(double tol = 0.0) const {
        for (const auto& [m, c] : terms_) {
            if (!m.empty() && std::abs(c) > tol) return false;
        }
        return true;
    }

    // Coefficient of the empty monomial.
    double constant_value() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? 0.0 : it->second;
    }

    double coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? 0.0 : it->second;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
        return d;
    }

    // Source names appearing with positive exponent.
    std::set<std::string> support() const {
        std::set<std::string> s;
        for (const auto& [m, c] : terms_) {
            for (const auto& [sym, e] : m) s.insert(sym);
        }
        return s;
    }

    PolyRandomVariable& operator+=(const PolyRandomVariable& rhs) {
        for (const auto& [m, c] : rhs.terms_) add_term(m, c);
        return *this;
    }

    PolyRandomVariable& operator-=(const PolyRandomVariable& rhs) {
        for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
        return *this;
    }

    PolyRandomVariable& operator*=(double c) {
        if (c == 0.0) {
            terms_.clear();
        } else {
            for (auto& [m, v] : terms_) v *= c;
        }
        return *this;
    }

    friend PolyRandomVariable operator+(PolyRandomVariable a, const PolyRandomVariable& b) {
        a += b;
        return a;
    }

    friend PolyRandomVariable operator-(PolyRandomVariable a, const PolyRandomVariable& b) {
        a -= b;
        return a;
    }

    friend PolyRandomVariable operator-(const PolyRandomVariable& a) {
        PolyRandomVariable r = a;
        r *= -1.0;
        return r;
    }

    friend PolyRandomVariable operator*(PolyRandomVariable a, double c) {
        a *= c;
        return a;
    }

    friend PolyRandomVariable operator*(double c, PolyRandomVariable a) {
        a *= c;
        return a;
    }

    friend PolyRandomVariable operator*(const PolyRandomVariable& a,
                                        const PolyRandomVariable& b) {
        PolyRandomVariable r;
        for (const auto& [ma, ca] : a.terms_) {
            const unsigned da = monomial_degree(ma);
            for (const auto& [mb, cb] : b.terms_) {
                check_degree(da + monomial_degree(mb));
                Monomial m = ma;
                for (const auto& [sym, e] : mb) m[sym] += e;
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    // Copy with every coefficient of magnitude <= tol removed.
    PolyRandomVariable pruned(double tol) const {
        PolyRandomVariable r;
        for (const auto& [m, c] : terms_) {
            if (std::abs(c) > tol) r.terms_[m] = c;
        }
        return r;
    }

    // Pointwise evaluation at the given source values.
    double evaluate(const std::map<std::string, double>& values) const {
        double total = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = c;
            for (const auto& [sym, e] : m) {
                auto it = values.find(sym);
                if (it == values.end()) throw UnknownSourceError(sym);
                t *= std::pow(it->second, static_cast<int>(e));
            }
            total += t;
        }
        return total;
    }

    // Consistent renaming of source symbols.
    PolyRandomVariable renamed(const std::map<std::string, std::string>& mapping) const {
        PolyRandomVariable r;
        for (const auto& [m, c] : terms_) {
            Monomial rm;
            for (const auto& [sym, e] : m) {
                auto it = mapping.find(sym);
                rm[it == mapping.end() ? sym : it->second] += e;
            }
            r.add_term(rm, c);
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            const bool first = out.empty();
            double mag = c;
            if (c < 0.0) {
                out += first ? "-" : " - ";
                mag = -c;
            } else if (!first) {
                out += " + ";
            }
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.12g", mag);
            const bool wrote_coeff = !(std::string(buf) == "1" && !m.empty());
            if (wrote_coeff) out += buf;
            bool need_star = wrote_coeff;
            for (const auto& [sym, e] : m) {
                if (need_star) out += "*";
                out += sym;
                if (e > 1) out += "^" + std::to_string(e);
                need_star = true;
            }
        }
        return out;
    }

    friend bool operator==(const PolyRandomVariable&, const PolyRandomVariable&) = default;

private:
    static void check_degree(unsigned d) {
        if (d > kMaxTotalDegree) {
            throw DegreeOverflowError("monomial of total degree " + std::to_string(d) +
                                      " exceeds the degree cap " +
                                      std::to_string(kMaxTotalDegree));
        }
    }

    void add_term(const Monomial& m, double c) {
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        } else if (c == 0.0) {
            terms_.erase(it);
        }
    }

    std::map<Monomial, double> terms_;
};

}  // namespace slr
