#include "chowkit/exact_arith.hpp"

#include <mutex>
#include <vector>

namespace chowkit {

namespace {

struct BernoulliTable {
    std::mutex mu;
    std::vector<Rational> values{Rational(1)};
};

struct FactorialTable {
    std::mutex mu;
    std::vector<Integer> values{Integer(1)};
};

BernoulliTable& bernoulli_table() {
    static BernoulliTable table;
    return table;
}

FactorialTable& factorial_table() {
    static FactorialTable table;
    return table;
}

}  // namespace

Rational make_rational(long num, long den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational parse_rational(const std::string& text) {
    const std::size_t start = (!text.empty() && text[0] == '-') ? 1 : 0;
    const std::size_t slash = text.find('/');
    const std::size_t num_end = slash == std::string::npos ? text.size() : slash;
    auto all_digits = [&](std::size_t from, std::size_t to) {
        if (from >= to) return false;
        for (std::size_t i = from; i < to; ++i)
            if (text[i] < '0' || text[i] > '9') return false;
        return true;
    };
    if (!all_digits(start, num_end) ||
        (slash != std::string::npos && !all_digits(slash + 1, text.size())))
        throw DomainError("malformed rational: '" + text + "'");
    Integer num(text.substr(0, num_end));
    Integer den = slash == std::string::npos ? Integer(1) : Integer(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator: '" + text + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational bernoulli(long m) {
    if (m < 0) throw DomainError("bernoulli: negative index");
    auto& table = bernoulli_table();
    std::lock_guard lock(table.mu);
    auto& b = table.values;
    while (static_cast<long>(b.size()) <= m) {
        const long k = static_cast<long>(b.size());
        // (k+1) B_k = -sum_{j<k} C(k+1, j) B_j
        Rational acc(0);
        Integer c(1);  // C(k+1, 0)
        for (long j = 0; j < k; ++j) {
            acc += Rational(c) * b[j];
            c = c * (k + 1 - j) / (j + 1);
        }
        Rational bk = -acc / Rational(k + 1);
        bk.canonicalize();
        b.push_back(bk);
    }
    return b[m];
}

Integer factorial(long n) {
    if (n < 0) throw DomainError("factorial: negative argument");
    auto& table = factorial_table();
    std::lock_guard lock(table.mu);
    auto& f = table.values;
    while (static_cast<long>(f.size()) <= n) {
        f.push_back(f.back() * static_cast<unsigned long>(f.size()));
    }
    return f[n];
}

Integer binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) throw DomainError("binomial: need 0 <= k <= n");
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Integer double_factorial(long n) {
    if (n < -1 || n % 2 == 0) throw DomainError("double_factorial: need odd n >= -1");
    Integer r(1);
    for (long k = n; k > 1; k -= 2) r *= k;
    return r;
}

Rational pow2(long e) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0) return Rational(p);
    Rational q(Integer(1), p);
    q.canonicalize();
    return q;
}

}  // namespace chowkit
