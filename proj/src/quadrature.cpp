#include "ibm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "ibm/errors.hpp"

namespace ibm {

namespace {

Rule legendre_reference(int n)
{
    static std::mutex guard;
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = 0;
            for (int k = 1; k <= n; ++k) {
                long double p2 = p1;
                p1 = p0;
                p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            long double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        long double p0 = 1, p1 = 0;
        for (int k = 1; k <= n; ++k) {
            long double p2 = p1;
            p1 = p0;
            p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1);
        long double w = 2 / ((1 - z * z) * dp * dp);
        r.x[i] = static_cast<double>(-z);
        r.x[n - 1 - i] = static_cast<double>(z);
        r.w[i] = r.w[n - 1 - i] = static_cast<double>(w);
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    cache[n] = r;
    return r;
}

}  // namespace

Rule gauss_legendre(int n, double a, double b)
{
    require(n >= 1, ErrorKind::config, "Gauss-Legendre rule needs at least one node");
    Rule ref = legendre_reference(n);
    double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (int i = 0; i < n; ++i) {
        ref.x[i] = c + h * ref.x[i];
        ref.w[i] *= h;
    }
    return ref;
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes)
{
    std::size_t n = nodes.size();
    std::vector<double> w(n, 1.0);
    // scale by the interval length to keep the weights O(1)
    double scale = n > 1 ? (nodes.back() - nodes.front()) / 4.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) w[j] /= (nodes[j] - nodes[k]) / scale;
    return w;
}

void lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bw, double t,
                    std::vector<double>& out)
{
    std::size_t n = nodes.size();
    out.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (t == nodes[j]) {
            out[j] = 1.0;
            return;
        }
    }
    double denom = 0;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = bw[j] / (t - nodes[j]);
        denom += out[j];
    }
    for (std::size_t j = 0; j < n; ++j) out[j] /= denom;
}

void check_schedule(const std::vector<double>& eps, std::size_t min_len)
{
    require(eps.size() >= min_len, ErrorKind::config,
            "epsilon schedule needs at least " + std::to_string(min_len) + " entries");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        require(eps[i] > 0, ErrorKind::config, "epsilon schedule entries must be positive");
        if (i > 0)
            require(eps[i] < eps[i - 1], ErrorKind::config, "epsilon schedule must be strictly decreasing");
    }
}

namespace {

cplx neville_at_zero(const std::vector<double>& x, std::vector<cplx> p)
{
    std::size_t n = x.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i)
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
    return p[0];
}

}  // namespace

Extrapolation richardson(const std::vector<double>& eps, const std::vector<cplx>& values)
{
    require(eps.size() == values.size(), ErrorKind::internal, "schedule/value size mismatch");
    check_schedule(eps, 2);
    Extrapolation e;
    e.schedule = eps;
    e.sequence = values;
    e.value = neville_at_zero(eps, values);
    std::vector<double> tail_eps(eps.begin() + 1, eps.end());
    std::vector<cplx> tail_val(values.begin() + 1, values.end());
    cplx reduced = tail_eps.size() >= 1 ? neville_at_zero(tail_eps, tail_val) : values.back();
    e.error_estimate = std::abs(e.value - reduced);
    e.monotone_trend = true;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i] - e.value) > std::abs(values[i - 1] - e.value) * (1 + 1e-12) + 1e-300)
            e.monotone_trend = false;
    return e;
}

cplx wynn_epsilon(const std::vector<cplx>& s)
{
    std::size_t n = s.size();
    if (n == 0) return 0.0;
    std::vector<cplx> prev(n + 1, 0.0), cur(s.begin(), s.end());
    cplx best = s.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<cplx> next(n - k);
        bool stalled = false;
        for (std::size_t i = 0; i + k < n; ++i) {
            cplx d = cur[i + 1] - cur[i];
            if (std::abs(d) < 1e-300) {
                stalled = true;
                break;
            }
            next[i] = prev[i + 1] + 1.0 / d;
        }
        if (stalled) break;
        prev = cur;
        cur = next;
        if (k % 2 == 0) best = cur.back();
    }
    return best;
}

}  // namespace ibm
