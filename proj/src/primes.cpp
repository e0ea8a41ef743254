#include "sptl/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <vector>

#include "sptl/errors.hpp"

namespace sptl {

namespace {

const char magic[6] = {'S', 'P', 'T', 'L', '1', '\0'};

std::vector<uint32_t> sieve(uint64_t n)
{
    std::vector<uint32_t> out;
    if (n < 2) return out;
    out.push_back(2);
    // odd-only segmented sieve
    uint64_t r = uint64_t(std::sqrt(double(n))) + 1;
    std::vector<char> small(r + 1, 1);
    std::vector<uint32_t> base;
    for (uint64_t i = 3; i <= r; i += 2) {
        if (!small[i]) continue;
        base.push_back(uint32_t(i));
        for (uint64_t j = i * i; j <= r; j += 2 * i) small[j] = 0;
    }
    const uint64_t S = 1 << 18; // odd numbers per segment
    std::vector<char> mark(S);
    for (uint64_t lo = 3; lo <= n; lo += 2 * S) {
        uint64_t hi = std::min(n, lo + 2 * S - 1);
        std::fill(mark.begin(), mark.end(), 1);
        for (uint32_t p : base) {
            uint64_t pp = uint64_t(p) * p;
            if (pp > hi) break;
            uint64_t st = std::max(pp, (lo + p - 1) / p * p);
            if (st % 2 == 0) st += p;
            for (uint64_t j = st; j <= hi; j += 2 * p) mark[(j - lo) / 2] = 0;
        }
        for (uint64_t j = lo; j <= hi; j += 2)
            if (mark[(j - lo) / 2]) out.push_back(uint32_t(j));
    }
    return out;
}

uint64_t fnv1a(const std::vector<uint32_t> &d)
{
    uint64_t h = 1469598103934665603ull;
    for (uint32_t v : d)
        for (int b = 0; b < 4; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    return h;
}

bool load(const std::filesystem::path &f, uint64_t limit, std::vector<uint32_t> &out)
{
    std::ifstream in(f, std::ios::binary);
    if (!in) return false;
    char m[6];
    uint64_t lim = 0, count = 0, sum = 0;
    in.read(m, 6);
    in.read(reinterpret_cast<char *>(&lim), 8);
    in.read(reinterpret_cast<char *>(&count), 8);
    in.read(reinterpret_cast<char *>(&sum), 8);
    if (!in || std::memcmp(m, magic, 6) != 0 || lim != limit || count > limit) return false;
    std::vector<uint32_t> d(count);
    in.read(reinterpret_cast<char *>(d.data()), std::streamsize(count * 4));
    if (!in || fnv1a(d) != sum) return false;
    out.resize(count);
    uint64_t acc = 0;
    for (size_t i = 0; i < count; ++i) {
        acc += d[i];
        out[i] = uint32_t(acc);
    }
    return true;
}

void store(const std::filesystem::path &f, uint64_t limit, const std::vector<uint32_t> &P)
{
    std::vector<uint32_t> d(P.size());
    uint32_t prev = 0;
    for (size_t i = 0; i < P.size(); ++i) {
        d[i] = P[i] - prev;
        prev = P[i];
    }
    uint64_t count = d.size(), sum = fnv1a(d);
    auto tmp = f;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return; // cache is best effort
        out.write(magic, 6);
        out.write(reinterpret_cast<const char *>(&limit), 8);
        out.write(reinterpret_cast<const char *>(&count), 8);
        out.write(reinterpret_cast<const char *>(&sum), 8);
        out.write(reinterpret_cast<const char *>(d.data()), std::streamsize(count * 4));
        if (!out) return;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, f, ec);
}

std::mutex mu;
// earlier tables stay alive so that spans handed out remain valid
std::vector<std::unique_ptr<std::vector<uint32_t>>> tables;
uint64_t table_limit = 0;

} // namespace

std::span<const uint32_t> primes_upto(uint64_t limit, const std::string &cache_dir)
{
    if (limit > sieve_limit) throw SieveRangeError("limit above the sieve range");
    std::lock_guard<std::mutex> lock(mu);
    if (limit > table_limit) {
        uint64_t want = limit <= 1'000'000 ? 1'000'000 : sieve_limit;
        std::vector<uint32_t> t;
        bool ok = false;
        std::filesystem::path f;
        if (!cache_dir.empty() && want == sieve_limit) {
            std::error_code ec;
            std::filesystem::create_directories(cache_dir, ec);
            f = std::filesystem::path(cache_dir) / "primes.bin";
            ok = load(f, want, t);
        }
        if (!ok) {
            t = sieve(want);
            if (!f.empty()) store(f, want, t);
        }
        tables.push_back(std::make_unique<std::vector<uint32_t>>(std::move(t)));
        table_limit = want;
    }
    const auto &T = *tables.back();
    auto end = std::upper_bound(T.begin(), T.end(), uint32_t(limit));
    return {T.data(), size_t(end - T.begin())};
}

} // namespace sptl
