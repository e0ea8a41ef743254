#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#ifndef SPTL_BIN
#error "SPTL_BIN must name the sptl executable"
#endif

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "sptl-cli-test";

int run(const std::string &args, const std::string &out = "", const std::string &env = "")
{
    std::string cmd = env + " " + SPTL_BIN + " " + args;
    cmd += out.empty() ? " > /dev/null" : " > " + (work / out).string();
    cmd += " 2> " + (work / "stderr.txt").string();
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> tsv(const std::string &text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, '\t')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

struct Workdir {
    Workdir()
    {
        fs::remove_all(work);
        fs::create_directories(work);
    }
    ~Workdir() { fs::remove_all(work); }
};

} // namespace

TEST_CASE("exit status")
{
    Workdir w;
    CHECK(run("zagier-verify --k 12 --m 1..3 --s 2") == 0);
    CHECK(run("--tol 1e-12 kernel-check") == 1);
    CHECK(run("--tol 1e-2 zagier-verify --k 12 --m 1 --s 2") == 2);
    CHECK(run("--tol 1e-13 zagier-verify --k 12 --m 1 --s 2") == 2);
    CHECK(run("zagier-verify --k 12 --m 1 --s 2+") == 2);
    CHECK(run("zagier-verify --k 24 --m 1 --s 2") == 2);
    CHECK(run("--format xml density-pairings") == 2);
    CHECK(run("no-such-command") != 0);
}

TEST_CASE("failed runs leave no output file")
{
    Workdir w;
    fs::path f = work / "t.tsv";
    CHECK(run("--out " + f.string() + " zagier-verify --k 12 --m 1 --s x") == 2);
    CHECK(!fs::exists(f));
    CHECK(!fs::exists(f.string() + ".part"));
    CHECK(run("--tol 1e-12 --out " + f.string() + " kernel-check") == 1);
    CHECK(run("--out " + f.string() + " density-pairings --beta 0.5") == 0);
    CHECK(fs::exists(f));
    CHECK(!fs::exists(f.string() + ".part"));
    CHECK(tsv(slurp(f)).size() == 13);
}

TEST_CASE("deterministic output across runs and thread counts")
{
    Workdir w;
    const std::string cmd = "zagier-verify --k 12,16 --m 1..4 --s 2,1.5+0.5i";
    CHECK(run("--threads 1 " + cmd, "a.tsv") == 0);
    CHECK(run("--threads 4 " + cmd, "b.tsv") == 0);
    CHECK(run("--threads 4 " + cmd, "c.tsv") == 0);
    CHECK(slurp(work / "a.tsv") == slurp(work / "b.tsv"));
    CHECK(slurp(work / "b.tsv") == slurp(work / "c.tsv"));
    CHECK(tsv(slurp(work / "a.tsv")).size() == 17);
}

TEST_CASE("cache contents never change results")
{
    Workdir w;
    const fs::path cache = work / "cache";
    const std::string dl = "density-limit --r 2 --z 1 --nq 1e4 --policy model";
    const std::string zv = "zagier-verify --k 16 --m 1..3 --s 2";
    CHECK(run("--cache-dir " + cache.string() + " " + dl, "cold.tsv") == 0);
    CHECK(run("--cache-dir " + cache.string() + " " + zv, "zcold.tsv") == 0);
    fs::path bin = cache / "primes.bin";
    REQUIRE(fs::exists(bin));
    const std::string good = slurp(bin);
    CHECK(run("--cache-dir " + cache.string() + " " + dl, "warm.tsv") == 0);
    CHECK(run("--cache-dir " + cache.string() + " " + zv, "zwarm.tsv") == 0);
    {
        std::fstream io(bin, std::ios::in | std::ios::out | std::ios::binary);
        io.seekp(4096);
        const char junk[4] = {'\x7f', '\x00', '\x13', '\x01'};
        io.write(junk, 4);
    }
    CHECK(slurp(bin) != good);
    CHECK(run("--cache-dir " + cache.string() + " " + dl, "corrupt.tsv") == 0);
    CHECK(slurp(bin) == good);
    fs::remove_all(cache);
    CHECK(run("--cache-dir " + cache.string() + " " + dl, "again.tsv") == 0);
    CHECK(run("--cache-dir " + cache.string() + " " + zv, "zagain.tsv") == 0);
    const std::string ref = slurp(work / "cold.tsv");
    CHECK(!ref.empty());
    CHECK(slurp(work / "warm.tsv") == ref);
    CHECK(slurp(work / "corrupt.tsv") == ref);
    CHECK(slurp(work / "again.tsv") == ref);
    CHECK(slurp(work / "zwarm.tsv") == slurp(work / "zcold.tsv"));
    CHECK(slurp(work / "zagain.tsv") == slurp(work / "zcold.tsv"));
    // environment variable selects the cache when no flag is given; the flag wins
    fs::path envc = work / "envcache", flagc = work / "flagcache";
    CHECK(run(dl, "env.tsv", "SPTL_CACHE_DIR=" + envc.string()) == 0);
    CHECK(fs::exists(envc / "primes.bin"));
    CHECK(run("--cache-dir " + flagc.string() + " " + dl, "flag.tsv", "SPTL_CACHE_DIR=" + envc.string() + "x") == 0);
    CHECK(fs::exists(flagc / "primes.bin"));
    CHECK(!fs::exists(envc.string() + "x"));
    CHECK(slurp(work / "env.tsv") == ref);
}

TEST_CASE("JSON mirrors TSV")
{
    Workdir w;
    for (std::string cmd : {"density-pairings --beta 0.25", "zagier-verify --k 12 --m 1..2 --s 2+0.5i",
                            "lvalue --fn zeta --s 2,3+1i", "demo-one-level --k 12 --r 2"}) {
        CAPTURE(cmd);
        CHECK(run(cmd, "t.tsv") == 0);
        CHECK(run("--format json " + cmd, "t.json") == 0);
        auto rows = tsv(slurp(work / "t.tsv"));
        auto j = nlohmann::json::parse(slurp(work / "t.json"));
        REQUIRE(rows.size() >= 2);
        REQUIRE(j.is_array());
        CHECK(j.size() == rows.size() - 1);
        for (size_t i = 1; i < rows.size(); ++i)
            for (size_t c = 0; c < rows[0].size(); ++c) {
                const auto &v = j[i - 1].at(rows[0][c]);
                if (v.is_string())
                    CHECK(v.get<std::string>() == rows[i][c]);
                else {
                    double a = v.get<double>(), b = std::stod(rows[i][c]);
                    CHECK(std::fabs(a - b) <= 1e-14 * std::max(1.0, std::fabs(b)));
                }
            }
    }
}

TEST_CASE("plot output is two numeric columns")
{
    Workdir w;
    CHECK(run("density-limit --r 1 --z 1 --plot " + (work / "p.tsv").string()) == 0);
    auto rows = tsv(slurp(work / "p.tsv"));
    REQUIRE(rows.size() >= 4);
    for (auto &r : rows) {
        REQUIRE(r.size() == 2);
        CHECK(std::isfinite(std::stod(r[0])));
        CHECK(std::isfinite(std::stod(r[1])));
    }
}
