#include "CLI11.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "spinent/entanglement.hpp"
#include "spinent/oracle.hpp"
#include "spinent/states.hpp"

namespace {

using namespace spinent;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/* Quantum numbers arrive as "3", "5/2", "2.5", or pre-doubled via the
 * --X2 twin flag. Parsing is exact; no float rounding decides halves. */
struct HalfArg {
    std::string text;
    int twice = 0;
    CLI::Option* text_opt = nullptr;
    CLI::Option* twice_opt = nullptr;

    void attach(CLI::App* cmd, const std::string& name, const std::string& help) {
        text_opt = cmd->add_option("--" + name, text, help);
        twice_opt = cmd->add_option("--" + name + "2", twice, "doubled " + name + " (exact integer)");
        text_opt->excludes(twice_opt);
    }

    HalfInt value(const std::string& what) const {
        if (twice_opt->count()) return HalfInt::from_twice(twice);
        if (!text_opt->count())
            throw InvalidQuantumNumbers(what + " is required (" + text_opt->get_name(false, true) +
                                        ")");
        auto parsed = HalfInt::parse(text);
        if (!parsed) throw InvalidQuantumNumbers(what + ": cannot parse '" + text + "'");
        return *parsed;
    }

    bool given() const { return text_opt->count() || twice_opt->count(); }
};

// "1.5", "-2i", "0.5+0.5i", "i" -> complex amplitude
Complex parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InvalidQuantumNumbers("empty amplitude");

    auto to_num = [](const std::string& part) {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        size_t used = 0;
        double v = std::stod(part, &used);
        if (used != part.size()) throw InvalidQuantumNumbers("bad amplitude component '" + part + "'");
        return v;
    };

    try {
        if (s.back() == 'i' || s.back() == 'I') {
            std::string body = s.substr(0, s.size() - 1);
            size_t split = std::string::npos;
            for (size_t k = body.size(); k-- > 1;) {
                if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                    split = k;
                    break;
                }
            }
            if (split == std::string::npos) return Complex(0.0, to_num(body));
            return Complex(to_num(body.substr(0, split)), to_num(body.substr(split)));
        }
        return Complex(to_num(s), 0.0);
    } catch (const std::invalid_argument&) {
        throw InvalidQuantumNumbers("cannot parse amplitude '" + raw + "'");
    } catch (const std::out_of_range&) {
        throw InvalidQuantumNumbers("amplitude out of range '" + raw + "'");
    }
}

std::vector<Complex> parse_amplitudes(const std::string& list) {
    std::vector<Complex> out;
    std::string token;
    for (char c : list + ",") {
        if (c == ',') {
            out.push_back(parse_complex(token));
            token.clear();
        } else {
            token += c;
        }
    }
    return out;
}

void emit(const std::string& path, const std::vector<std::string>& lines) {
    if (path.empty()) {
        for (const auto& l : lines) std::cout << l << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidQuantumNumbers("cannot open output file '" + path + "'");
    for (const auto& l : lines) f << l << '\n';
}

/* Rows are independent, so they may be computed by a worker pool; the
 * buffer keeps them in order and the bytes cannot depend on the thread
 * count. */
std::vector<std::string> compute_rows(size_t count, int threads,
                                      const std::function<std::string(size_t)>& fn) {
    std::vector<std::string> rows(count);
    size_t workers = std::min<size_t>(std::max(threads, 1), count ? count : 1);
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) rows[i] = fn(i);
        return rows;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next++; i < count; i = next++) {
                try {
                    rows[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::vector<HalfInt> valid_js(int N) {
    std::vector<HalfInt> js;
    for (int jt = N % 2; jt <= N; jt += 2) js.push_back(HalfInt::from_twice(jt));
    return js;
}

// minimum-|M| representative of a sector: 0 for integer J, 1/2 otherwise
HalfInt min_m(HalfInt J) { return HalfInt::from_twice(J.twice() % 2); }

int exit_code_for(const Error& e) {
    if (dynamic_cast<const NonNormalized*>(&e) || dynamic_cast<const NegativeProbability*>(&e) ||
        dynamic_cast<const NotHermitian*>(&e) || dynamic_cast<const NoConvergence*>(&e))
        return 1;
    return 2;
}

struct Cli {
    CLI::App app{"exact bipartite entanglement of formation for permutationally invariant "
                 "spin-1/2 ensembles"};
    int rc = 0;

    Cli() { app.require_subcommand(1); }

    int run(int argc, char** argv) {
        setup();
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return exit_code_for(e);
        }
        return rc;
    }

    void setup() {
        setup_point();
        setup_sweep_m();
        setup_sweep_j();
        setup_sweep_n_particles();
        setup_sweep_partition();
        setup_ghz();
        setup_squeezed();
        setup_ddist();
        setup_oracle_check();
    }

    void setup_point() {
        auto* cmd = app.add_subcommand("point", "E_F of one state at one bipartition");
        auto N = std::make_shared<int>(0);
        auto n = std::make_shared<int>(0);
        auto J = std::make_shared<HalfArg>();
        auto M = std::make_shared<HalfArg>();
        auto amps = std::make_shared<std::string>();
        auto blocks = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N, "number of spins")->required();
        J->attach(cmd, "J", "total spin sector");
        M->attach(cmd, "M", "magnetization eigenstate");
        auto* amps_opt =
            cmd->add_option("--amps", *amps, "comma-separated amplitudes c_{-J}..c_J, e.g. "
                                             "'0.5,0,0.5+0.5i' (normalized internally)");
        amps_opt->excludes(M->text_opt)->excludes(M->twice_opt);
        cmd->add_option("--n", *n, "spins in the first block")->required();
        cmd->add_flag("--blocks", *blocks, "also list per-(j1,j2) weights and entropies");
        cmd->add_option("-o,--output", *out, "write CSV here instead of stdout");
        cmd->callback([=, this] {
            HalfInt j = J->value("J");
            std::vector<std::string> lines{"N,J,M_or_state,n,EF_bits"};
            EFResult r;
            std::string label;
            if (amps_opt->count()) {
                r = ef(custom(*N, j, parse_amplitudes(*amps)), *n);
                label = "custom";
            } else {
                HalfInt m = M->value("M");
                r = ef_eigenstate(*N, j, m, *n);
                label = m.str();
            }
            lines.push_back(std::to_string(*N) + "," + j.str() + "," + label + "," +
                            std::to_string(*n) + "," + fmt12(r.ef_bits));
            if (*blocks) {
                lines.push_back("j1,j2,weight,entropy_bits");
                for (const auto& b : r.blocks)
                    lines.push_back(b.pair.j1.str() + "," + b.pair.j2.str() + "," +
                                    fmt12(to_double(b.pair.weight)) + "," + fmt12(b.entropy));
            }
            emit(*out, lines);
        });
    }

    void setup_sweep_m() {
        auto* cmd = app.add_subcommand("sweep-m", "E_F versus magnetization M >= 0 in one sector");
        auto N = std::make_shared<int>(0);
        auto n = std::make_shared<int>(0);
        auto J = std::make_shared<HalfArg>();
        auto threads = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N, "number of spins")->required();
        J->attach(cmd, "J", "total spin sector");
        cmd->add_option("--n", *n, "spins in the first block")->required();
        cmd->add_option("--threads", *threads, "worker threads for rows");
        cmd->add_option("-o,--output", *out, "write CSV here instead of stdout");
        cmd->callback([=, this] {
            HalfInt j = J->value("J");
            require_total_j(*N, j);
            std::vector<HalfInt> ms;
            for (int mt = j.twice() % 2; mt <= j.twice(); mt += 2)
                ms.push_back(HalfInt::from_twice(mt));
            auto rows = compute_rows(ms.size(), *threads, [&](size_t i) {
                return std::to_string(*N) + "," + j.str() + "," + std::to_string(*n) + "," +
                       ms[i].str() + "," + fmt12(ef_eigenstate(*N, j, ms[i], *n).ef_bits);
            });
            rows.insert(rows.begin(), "N,J,n,M,EF_bits");
            emit(*out, rows);
        });
    }

    void setup_sweep_j() {
        auto* cmd = app.add_subcommand(
            "sweep-j", "E_F versus total spin J at maximal (M=J) or minimal (M=0 or 1/2) "
                       "magnetization");
        auto N = std::make_shared<int>(0);
        auto n = std::make_shared<int>(0);
        auto mode = std::make_shared<std::string>();
        auto threads = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N, "number of spins")->required();
        cmd->add_option("--m-mode", *mode, "max (M=J) or min (M=0 or 1/2)")
            ->required()
            ->check(CLI::IsMember({"max", "min"}));
        cmd->add_option("--n", *n, "spins in the first block")->required();
        cmd->add_option("--threads", *threads, "worker threads for rows");
        cmd->add_option("-o,--output", *out, "write CSV here instead of stdout");
        cmd->callback([=, this] {
            auto js = valid_js(*N);
            auto rows = compute_rows(js.size(), *threads, [&](size_t i) {
                HalfInt m = *mode == "max" ? js[i] : min_m(js[i]);
                return std::to_string(*N) + "," + std::to_string(*n) + "," + js[i].str() + "," +
                       m.str() + "," + fmt12(ef_eigenstate(*N, js[i], m, *n).ef_bits);
            });
            rows.insert(rows.begin(), "N,n,J,M,EF_bits");
            emit(*out, rows);
        });
    }

    void setup_sweep_n_particles() {
        auto* cmd = app.add_subcommand(
            "sweep-n-particles",
            "E_F versus ensemble size N for minimum-|M| states at fixed sector choice");
        auto jmode = std::make_shared<std::string>();
        auto split = std::make_shared<std::string>();
        auto nmin = std::make_shared<int>(2);
        auto nmax = std::make_shared<int>(50);
        auto threads = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--j-mode", *jmode, "min (lowest J sector) or dicke (J=N/2)")
            ->required()
            ->check(CLI::IsMember({"min", "dicke"}));
        cmd->add_option("--split", *split, "even (n=N/2) or single (n=1)")
            ->required()
            ->check(CLI::IsMember({"even", "single"}));
        cmd->add_option("--nmin", *nmin, "smallest N (default 2)");
        cmd->add_option("--nmax", *nmax, "largest N (default 50)");
        cmd->add_option("--threads", *threads, "worker threads for rows");
        cmd->add_option("-o,--output", *out, "write CSV here instead of stdout");
        cmd->callback([=, this] {
            if (*nmin < 2 || *nmax < *nmin)
                throw InvalidQuantumNumbers("sweep-n-particles: need 2 <= nmin <= nmax");
            size_t count = static_cast<size_t>(*nmax - *nmin + 1);
            auto rows = compute_rows(count, *threads, [&](size_t i) {
                int N = *nmin + static_cast<int>(i);
                HalfInt j = *jmode == "dicke" ? HalfInt::from_twice(N) : j_floor(N);
                HalfInt m = min_m(j);
                int n = *split == "even" ? N / 2 : 1;
                return std::to_string(N) + "," + j.str() + "," + m.str() + "," +
                       std::to_string(n) + "," + fmt12(ef_eigenstate(N, j, m, n).ef_bits);
            });
            rows.insert(rows.begin(), "N,J,M,n,EF_bits");
            emit(*out, rows);
        });
    }

    void setup_sweep_partition() {
        auto* cmd = app.add_subcommand(
            "sweep-partition", "E_F versus block size n for the minimum-|M| state of one sector");
        auto N = std::make_shared<int>(0);
        auto J = std::make_shared<HalfArg>();
        auto nmin = std::make_shared<int>(1);
        auto nmax = std::make_shared<int>(0);
        auto threads = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N, "number of spins")->required();
        J->attach(cmd, "J", "total spin sector");
        cmd->add_option("--nmin", *nmin, "smallest n (default 1)");
        cmd->add_option("--nmax", *nmax, "largest n (default N/2)");
        cmd->add_option("--threads", *threads, "worker threads for rows");
        cmd->add_option("-o,--output", *out, "write CSV here instead of stdout");
        cmd->callback([=, this] {
            HalfInt j = J->value("J");
            require_total_j(*N, j);
            HalfInt m = min_m(j);
            int hi = *nmax > 0 ? *nmax : *N / 2;
            if (*nmin < 1 || hi < *nmin)
                throw InvalidSplit("sweep-partition: need 1 <= nmin <= nmax");
            size_t count = static_cast<size_t>(hi - *nmin + 1);
            auto rows = compute_rows(count, *threads, [&](size_t i) {
                int n = *nmin + static_cast<int>(i);
                return std::to_string(*N) + "," + j.str() + "," + m.str() + "," +
                       std::to_string(n) + "," + fmt12(ef_eigenstate(*N, j, m, n).ef_bits);
            });
            rows.insert(rows.begin(), "N,J,M,n,EF_bits");
            emit(*out, rows);
        });
    }

    void setup_ghz() {
        auto* cmd = app.add_subcommand(
            "ghz", "E_F of the extremal-level superpositions c_J = c_{-J}, one row per sector");
        auto N = std::make_shared<int>(0);
        auto n = std::make_shared<int>(0);
        auto threads = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N, "number of spins")->required();
        cmd->add_option("--n", *n, "spins in the first block")->required();
        cmd->add_option("--threads", *threads, "worker threads for rows");
        cmd->add_option("-o,--output", *out, "write CSV here instead of stdout");
        cmd->callback([=, this] {
            if (*N < 2) throw InvalidSplit("ghz: need at least two spins to cut");
            std::vector<HalfInt> js;
            for (HalfInt j : valid_js(*N))
                if (j.twice() > 0) js.push_back(j);
            auto rows = compute_rows(js.size(), *threads, [&](size_t i) {
                return std::to_string(*N) + "," + js[i].str() + "," + std::to_string(*n) + "," +
                       fmt12(ef(ghz_like(*N, js[i]), *n).ef_bits);
            });
            rows.insert(rows.begin(), "N,J,n,EF_bits");
            emit(*out, rows);
        });
    }

    void setup_squeezed() {
        auto* cmd = app.add_subcommand(
            "squeezed", "E_F of dissipative spin-squeezed states for each J and squeezing t");
        auto N = std::make_shared<int>(0);
        auto n = std::make_shared<int>(0);
        auto ts = std::make_shared<std::vector<double>>();
        auto threads = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N, "number of spins (even)")->required();
        cmd->add_option("--t", *ts, "squeezing strengths tanh(r) in [0,1], comma-separated")
            ->required()
            ->delimiter(',');
        cmd->add_option("--n", *n, "spins in the first block")->required();
        cmd->add_option("--threads", *threads, "worker threads for rows");
        cmd->add_option("-o,--output", *out, "write CSV here instead of stdout");
        cmd->callback([=, this] {
            if (*N < 2 || *N % 2 != 0)
                throw InvalidQuantumNumbers("squeezed: N must be even and positive");
            std::vector<std::pair<double, int>> grid;
            for (double t : *ts)
                for (int j = 0; j <= *N / 2; ++j) grid.emplace_back(t, j);
            auto rows = compute_rows(grid.size(), *threads, [&](size_t i) {
                auto [t, j] = grid[i];
                return std::to_string(*N) + "," + std::to_string(j) + "," + fmt12(t) + "," +
                       std::to_string(*n) + "," + fmt12(ef(squeezed(*N, HalfInt(j), t), *n).ef_bits);
            });
            rows.insert(rows.begin(), "N,J,t,n,EF_bits");
            emit(*out, rows);
        });
    }

    void setup_ddist() {
        auto* cmd = app.add_subcommand(
            "ddist", "probability that the cut sees an effective d-level pair, per realized d");
        auto N = std::make_shared<int>(0);
        auto n = std::make_shared<int>(0);
        auto J = std::make_shared<HalfArg>();
        auto out = std::make_shared<std::string>();
        cmd->add_option("--N", *N, "number of spins")->required();
        J->attach(cmd, "J", "total spin sector");
        cmd->add_option("--n", *n, "spins in the first block")->required();
        cmd->add_option("-o,--output", *out, "write CSV here instead of stdout");
        cmd->callback([=, this] {
            HalfInt j = J->value("J");
            auto dist = qudit_distribution(j, *N, *n);
            std::vector<std::string> lines{"N,J,n,d,prob"};
            for (const auto& [d, p] : dist.prob)
                lines.push_back(std::to_string(*N) + "," + j.str() + "," + std::to_string(*n) +
                                "," + std::to_string(d) + "," + fmt12(p));
            emit(*out, lines);
        });
    }

    void setup_oracle_check() {
        auto* cmd = app.add_subcommand(
            "oracle-check",
            "compare the subensemble formula against the brute-force average for every "
            "eigenstate up to a size cap");
        auto nmax = std::make_shared<int>(8);
        auto out = std::make_shared<std::string>();
        cmd->add_option("--nmax", *nmax, "largest N to check (2..10, default 8)");
        cmd->add_option("-o,--output", *out, "write the report here instead of stdout");
        cmd->callback([=, this] {
            if (*nmax < 2 || *nmax > 10)
                throw InvalidQuantumNumbers("oracle-check: --nmax must be in 2..10");
            long cases = 0;
            double worst = 0.0;
            int wn = 0, wjt = 0, wmt = 0, wcut = 0;
            for (int N = 2; N <= *nmax; ++N) {
                for (int jt = N % 2; jt <= N; jt += 2) {
                    HalfInt j = HalfInt::from_twice(jt);
                    for (int mt = -jt; mt <= jt; mt += 2) {
                        HalfInt m = HalfInt::from_twice(mt);
                        for (int n = 1; n < N; ++n) {
                            double dev = std::abs(ef_eigenstate(N, j, m, n).ef_bits -
                                                  oracle_ef(eigenstate(N, j, m), n));
                            ++cases;
                            if (dev > worst) {
                                worst = dev;
                                wn = N;
                                wjt = jt;
                                wmt = mt;
                                wcut = n;
                            }
                        }
                    }
                }
            }
            bool ok = worst <= 1e-9;
            char line[160];
            std::snprintf(line, sizeof line,
                          "max |formula - oracle| = %.3e at N=%d J=%s M=%s n=%d", worst, wn,
                          HalfInt::from_twice(wjt).str().c_str(),
                          HalfInt::from_twice(wmt).str().c_str(), wcut);
            std::vector<std::string> lines{
                "checked " + std::to_string(cases) + " eigenstate cases up to N=" +
                    std::to_string(*nmax),
                line, std::string("result: ") + (ok ? "OK" : "FAIL") + " (threshold 1e-09)"};
            emit(*out, lines);
            if (!ok) rc = 1;
        });
    }
};

} // namespace

int main(int argc, char** argv) {
    Cli cli;
    return cli.run(argc, argv);
}
