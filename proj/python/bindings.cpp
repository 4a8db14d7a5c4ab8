#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "sccube/attack.hpp"
#include "sccube/cube_engine.hpp"
#include "sccube/gf2.hpp"
#include "sccube/hex.hpp"
#include "sccube/leakage.hpp"
#include "sccube/maxterm_db.hpp"
#include "sccube/selftest.hpp"
#include "sccube/simeck.hpp"

namespace py = pybind11;
using namespace sccube;

namespace {

using PyOracle = std::function<bool(Block32, std::uint64_t)>;

LeakScope scope_from(const std::string& s) {
    if (s == "full") return LeakScope::FullState;
    if (s == "left") return LeakScope::LeftHalf;
    throw std::invalid_argument("scope must be 'full' or 'left'");
}

std::string scope_name(LeakScope s) { return s == LeakScope::LeftHalf ? "left" : "full"; }

LeakageSpec make_spec(int round, int hw_bit, const std::string& scope) {
    LeakageSpec s{round, hw_bit, scope_from(scope)};
    s.validate();
    return s;
}

Block32 to_block(std::uint64_t v) {
    if (v > 0xFFFFFFFFull) throw std::invalid_argument("block must fit in 32 bits");
    return static_cast<Block32>(v);
}

}  // namespace

PYBIND11_MODULE(_sccube, m) {
    m.doc() = "Simeck32/64 side-channel cube attack workbench";

    py::register_exception<DbParseError>(m, "DbParseError", PyExc_ValueError);
    py::register_exception<DbIoError>(m, "DbIoError", PyExc_OSError);
    py::register_exception<InconsistentSystem>(m, "InconsistentSystem", PyExc_ValueError);
    py::register_exception<OracleMismatch>(m, "OracleMismatch", PyExc_RuntimeError);

    // cipher
    m.def(
        "encrypt",
        [](std::uint64_t pt, std::uint64_t key, int rounds) {
            return encrypt_partial(to_block(pt), MasterKey{key}, rounds).block();
        },
        py::arg("pt"), py::arg("key"), py::arg("rounds") = kRounds,
        "Encrypt a 32-bit block; with rounds < 32 return the state after that many rounds.");
    m.def(
        "decrypt", [](std::uint64_t ct, std::uint64_t key) { return decrypt(to_block(ct), MasterKey{key}); },
        py::arg("ct"), py::arg("key"));
    m.def(
        "key_schedule",
        [](std::uint64_t key) {
            const RoundKeys k = key_schedule(MasterKey{key});
            return std::vector<Word16>(k.begin(), k.end());
        },
        py::arg("key"));
    m.def("parse_block_hex", &parse_block_hex, py::arg("text"));
    m.def(
        "parse_key_hex", [](const std::string& s) { return parse_key_hex(s).bits; }, py::arg("text"));
    m.def("format_block_hex", &format_block_hex, py::arg("block"));
    m.def(
        "format_key_hex", [](std::uint64_t k) { return format_key_hex(MasterKey{k}); }, py::arg("key"));

    // leakage
    m.def(
        "hamming_weight",
        [](std::uint64_t state, const std::string& scope) {
            return hamming_weight(CipherState::from_block(to_block(state)), scope_from(scope));
        },
        py::arg("state"), py::arg("scope") = "full");
    m.def(
        "leak",
        [](std::uint64_t pt, std::uint64_t key, int round, int hw_bit, const std::string& scope) {
            return leak_bit(to_block(pt), MasterKey{key}, make_spec(round, hw_bit, scope));
        },
        py::arg("pt"), py::arg("key"), py::arg("round") = 4, py::arg("hw_bit") = 1, py::arg("scope") = "full");

    // polynomials
    py::class_<LinearPoly>(m, "LinearPoly")
        .def(py::init([](const std::vector<int>& vars, bool constant) { return LinearPoly::from_vars(vars, constant); }),
             py::arg("variables") = std::vector<int>{}, py::arg("constant") = false)
        .def_readwrite("constant", &LinearPoly::constant)
        .def_readwrite("coeffs", &LinearPoly::coeffs)
        .def("variables", &LinearPoly::variables)
        .def("eval", &LinearPoly::eval, py::arg("key"))
        .def("is_constant", &LinearPoly::is_constant)
        .def("__str__", &LinearPoly::to_string)
        .def("__repr__", [](const LinearPoly& p) { return "LinearPoly('" + p.to_string() + "')"; })
        .def("__eq__", [](const LinearPoly& a, const LinearPoly& b) { return a == b; });

    py::class_<Maxterm>(m, "Maxterm")
        .def(py::init([](const std::vector<int>& cube, const LinearPoly& p, std::uint64_t fixed) {
                 return Maxterm{Cube(cube), p, to_block(fixed)};
             }),
             py::arg("cube"), py::arg("superpoly"), py::arg("fixed_bits") = 0)
        .def_property_readonly("cube", [](const Maxterm& t) { return t.cube.indexes(); })
        .def_readonly("superpoly", &Maxterm::superpoly)
        .def_readonly("fixed_bits", &Maxterm::fixed_bits)
        .def("__repr__", [](const Maxterm& t) {
            return "Maxterm(cube=[" + t.cube.to_string() + "], superpoly='" + t.superpoly.to_string() + "')";
        });

    // cube engine
    m.def(
        "cube_sum",
        [](const PyOracle& oracle, const std::vector<int>& cube, std::uint64_t fixed, std::uint64_t key) {
            return cube_sum(oracle, Cube(cube), to_block(fixed), key);
        },
        py::arg("oracle"), py::arg("cube"), py::arg("fixed") = 0, py::arg("key") = 0,
        "XOR of oracle(pt, key) over every assignment of the cube bits (bit 0 is the MSB).");
    m.def(
        "leak_cube_sum",
        [](const std::vector<int>& cube, std::uint64_t key, std::uint64_t fixed, int round, int hw_bit,
           const std::string& scope) {
            return cube_sum(SimeckLeak(make_spec(round, hw_bit, scope)), Cube(cube), to_block(fixed), key);
        },
        py::arg("cube"), py::arg("key"), py::arg("fixed") = 0, py::arg("round") = 4, py::arg("hw_bit") = 1,
        py::arg("scope") = "full");
    m.def(
        "blr_test",
        [](const PyOracle& oracle, const std::vector<int>& cube, std::uint64_t fixed, int trials, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            const BlrVerdict v = blr_test(oracle, Cube(cube), to_block(fixed), trials, rng);
            return py::make_tuple(std::string(to_string(v.kind)), v.trial_count);
        },
        py::arg("oracle"), py::arg("cube"), py::arg("fixed") = 0, py::arg("trials") = 300, py::arg("seed") = 0,
        "Returns (verdict, trials) with verdict 'linear', 'nonlinear' or 'constant'.");
    m.def(
        "reconstruct_superpoly",
        [](const PyOracle& oracle, const std::vector<int>& cube, std::uint64_t fixed, std::uint64_t seed,
           int post_check_probes) {
            std::mt19937_64 rng(seed);
            return superpoly_reconstruct(oracle, Cube(cube), to_block(fixed), rng, post_check_probes);
        },
        py::arg("oracle"), py::arg("cube"), py::arg("fixed") = 0, py::arg("seed") = 0,
        py::arg("post_check_probes") = 1);

    py::class_<SearchConfig>(m, "SearchConfig")
        .def(py::init<>())
        .def_readwrite("cube_sizes", &SearchConfig::cube_sizes)
        .def_property(
            "round", [](const SearchConfig& c) { return c.leak.round; },
            [](SearchConfig& c, int r) { c.leak.round = r; })
        .def_property(
            "hw_bit", [](const SearchConfig& c) { return c.leak.hw_bit; },
            [](SearchConfig& c, int b) { c.leak.hw_bit = b; })
        .def_property(
            "scope", [](const SearchConfig& c) { return scope_name(c.leak.scope); },
            [](SearchConfig& c, const std::string& s) { c.leak.scope = scope_from(s); })
        .def_readwrite("blr_trials", &SearchConfig::blr_trials)
        .def_readwrite("candidate_budget", &SearchConfig::candidate_budget)
        .def_readwrite("seed", &SearchConfig::rng_seed)
        .def_readwrite("target_rank", &SearchConfig::target_rank)
        .def_readwrite("fixed_bit_value", &SearchConfig::fixed_bit_value)
        .def_readwrite("constant_probes", &SearchConfig::constant_probes)
        .def_readwrite("verify_probes", &SearchConfig::verify_probes)
        .def_readwrite("threads", &SearchConfig::threads);

    py::class_<SearchStats>(m, "SearchStats")
        .def_readonly("candidates_tried", &SearchStats::candidates_tried)
        .def_readonly("duplicates", &SearchStats::duplicates)
        .def_readonly("constant_screened", &SearchStats::constant_screened)
        .def_readonly("blr_nonlinear", &SearchStats::blr_nonlinear)
        .def_readonly("blr_constant", &SearchStats::blr_constant)
        .def_readonly("reconstruct_rejected", &SearchStats::reconstruct_rejected)
        .def_readonly("verify_rejected", &SearchStats::verify_rejected)
        .def_readonly("cube_sums", &SearchStats::cube_sums);

    py::class_<SearchResult>(m, "SearchResult")
        .def_readonly("maxterms", &SearchResult::maxterms)
        .def_readonly("rank", &SearchResult::rank)
        .def_readonly("reached_target", &SearchResult::reached_target)
        .def_readonly("stats", &SearchResult::stats)
        .def_readonly("diagnostic", &SearchResult::diagnostic);

    m.def(
        "maxterm_search",
        [](const PyOracle& oracle, SearchConfig cfg) {
            // a Python oracle needs the GIL, so it is always evaluated on this thread
            cfg.threads = 1;
            return maxterm_search(oracle, cfg);
        },
        py::arg("oracle"), py::arg("config"));

    // maxterm database
    py::class_<MaxtermDb>(m, "MaxtermDb")
        .def(py::init<>())
        .def_property(
            "round", [](const MaxtermDb& d) { return d.leak.round; }, [](MaxtermDb& d, int r) { d.leak.round = r; })
        .def_property(
            "hw_bit", [](const MaxtermDb& d) { return d.leak.hw_bit; },
            [](MaxtermDb& d, int b) { d.leak.hw_bit = b; })
        .def_property_readonly("scope", [](const MaxtermDb& d) { return scope_name(d.leak.scope); })
        .def_readwrite("seed", &MaxtermDb::seed)
        .def_readwrite("fixed_value", &MaxtermDb::fixed_value)
        .def_readwrite("maxterms", &MaxtermDb::maxterms)
        .def_readwrite("candidates_used", &MaxtermDb::candidates_used)
        .def_readwrite("created", &MaxtermDb::created)
        .def("rank", &MaxtermDb::rank)
        .def("superpolys", &MaxtermDb::superpolys)
        .def("to_string", [](const MaxtermDb& d) { return db_to_string(d); })
        .def_static("from_string", &db_from_string, py::arg("text"))
        .def("save", [](const MaxtermDb& d, const std::string& path) { save_db(path, d); }, py::arg("path"))
        .def_static("load", [](const std::string& path) { return load_db(path); }, py::arg("path"))
        .def("__len__", [](const MaxtermDb& d) { return d.maxterms.size(); });

    m.def(
        "preprocess",
        [](const SearchConfig& cfg) {
            PreprocessResult r;
            {
                py::gil_scoped_release release;
                r = preprocess(cfg);
            }
            return py::make_tuple(r.db, r.search);
        },
        py::arg("config") = SearchConfig{}, "Returns (MaxtermDb, SearchResult).");
    m.def("prune_to_independent", &prune_to_independent, py::arg("db"));

    // online phase and recovery
    py::class_<OnlineData>(m, "OnlineData")
        .def_readonly("sums", &OnlineData::sums)
        .def_readonly("queries", &OnlineData::queries)
        .def_readonly("distinct_cubes", &OnlineData::distinct_cubes);

    m.def(
        "online_collect",
        [](const MaxtermDb& db, std::uint64_t hidden_key) {
            VictimOracle victim = VictimOracle::simeck(MasterKey{hidden_key}, db.leak);
            return online_collect(db, victim);
        },
        py::arg("db"), py::arg("hidden_key"), "Cube sums from a simulated victim holding hidden_key.");

    py::class_<LinearRecovery>(m, "LinearRecovery")
        .def_property_readonly("rank", &LinearRecovery::rank)
        .def_readonly("equations", &LinearRecovery::equations)
        .def_readonly("determined", &LinearRecovery::determined)
        .def_readonly("free_bits", &LinearRecovery::free_bits)
        .def("relations", &LinearRecovery::relations)
        .def(
            "consistent_with", [](const LinearRecovery& r, std::uint64_t k) { return r.consistent_with(MasterKey{k}); },
            py::arg("key"))
        .def(
            "key_for",
            [](const LinearRecovery& r, const std::vector<std::uint8_t>& free_values) {
                if (free_values.size() != r.free_bits.size())
                    throw std::invalid_argument("need one value per free bit");
                return r.key_for(free_values).bits;
            },
            py::arg("free_values"));

    m.def(
        "recover_linear",
        [](const MaxtermDb& db, const std::vector<std::uint8_t>& observed) { return recover_linear(db, observed); },
        py::arg("db"), py::arg("observed"));

    py::class_<BruteForceResult>(m, "BruteForceResult")
        .def_property_readonly("key",
                               [](const BruteForceResult& r) -> std::optional<std::uint64_t> {
                                   if (r.key) return r.key->bits;
                                   return std::nullopt;
                               })
        .def_readonly("tried", &BruteForceResult::tried)
        .def_readonly("exhausted", &BruteForceResult::exhausted)
        .def_readonly("unknown_bits", &BruteForceResult::unknown_bits);

    m.def(
        "brute_force_remaining",
        [](const LinearRecovery& rec, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
           std::uint64_t budget, const std::map<int, bool>& revealed, unsigned threads) {
            std::vector<KnownPair> kp;
            for (const auto& [pt, ct] : pairs) kp.push_back({to_block(pt), to_block(ct)});
            py::gil_scoped_release release;
            return brute_force_remaining(rec, kp, budget, revealed, threads);
        },
        py::arg("recovery"), py::arg("pairs"), py::arg("budget") = std::uint64_t{1} << 34,
        py::arg("revealed") = std::map<int, bool>{}, py::arg("threads") = 1u,
        "pairs is a list of (plaintext, ciphertext); revealed pins free bits (test aid).");

    py::class_<ComplexityReport>(m, "ComplexityReport")
        .def_readonly("chosen_plaintexts", &ComplexityReport::chosen_plaintexts)
        .def_readonly("log2_plaintexts", &ComplexityReport::log2_plaintexts)
        .def_readonly("cubes_by_size", &ComplexityReport::cubes_by_size)
        .def_readonly("published_composition", &ComplexityReport::published_composition)
        .def_readonly("note", &ComplexityReport::note);
    m.def("complexity_report", &complexity_report, py::arg("db"));
    m.def("format_log2", &format_log2, py::arg("value"));

    // GF(2)
    m.def(
        "rank_of", [](const std::vector<LinearPoly>& eqs) { return rank_of(eqs); }, py::arg("equations"));
    m.def(
        "solve",
        [](const std::vector<std::vector<std::uint8_t>>& rows, const std::vector<std::uint8_t>& rhs) {
            const std::size_t cols = rows.empty() ? 0 : rows.front().size();
            Gf2System sys{Gf2Matrix(rows.size(), cols), rhs};
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix");
                for (std::size_t c = 0; c < cols; ++c) sys.matrix.set(r, c, rows[r][c] & 1u);
            }
            const Gf2Solution s = solve(sys);
            py::dict out;
            out["rank"] = s.rank();
            out["pivot_cols"] = s.pivot_cols;
            out["free_cols"] = s.free_cols;
            out["particular"] = s.assign(std::vector<std::uint8_t>(s.free_cols.size(), 0));
            return out;
        },
        py::arg("rows"), py::arg("rhs"),
        "Solve a dense GF(2) system; returns rank, pivot/free columns and the solution with free columns zero.");

    // selftest
    m.def(
        "selftest",
        [](std::uint64_t seed) {
            SelftestOptions opts;
            opts.seed = seed;
            const SelftestReport r = run_selftest(opts);
            return py::make_tuple(r.passed(), r.to_text());
        },
        py::arg("seed") = 1, "Returns (passed, report_text).");
}
