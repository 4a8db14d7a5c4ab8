#include "sccube/maxterm_db.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sccube/gf2.hpp"

namespace sccube {

namespace {

std::string join(const std::vector<int>& v) {
    std::string s;
    for (int i : v) {
        if (!s.empty()) s += ',';
        s += std::to_string(i);
    }
    return s;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = s.find(sep);
        out.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    for (auto t : split(s, ' '))
        if (!t.empty()) out.push_back(t);
    return out;
}

std::vector<int> parse_index_list(std::string_view s, int limit, std::size_t line, const char* what) {
    std::vector<int> out;
    if (s.empty()) return out;
    for (auto part : split(s, ',')) {
        int v = 0;
        if (!parse_number(part, v) || v < 0 || v >= limit)
            throw DbParseError(line, std::string("bad ") + what + " index '" + std::string(part) + "'");
        out.push_back(v);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Metadata comments are advisory: malformed ones are ignored.
void read_metadata(std::string_view line, MaxtermDb& db) {
    line.remove_prefix(1);
    for (auto tok : tokens(line)) {
        if (tok.starts_with("created=")) {
            db.created = std::string(tok.substr(8));
        } else if (tok.starts_with("candidates=")) {
            std::uint64_t n = 0;
            if (parse_number(tok.substr(11), n)) db.candidates_used = n;
        }
    }
}

}  // namespace

std::vector<LinearPoly> MaxtermDb::superpolys() const {
    std::vector<LinearPoly> out;
    out.reserve(maxterms.size());
    for (const auto& m : maxterms) out.push_back(m.superpoly);
    return out;
}

std::size_t MaxtermDb::rank() const {
    const auto polys = superpolys();
    return rank_of(polys);
}

void write_db(std::ostream& os, const MaxtermDb& db) {
    os << kDbMagic << '\n';
    os << "cipher=" << db.cipher << " round=" << db.leak.round << " hwbit=" << db.leak.hw_bit << " seed=" << db.seed
       << " fixed=" << (db.fixed_value ? 1 : 0);
    if (db.leak.scope == LeakScope::LeftHalf) os << " scope=left";
    os << '\n';
    if (!db.created.empty()) os << "# created=" << db.created << '\n';
    os << "# candidates=" << db.candidates_used << " maxterms=" << db.maxterms.size() << " rank=" << db.rank()
       << '\n';
    for (const auto& m : db.maxterms) {
        os << "cube=" << m.cube.to_string() << " const=" << (m.superpoly.constant ? 1 : 0)
           << " keys=" << join(m.superpoly.variables()) << '\n';
    }
}

std::string db_to_string(const MaxtermDb& db) {
    std::ostringstream os;
    write_db(os, db);
    return os.str();
}

MaxtermDb read_db(std::istream& is) {
    MaxtermDb db;
    std::string raw;
    std::size_t lineno = 0;
    int stage = 0;  // 0: magic, 1: header, 2: maxterms
    while (std::getline(is, raw)) {
        ++lineno;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            read_metadata(line, db);
            continue;
        }

        if (stage == 0) {
            if (line != kDbMagic) throw DbParseError(lineno, "expected '" + std::string(kDbMagic) + "'");
            stage = 1;
            continue;
        }

        if (stage == 1) {
            bool have_cipher = false, have_round = false, have_bit = false, have_seed = false, have_fixed = false;
            for (auto tok : tokens(line)) {
                const auto eq = tok.find('=');
                if (eq == std::string_view::npos) throw DbParseError(lineno, "expected key=value, got '" + std::string(tok) + "'");
                const auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
                if (key == "cipher") {
                    if (val != kCipherId) throw DbParseError(lineno, "unsupported cipher '" + std::string(val) + "'");
                    db.cipher = std::string(val);
                    have_cipher = true;
                } else if (key == "round") {
                    have_round = parse_number(val, db.leak.round);
                    if (!have_round) throw DbParseError(lineno, "bad round");
                } else if (key == "hwbit") {
                    have_bit = parse_number(val, db.leak.hw_bit);
                    if (!have_bit) throw DbParseError(lineno, "bad hwbit");
                } else if (key == "seed") {
                    have_seed = parse_number(val, db.seed);
                    if (!have_seed) throw DbParseError(lineno, "bad seed");
                } else if (key == "fixed") {
                    if (val != "0" && val != "1") throw DbParseError(lineno, "fixed must be 0 or 1");
                    db.fixed_value = val == "1";
                    have_fixed = true;
                } else if (key == "scope") {
                    if (val == "full") db.leak.scope = LeakScope::FullState;
                    else if (val == "left") db.leak.scope = LeakScope::LeftHalf;
                    else throw DbParseError(lineno, "bad scope '" + std::string(val) + "'");
                } else {
                    throw DbParseError(lineno, "unknown header field '" + std::string(key) + "'");
                }
            }
            if (!(have_cipher && have_round && have_bit && have_seed && have_fixed))
                throw DbParseError(lineno, "header needs cipher, round, hwbit, seed and fixed");
            if (!db.leak.valid()) throw DbParseError(lineno, "leakage spec out of range");
            stage = 2;
            continue;
        }

        std::vector<int> cube_idx, keys;
        int constant = -1;
        bool have_cube = false, have_keys = false;
        for (auto tok : tokens(line)) {
            const auto eq = tok.find('=');
            if (eq == std::string_view::npos) throw DbParseError(lineno, "expected key=value, got '" + std::string(tok) + "'");
            const auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "cube") {
                cube_idx = parse_index_list(val, kBlockBits, lineno, "cube");
                have_cube = true;
            } else if (key == "const") {
                if (val != "0" && val != "1") throw DbParseError(lineno, "const must be 0 or 1");
                constant = val == "1";
            } else if (key == "keys") {
                keys = parse_index_list(val, kKeyBits, lineno, "key");
                have_keys = true;
            } else {
                throw DbParseError(lineno, "unknown maxterm field '" + std::string(key) + "'");
            }
        }
        if (!have_cube || constant < 0 || !have_keys) throw DbParseError(lineno, "maxterm needs cube, const and keys");
        Maxterm m;
        try {
            m.cube = Cube(cube_idx);
        } catch (const std::invalid_argument& e) {
            throw DbParseError(lineno, e.what());
        }
        m.superpoly = LinearPoly::from_vars(keys, constant == 1);
        if (m.superpoly.is_constant()) throw DbParseError(lineno, "superpoly is constant");
        m.fixed_bits = fixed_pattern(m.cube, db.fixed_value);
        db.maxterms.push_back(std::move(m));
    }
    if (stage == 0) throw DbParseError(lineno + 1, "missing '" + std::string(kDbMagic) + "'");
    if (stage == 1) throw DbParseError(lineno + 1, "missing header line");
    return db;
}

MaxtermDb db_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_db(is);
}

void save_db(const std::filesystem::path& path, const MaxtermDb& db) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DbIoError("cannot open '" + path.string() + "' for writing");
    write_db(os, db);
    os.flush();
    if (!os) throw DbIoError("write to '" + path.string() + "' failed");
}

MaxtermDb load_db(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DbIoError("cannot open '" + path.string() + "'");
    return read_db(is);
}

std::string db_body(const std::string& text) {
    std::istringstream is(text);
    std::string line, out;
    while (std::getline(is, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        out += std::string(t) + '\n';
    }
    return out;
}

}  // namespace sccube
