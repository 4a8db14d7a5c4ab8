#include "sccube/maxterm_table.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace sccube {

const std::vector<PrintedMaxterm>& published_simeck_table() {
    static const std::vector<PrintedMaxterm> rows = {
        {{0, 1, 2, 3, 4, 61}, {11}},
        {{0, 1, 2, 3, 6, 20}, {12}},
        {{0, 1, 2, 3, 15, 60}, {10}},
        {{0, 1, 2, 3, 57, 58}, {13}},
        {{0, 1, 2, 4, 21, 59}, {0}},
        {{0, 1, 2, 4, 58, 61}, {7}},
        {{0, 1, 2, 7, 19, 58}, {20, 14, 13}},
        {{0, 1, 2, 7, 56, 58}, {20, 23, 14, 13, 2}},
        {{0, 1, 2, 9, 26, 59}, {4}},
        {{0, 1, 2, 10, 27, 53}, {13}},
        {{0, 1, 2, 10, 27, 58}, {3}},
        {{0, 1, 2, 11, 14, 59}, {6}},
        {{0, 1, 2, 13, 19, 58}, {24, 12, 9, 8, 7, 3}},
        {{0, 1, 2, 13, 30, 58}, {24, 9, 8}},
        {{0, 1, 3, 4, 20, 26}, {14}},
        {{0, 1, 3, 8, 20, 53}, {20, 13, 12}},
        {{0, 1, 3, 8, 25, 58}, {20, 24, 13, 14, 13, 0}},
        {{0, 1, 3, 9, 17, 60}, {14, 8}},
        {{0, 1, 3, 11, 58, 63}, {12, 7, 6}},
        {{0, 1, 3, 13, 55, 58}, {0}},
        {{0, 1, 3, 14, 17, 59}, {23, 10, 0}},
        {{0, 1, 3, 14, 20, 58}, {23, 19, 10, 0, 8, 4}},
        {{0, 1, 4, 12, 18, 56}, {23, 17, 8, 7, 6, 2}},
        {{0, 1, 4, 14, 56, 58}, {3}},
        {{0, 1, 5, 17, 22, 60}, {27, 21, 12, 11, 10, 0}},
        {{0, 2, 3, 5, 19, 61}, {27, 12, 11}},
        {{0, 2, 3, 11, 19, 61}, {22, 10, 7, 6, 3, 1}},
        {{0, 2, 7, 29, 56, 58}, {1}},
        {{0, 4, 15, 16, 21, 59}, {20, 20, 11, 10, 0, 3}},
        {{1, 2, 3, 11, 28, 53}, {6, 0}},
        {{1, 2, 4, 9, 26, 59}, {21, 23, 13, 14, 10, 0}},
        {{0, 1, 2, 4, 11, 15, 41, 46}, {20, 20, 10, 3, 3}},
    };
    return rows;
}

std::vector<PrintedMaxterm> rows_from_db(const MaxtermDb& db) {
    std::vector<PrintedMaxterm> out;
    for (const auto& m : db.maxterms) out.push_back({m.cube.indexes(), m.superpoly.variables()});
    return out;
}

const char* to_string(IndexMapping m) { return m == IndexMapping::Identity ? "identity" : "mod32"; }
const char* to_string(KeyNumbering k) { return k == KeyNumbering::MsbFirst ? "msb-first" : "lsb-first"; }

const char* to_string(RowStatus s) {
    switch (s) {
        case RowStatus::Untestable: return "untestable";
        case RowStatus::NotLinear: return "not-linear";
        case RowStatus::Constant: return "constant";
        case RowStatus::Match: return "match";
        case RowStatus::Mismatch: return "mismatch";
    }
    return "?";
}

std::size_t TableReport::count(RowStatus s) const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [s](const RowCheck& r) { return r.status == s; }));
}

std::string TableReport::to_text() const {
    std::ostringstream os;
    os << "mapping=" << to_string(mapping) << " keys=" << to_string(numbering) << " rows=" << rows.size()
       << " match=" << count(RowStatus::Match) << " mismatch=" << count(RowStatus::Mismatch)
       << " not_linear=" << count(RowStatus::NotLinear) << " constant=" << count(RowStatus::Constant)
       << " untestable=" << count(RowStatus::Untestable) << "\n";
    for (const auto& r : rows) {
        os << "  row " << r.row << ": " << to_string(r.status);
        if (r.cube) os << " cube={" << r.cube->to_string() << "}";
        if (r.status == RowStatus::Match || r.status == RowStatus::Mismatch)
            os << " got=[" << r.reconstructed.to_string() << "] printed=[" << r.printed_set.to_string() << "]";
        if (!r.reason.empty()) os << " (" << r.reason << ")";
        os << "\n";
    }
    return os.str();
}

TableReport verify_table(const std::vector<PrintedMaxterm>& rows, IndexMapping mapping, KeyNumbering numbering,
                         const TableCheckConfig& cfg) {
    TableReport rep;
    rep.mapping = mapping;
    rep.numbering = numbering;
    const SimeckLeak leak(cfg.leak);
    std::mt19937_64 rng(cfg.seed);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        RowCheck rc;
        rc.row = i;

        auto key_index = [numbering](int k) { return numbering == KeyNumbering::MsbFirst ? k : kKeyBits - 1 - k; };
        std::set<int> uniq;
        for (int k : row.keys) {
            const int b = key_index(k);
            rc.printed_xor.coeffs ^= key_bit_mask(b);
            uniq.insert(b);
        }
        rc.printed_set = LinearPoly::from_vars({uniq.begin(), uniq.end()});

        std::vector<int> idx;
        bool testable = true;
        for (int c : row.cube) {
            if (mapping == IndexMapping::Identity && c >= kBlockBits) {
                testable = false;
                rc.reason = "index " + std::to_string(c) + " outside the block";
                break;
            }
            idx.push_back(c % kBlockBits);
        }
        if (testable) {
            std::sort(idx.begin(), idx.end());
            if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
                testable = false;
                rc.reason = "mapped indexes collide";
            }
        }
        if (!testable) {
            rep.rows.push_back(std::move(rc));
            continue;
        }

        rc.cube = Cube(idx);
        const Block32 fixed = fixed_pattern(*rc.cube, cfg.fixed_bit_value);
        const BlrVerdict v = blr_test(leak, *rc.cube, fixed, cfg.blr_trials, rng);
        if (v.kind == Linearity::Nonlinear) {
            rc.status = RowStatus::NotLinear;
        } else if (v.kind == Linearity::Constant) {
            rc.status = RowStatus::Constant;
        } else {
            rc.reconstructed = interpolate_superpoly(leak, *rc.cube, fixed);
            if (!verify_superpoly(leak, *rc.cube, fixed, rc.reconstructed, cfg.verify_probes, rng)) {
                rc.status = RowStatus::NotLinear;
                rc.reason = "passed BLR but failed verification";
            } else {
                // printed equations carry no constant term; compare coefficients
                rc.match_xor = rc.reconstructed.coeffs == rc.printed_xor.coeffs;
                rc.match_set = rc.reconstructed.coeffs == rc.printed_set.coeffs;
                rc.status = (rc.match_xor || rc.match_set) ? RowStatus::Match : RowStatus::Mismatch;
            }
        }
        rep.rows.push_back(std::move(rc));
    }
    return rep;
}

}  // namespace sccube
