#pragma once

// Persisted preprocessing output.
//
//   simeck-sccube-db v1
//   cipher=simeck32/64 round=4 hwbit=1 seed=0 fixed=0
//   # comments and blank lines are ignored
//   cube=3,6,10,12,16,22,24,31 const=0 keys=52
//
// A non-default leak scope adds ` scope=left` to the header line.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sccube/cube_engine.hpp"
#include "sccube/leakage.hpp"

namespace sccube {

inline constexpr const char* kDbMagic = "simeck-sccube-db v1";
inline constexpr const char* kCipherId = "simeck32/64";

struct MaxtermDb {
    std::string cipher = kCipherId;
    LeakageSpec leak{};
    std::uint64_t seed = 0;
    bool fixed_value = false;
    std::vector<Maxterm> maxterms;

    // metadata, written as comments
    std::uint64_t candidates_used = 0;
    std::string created;

    std::vector<LinearPoly> superpolys() const;
    std::size_t rank() const;
    bool empty() const { return maxterms.empty(); }
};

class DbParseError : public std::runtime_error {
public:
    DbParseError(std::size_t line, const std::string& what)
        : std::runtime_error("maxterm db line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DbIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_db(std::ostream& os, const MaxtermDb& db);
std::string db_to_string(const MaxtermDb& db);
/// Throws DbParseError naming the offending line.
MaxtermDb read_db(std::istream& is);
MaxtermDb db_from_string(const std::string& text);

/// Throw DbIoError on filesystem failures.
void save_db(const std::filesystem::path& path, const MaxtermDb& db);
MaxtermDb load_db(const std::filesystem::path& path);

/// Non-comment, non-blank lines of a serialized DB.
std::string db_body(const std::string& text);

}  // namespace sccube
