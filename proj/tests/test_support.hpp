#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lakefind/config.hpp"
#include "lakefind/ingest.hpp"
#include "lakefind/table.hpp"

namespace testsupport {

/// Temporary directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        namespace fs = std::filesystem;
        path_ = fs::temp_directory_path() / ("lakefind_" + tag + "_" + unique());
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    static std::string unique() {
        static std::atomic<unsigned> counter{0};
        return std::to_string(::getpid()) + "_" + std::to_string(counter++);
    }
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// In-memory dataset builder for unit tests: columns given as
/// (name, {cells...}); kinds inferred with the provided config.
inline lakefind::Dataset make_table(
    const std::string& id,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& columns,
    const lakefind::Config& cfg = {}) {
    lakefind::Dataset ds;
    ds.id = id;
    auto dot = id.rfind('.');
    ds.name = dot == std::string::npos ? id : id.substr(0, dot);
    ds.row_count = columns.empty() ? 0 : columns.front().second.size();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        lakefind::Attribute attr;
        attr.name = columns[c].first;
        attr.position = c;
        attr.kind = lakefind::infer_kind(columns[c].second, cfg);
        for (const auto& raw : columns[c].second) {
            std::string cell = lakefind::trim(raw);
            if (cfg.is_null_marker(cell)) {
                ++attr.null_count;
                continue;
            }
            if (attr.kind == lakefind::ColumnKind::Numeric) {
                double v;
                if (!lakefind::parse_number(cell, v)) {
                    ++attr.null_count;
                    continue;
                }
                attr.numbers.push_back(v);
            }
            attr.values.push_back(cell);
        }
        ds.attributes.push_back(std::move(attr));
    }
    return ds;
}

/// The four running-example tables: two strongly related practice tables, a
/// weakly related bridge table, and the query target.
inline std::string fixture_s1_csv() {
    return "Practice Name,Address,City,Postcode,Patients\n"
           "Dr E Cullen,51 Botanic Av,Belfast,BT7 1JL,1202\n"
           "Blackfriars,1a Chapel St,Salford,M3 6AF,3572\n";
}

inline std::string fixture_s2_csv() {
    return "Practice,City,Postcode,Payment\n"
           "The London Clinic,London,W1G 6BW,73648\n"
           "Blackfriars,Salford,M3 6AF,15530\n";
}

inline std::string fixture_s3_csv() {
    return "GP,Location,Opening hours\n"
           "Blackfriars,Salford,08:00-18:00\n"
           "Radclife Care,-,07:00-20:00\n";
}

inline std::string fixture_target_csv() {
    return "Practice,Street,City,Postcode,Hours\n"
           "Radclife,69 Church St,Manchester,M26 2SP,07:00-20:00\n"
           "Bolton Medical,21 Rupert St,Bolton,BL3 6PY,08:00-16:00\n";
}

inline void write_fixture_lake(const std::filesystem::path& dir) {
    write_file(dir / "s1.csv", fixture_s1_csv());
    write_file(dir / "s2.csv", fixture_s2_csv());
    write_file(dir / "s3.csv", fixture_s3_csv());
}

/// Low threshold suits the two-row fixture extents (token overlaps are small
/// in absolute terms).
inline lakefind::Config fixture_config() {
    lakefind::Config cfg;
    cfg.lsh_threshold = 0.2;
    return cfg;
}

}  // namespace testsupport
