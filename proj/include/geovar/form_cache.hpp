#pragma once

// Per-discriminant summaries (class number, unit, one form per cycle), kept
// in memory and optionally mirrored to cache/D{value}.json.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "geovar/quadratic_forms.hpp"

namespace geovar {

struct FormRecord {
    std::int64_t D = 0;
    std::size_t h_plus = 0;
    BigInt t, u;
    double geodesic_length = 0.0;
    std::vector<FormTriple> cycle_representatives;  // first form of each cycle
    bool squarefree = true;

    /// Full cycles, regenerated from the representatives.
    std::vector<FormCycle> cycles() const {
        std::vector<FormCycle> out;
        for (const FormTriple& start : cycle_representatives) {
            FormCycle c;
            FormTriple f = start;
            do {
                c.forms.push_back(f);
                f = reduction_step(f);
            } while (!(f == start));
            out.push_back(std::move(c));
        }
        return out;
    }
};

inline FormRecord compute_form_record(const Discriminant& disc) {
    FormRecord rec;
    rec.D = disc.value();
    const std::vector<FormCycle> cycles = form_cycles(disc);
    rec.h_plus = cycles.size();
    const UnitData unit = fundamental_unit_plus(disc);
    rec.t = unit.t;
    rec.u = unit.u;
    rec.geodesic_length = unit.geodesic_length;
    for (const FormCycle& c : cycles) rec.cycle_representatives.push_back(c.forms.front());
    rec.squarefree = disc.squarefree();
    return rec;
}

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// t and u are written as decimal strings so they survive any JSON reader.
inline std::string to_json(const FormRecord& rec) {
    std::ostringstream os;
    os << "{\"D\": " << rec.D << ", \"h_plus\": " << rec.h_plus << ", \"t\": \"" << rec.t.str()
       << "\", \"u\": \"" << rec.u.str() << "\", \"geodesic_length\": " << format_real(rec.geodesic_length)
       << ", \"cycles\": [";
    for (std::size_t i = 0; i < rec.cycle_representatives.size(); ++i) {
        const FormTriple& f = rec.cycle_representatives[i];
        os << (i ? ", " : "") << "[" << f.a << ", " << f.b << ", " << f.c << "]";
    }
    os << "], \"squarefree\": " << (rec.squarefree ? "true" : "false") << "}\n";
    return os.str();
}

inline FormRecord parse_form_record(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    FormRecord rec;
    rec.D = j.at("D").get<std::int64_t>();
    rec.h_plus = j.at("h_plus").get<std::size_t>();
    rec.t = BigInt(j.at("t").get<std::string>());
    rec.u = BigInt(j.at("u").get<std::string>());
    rec.geodesic_length = j.at("geodesic_length").get<double>();
    for (const auto& f : j.at("cycles")) {
        rec.cycle_representatives.push_back({f.at(0).get<std::int64_t>(), f.at(1).get<std::int64_t>(),
                                             f.at(2).get<std::int64_t>()});
    }
    rec.squarefree = j.at("squarefree").get<bool>();
    if (rec.cycle_representatives.size() != rec.h_plus) {
        throw std::runtime_error("form cache: cycle count does not match h_plus");
    }
    return rec;
}

/// Concurrent readers; a missing entry is computed outside the lock and
/// inserted once. With a directory, entries are read from and written to
/// dir/D{value}.json.
class FormCache {
public:
    FormCache() = default;
    explicit FormCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    static std::string file_name(std::int64_t D) { return "D" + std::to_string(D) + ".json"; }

    std::shared_ptr<const FormRecord> get(const Discriminant& disc) {
        {
            std::shared_lock lock(mutex_);
            if (auto it = entries_.find(disc.value()); it != entries_.end()) return it->second;
        }
        auto rec = std::make_shared<const FormRecord>(load_or_compute(disc));
        std::unique_lock lock(mutex_);
        auto [it, inserted] = entries_.emplace(disc.value(), rec);
        return it->second;
    }

private:
    FormRecord load_or_compute(const Discriminant& disc) {
        if (!dir_.empty()) {
            const auto path = dir_ / file_name(disc.value());
            if (std::filesystem::exists(path)) {
                std::ifstream in(path);
                std::stringstream ss;
                ss << in.rdbuf();
                FormRecord rec = parse_form_record(ss.str());
                if (rec.D != disc.value()) throw std::runtime_error("form cache: " + path.string() + " holds another D");
                return rec;
            }
        }
        FormRecord rec = compute_form_record(disc);
        if (!dir_.empty()) {
            std::filesystem::create_directories(dir_);
            const auto path = dir_ / file_name(disc.value());
            const auto tmp = path.string() + ".tmp";
            {
                std::ofstream out(tmp);
                out << to_json(rec);
            }
            std::filesystem::rename(tmp, path);
        }
        return rec;
    }

    std::filesystem::path dir_;
    std::shared_mutex mutex_;
    std::map<std::int64_t, std::shared_ptr<const FormRecord>> entries_;
};

}  // namespace geovar
