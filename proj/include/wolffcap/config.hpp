#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "measure.hpp"
#include "phi.hpp"

namespace wolffcap {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace detail

// key = value text, '#' comments, duplicate keys rejected. Line numbers kept so
// type errors can name both the line and the field.
class Config {
public:
    static Config from_stream(std::istream& in, const std::string& origin) {
        Config cfg;
        cfg.origin_ = origin;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::string t = detail::trim(line);
            if (t.empty()) continue;
            std::size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + t + "'");
            std::string key = detail::trim(t.substr(0, eq));
            std::string val = detail::trim(t.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            if (cfg.kv_.count(key))
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                  key + "' (first at line " +
                                  std::to_string(cfg.kv_[key].second) + ")");
            cfg.kv_[key] = {val, lineno};
        }
        return cfg;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        return from_stream(in, path);
    }

    static Config from_string(const std::string& text, const std::string& origin = "<inline>") {
        std::istringstream in(text);
        return from_stream(in, origin);
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string str(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end())
            throw ConfigError(origin_ + ": missing required field '" + key + "'");
        return it->second.first;
    }

    std::string str_or(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second.first;
    }

    double num(const std::string& key) const { return parse_num(key, str(key)); }
    double num_or(const std::string& key, double dflt) const {
        return has(key) ? num(key) : dflt;
    }

    std::uint64_t u64(const std::string& key) const {
        const std::string v = str(key);
        try {
            std::size_t used = 0;
            std::uint64_t out = std::stoull(v, &used, 0);
            if (used != v.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            throw ConfigError(field_msg(key) + ": expected an unsigned integer, got '" + v + "'");
        }
    }
    std::uint64_t u64_or(const std::string& key, std::uint64_t dflt) const {
        return has(key) ? u64(key) : dflt;
    }

    std::size_t size(const std::string& key) const {
        return static_cast<std::size_t>(u64(key));
    }
    std::size_t size_or(const std::string& key, std::size_t dflt) const {
        return has(key) ? size(key) : dflt;
    }

    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::string v = str(key);
        std::size_t pos = 0;
        while (pos <= v.size()) {
            std::size_t comma = v.find(',', pos);
            std::string piece = detail::trim(
                comma == std::string::npos ? v.substr(pos) : v.substr(pos, comma - pos));
            if (!piece.empty()) out.push_back(parse_num(key, piece));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (out.empty()) throw ConfigError(field_msg(key) + ": expected a comma list of numbers");
        return out;
    }
    std::vector<double> list_or(const std::string& key, std::vector<double> dflt) const {
        return has(key) ? list(key) : dflt;
    }

    const std::map<std::string, std::pair<std::string, int>>& entries() const { return kv_; }
    const std::string& origin() const { return origin_; }

private:
    std::string field_msg(const std::string& key) const {
        auto it = kv_.find(key);
        int line = it == kv_.end() ? 0 : it->second.second;
        return origin_ + ":" + std::to_string(line) + ": field '" + key + "'";
    }

    double parse_num(const std::string& key, const std::string& v) const {
        try {
            std::size_t used = 0;
            double out = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument("");
            return out;
        } catch (const std::exception&) {
            throw ConfigError(field_msg(key) + ": expected a number, got '" + v + "'");
        }
    }

    std::map<std::string, std::pair<std::string, int>> kv_;
    std::string origin_;
};

// phi specs: "power:<s>", "logsqrt", "table:<path>". Table files hold
// whitespace-separated (t, phi(t)) rows, '#' comments.
inline PhiFunction load_phi_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open phi table '" + path + "'");
    std::vector<double> ts, vs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        std::istringstream row(t);
        double a = 0.0, b = 0.0;
        if (!(row >> a >> b))
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 't value', got '" + t + "'");
        ts.push_back(a);
        vs.push_back(b);
    }
    try {
        return PhiFunction::tabulated(ts, vs);
    } catch (const std::exception& e) {
        throw ConfigError(path + ": invalid phi table: " + e.what());
    }
}

inline PhiFunction make_phi(const std::string& spec, const std::string& field = "phi") {
    std::string s = detail::trim(spec);
    if (s == "logsqrt") return PhiFunction::log_sqrt();
    if (s.rfind("power:", 0) == 0) {
        std::string arg = s.substr(6);
        try {
            std::size_t used = 0;
            double exp = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument("");
            return PhiFunction::power(exp);
        } catch (const std::exception&) {
            throw ConfigError("field '" + field + "': bad power exponent '" + arg + "'");
        }
    }
    if (s.rfind("table:", 0) == 0) return load_phi_table(s.substr(6));
    throw ConfigError("field '" + field + "': unknown phi family '" + s +
                      "' (expected power:<s>, logsqrt, or table:<path>)");
}

// Point-set generators shared by the experiments. All deterministic in the rng.
enum class SetKind { Grid, Ball, Line, Random };

inline SetKind parse_set_kind(const std::string& name, const std::string& field = "set") {
    if (name == "grid") return SetKind::Grid;
    if (name == "ball") return SetKind::Ball;
    if (name == "line") return SetKind::Line;
    if (name == "random") return SetKind::Random;
    throw ConfigError("field '" + field + "': unknown set generator '" + name +
                      "' (expected grid, ball, line, or random)");
}

inline std::size_t int_pow(std::size_t base, std::size_t e) {
    std::size_t out = 1;
    for (std::size_t k = 0; k < e; ++k) out *= base;
    return out;
}

// grid: smallest d-cube lattice holding `count` points at pitch `extent/(side-1)`.
// ball: rejection-sampled points in the radius-`extent` ball, pairwise >= min_sep.
// line: count points evenly spaced on [0, extent] along the first axis.
// random: uniform in the side-`extent` cube, pairwise >= min_sep.
inline std::vector<Point> generate_set(SetKind kind, std::size_t d, std::size_t count,
                                       double extent, double min_sep, Rng& rng) {
    if (d == 0 || count == 0) throw std::invalid_argument("generate_set: empty request");
    if (!(extent > 0.0)) throw std::invalid_argument("generate_set: extent must be positive");
    std::vector<Point> pts;
    switch (kind) {
        case SetKind::Grid: {
            std::size_t side = 1;
            while (side * int_pow(side, d - 1) < count) ++side;
            double pitch = side > 1 ? extent / static_cast<double>(side - 1) : 0.0;
            std::vector<std::size_t> idx(d, 0);
            while (pts.size() < count) {
                Point p(d);
                for (std::size_t a = 0; a < d; ++a) p[a] = pitch * static_cast<double>(idx[a]);
                pts.push_back(std::move(p));
                std::size_t a = 0;
                for (; a < d; ++a) {
                    if (++idx[a] < side) break;
                    idx[a] = 0;
                }
                if (a == d) break;
            }
            break;
        }
        case SetKind::Line: {
            double pitch = count > 1 ? extent / static_cast<double>(count - 1) : 0.0;
            for (std::size_t k = 0; k < count; ++k) {
                Point p(d, 0.0);
                p[0] = pitch * static_cast<double>(k);
                pts.push_back(std::move(p));
            }
            break;
        }
        case SetKind::Ball:
        case SetKind::Random: {
            std::size_t attempts = 0;
            const std::size_t cap = 200000 + 2000 * count;
            while (pts.size() < count) {
                if (++attempts > cap)
                    throw std::invalid_argument(
                        "generate_set: cannot place points at the requested separation");
                Point p(d);
                if (kind == SetKind::Ball) {
                    double r2;
                    do {
                        r2 = 0.0;
                        for (std::size_t a = 0; a < d; ++a) {
                            p[a] = rng.uniform(-extent, extent);
                            r2 += sqr(p[a]);
                        }
                    } while (r2 > sqr(extent));
                } else {
                    for (std::size_t a = 0; a < d; ++a) p[a] = rng.uniform(0.0, extent);
                }
                bool ok = true;
                for (const auto& q : pts)
                    if (dist(p, q) < min_sep) { ok = false; break; }
                if (ok) pts.push_back(std::move(p));
            }
            break;
        }
    }
    return pts;
}

// Random measure on freshly generated points; masses uniform in (mass_lo, mass_hi].
inline AtomicMeasure random_measure(std::size_t d, std::size_t count, double extent,
                                    double min_sep, Rng& rng, double mass_lo = 0.1,
                                    double mass_hi = 1.0) {
    AtomicMeasure mu;
    mu.d = d;
    mu.points = generate_set(SetKind::Random, d, count, extent, min_sep, rng);
    for (std::size_t i = 0; i < count; ++i) mu.masses.push_back(rng.uniform(mass_lo, mass_hi));
    mu.validate();
    return mu;
}

} // namespace wolffcap
