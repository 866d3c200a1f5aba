// Sectioned key = value model configuration.
//
//   [algebra]        name = A1 | A2 | B2 | G2, or matrix = [[..]] with
//                    symmetrizers = [..]; q = <decimal>
//   [representation] spins = [(j, multiplicity), ...]  (rank 1), or
//                    file = <path to representation file>
//   [omega]          omega = [(re, im), ...] or block_<i> = [(re, im), ...]
//   [classical]      lambdas = [[..], ...]; rates = [..]
//   [run]            t_max, dt, samples, seed, tol, n_paths, t_list, mu_list
//
// '#' starts a comment; lists are bracketed; complex values are (re, im).
// Exactly one of {representation + omega, classical} must be present.

#pragma once

#include "qglevy/cartan.hpp"

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace qglevy {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

// Minimal nested-value parser: numbers, (..) tuples, [..] lists.
struct ConfigValue {
    enum class Kind { number, list, tuple } kind = Kind::number;
    double number = 0.0;
    std::vector<ConfigValue> items;
};

class ValueParser {
  public:
    explicit ValueParser(const std::string& text) : text_(text) {}
    ConfigValue parse() {
        ConfigValue v = parse_value();
        skip();
        if (pos_ != text_.size()) throw ConfigError("trailing characters in value: " + text_);
        return v;
    }

  private:
    ConfigValue parse_value() {
        skip();
        if (pos_ >= text_.size()) throw ConfigError("empty value");
        char c = text_[pos_];
        if (c == '[' || c == '(') {
            char close = c == '[' ? ']' : ')';
            ConfigValue v;
            v.kind = c == '[' ? ConfigValue::Kind::list : ConfigValue::Kind::tuple;
            ++pos_;
            skip();
            if (pos_ < text_.size() && text_[pos_] == close) {
                ++pos_;
                return v;
            }
            for (;;) {
                v.items.push_back(parse_value());
                skip();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                if (pos_ < text_.size() && text_[pos_] == close) {
                    ++pos_;
                    return v;
                }
                throw ConfigError("expected ',' or '" + std::string(1, close) + "' in " + text_);
            }
        }
        char* end = nullptr;
        double x = std::strtod(text_.c_str() + pos_, &end);
        if (end == text_.c_str() + pos_) throw ConfigError("expected a number in: " + text_);
        pos_ = static_cast<size_t>(end - text_.c_str());
        ConfigValue v;
        v.number = x;
        return v;
    }
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    const std::string& text_;
    size_t pos_ = 0;
};

inline double as_number(const ConfigValue& v, const std::string& what) {
    if (v.kind != ConfigValue::Kind::number) throw ConfigError(what + ": expected a number");
    return v.number;
}
inline long as_integer(const ConfigValue& v, const std::string& what) {
    double x = as_number(v, what);
    long n = std::lround(x);
    if (std::abs(x - static_cast<double>(n)) > 1e-9) throw ConfigError(what + ": expected an integer");
    return n;
}
inline Complex as_complex(const ConfigValue& v, const std::string& what) {
    if (v.kind == ConfigValue::Kind::number) return {v.number, 0.0};
    if (v.kind == ConfigValue::Kind::tuple && v.items.size() == 2)
        return {as_number(v.items[0], what), as_number(v.items[1], what)};
    throw ConfigError(what + ": expected (re, im)");
}

}  // namespace detail

struct ModelConfig {
    // [algebra]
    std::string algebra_name;                      // one of A1/A2/B2/G2, or empty
    std::vector<std::vector<int>> cartan_matrix;   // explicit alternative
    std::vector<int> symmetrizers;
    double q = 0.0;
    // [representation]
    std::vector<std::pair<int, int>> spins;        // (two_j, multiplicity)
    std::string rep_file;
    // [omega]
    std::vector<std::vector<Complex>> omega_blocks;  // block_<i> entries, in order
    std::vector<Complex> omega_full;
    // [classical]
    std::vector<std::vector<int>> lambdas;
    std::vector<double> rates;
    // [run]
    double t_max = 1.0;
    double dt = 1.0 / 32.0;
    long samples = 10000;
    uint64_t seed = 1;
    double tol = 1e-10;
    int n_paths = 10;
    std::vector<double> t_list{0.1, 1.0};
    std::vector<std::vector<int>> mu_list;

    bool operator==(const ModelConfig&) const = default;

    bool has_representation() const { return !spins.empty() || !rep_file.empty(); }
    bool has_omega() const { return !omega_blocks.empty() || !omega_full.empty(); }
    bool has_classical() const { return !lambdas.empty(); }

    CartanData cartan() const {
        if (!algebra_name.empty()) return CartanData::named(algebra_name, q);
        return CartanData(cartan_matrix, symmetrizers, q);
    }

    void validate() const {
        if (!(q > 0.0) || q == 1.0) throw ConfigError("q must satisfy q>0, q!=1");
        CartanData ctx = [&] {
            try {
                return cartan();
            } catch (const std::invalid_argument& err) {
                throw ConfigError(std::string("algebra: ") + err.what());
            }
        }();
        bool rep_side = has_representation();
        if (rep_side != has_omega())
            throw ConfigError("representation and omega sections must come together");
        if (rep_side == has_classical())
            throw ConfigError("exactly one of {representation + omega, classical} is required");
        if (!spins.empty() && ctx.rank != 1)
            throw ConfigError("spin lists describe rank-1 representations only");
        for (const auto& [two_j, mult] : spins) {
            if (two_j < 0 || mult < 1) throw ConfigError("bad (spin, multiplicity) entry");
        }
        if (has_classical()) {
            if (lambdas.size() != rates.size()) throw ConfigError("lambdas/rates size mismatch");
            for (const auto& l : lambdas)
                if (static_cast<int>(l.size()) != ctx.rank)
                    throw ConfigError("lambda entries must have length = rank");
            for (double r : rates)
                if (!(r > 0.0)) throw ConfigError("rates must be positive");
        }
        for (const auto& mu : mu_list)
            if (static_cast<int>(mu.size()) != ctx.rank)
                throw ConfigError("mu entries must have length = rank");
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
        if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
        if (!(tol > 0.0)) throw ConfigError("tol must be positive");
        if (samples < 0) throw ConfigError("samples must be nonnegative");
        if (n_paths < 0) throw ConfigError("n_paths must be nonnegative");
    }
};

inline ModelConfig parse_config(std::istream& in) {
    using detail::ConfigValue;
    ModelConfig cfg;
    cfg.t_list.clear();
    std::string line, section;
    int lineno = 0;
    std::map<int, std::vector<Complex>> blocks;
    bool saw_mu = false, saw_t = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto strip = [](const std::string& s) {
            size_t b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos) return std::string();
            size_t e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) +
                                                      ": unterminated section header");
            section = strip(line.substr(1, line.size() - 2));
            if (section != "algebra" && section != "representation" && section != "omega" &&
                section != "classical" && section != "run")
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        auto parse_value = [&] { return detail::ValueParser(value).parse(); };
        auto where = [&] { return "line " + std::to_string(lineno) + " (" + key + ")"; };
        try {
            if (section == "algebra") {
                if (key == "name") {
                    cfg.algebra_name = value;
                } else if (key == "q") {
                    cfg.q = detail::as_number(parse_value(), where());
                } else if (key == "matrix") {
                    ConfigValue v = parse_value();
                    for (const auto& row : v.items) {
                        std::vector<int> r;
                        for (const auto& x : row.items)
                            r.push_back(static_cast<int>(detail::as_integer(x, where())));
                        cfg.cartan_matrix.push_back(r);
                    }
                } else if (key == "symmetrizers") {
                    for (const auto& x : parse_value().items)
                        cfg.symmetrizers.push_back(static_cast<int>(detail::as_integer(x, where())));
                } else {
                    throw ConfigError(where() + ": unknown key");
                }
            } else if (section == "representation") {
                if (key == "spins") {
                    for (const auto& pair : parse_value().items) {
                        if (pair.kind != ConfigValue::Kind::tuple || pair.items.size() != 2)
                            throw ConfigError(where() + ": expected (j, multiplicity)");
                        double j = detail::as_number(pair.items[0], where());
                        long two_j = std::lround(2.0 * j);
                        if (std::abs(2.0 * j - static_cast<double>(two_j)) > 1e-9)
                            throw ConfigError(where() + ": spin must be a half-integer");
                        cfg.spins.emplace_back(static_cast<int>(two_j),
                                               static_cast<int>(detail::as_integer(pair.items[1],
                                                                                   where())));
                    }
                } else if (key == "file") {
                    cfg.rep_file = value;
                } else {
                    throw ConfigError(where() + ": unknown key");
                }
            } else if (section == "omega") {
                if (key == "omega") {
                    for (const auto& x : parse_value().items)
                        cfg.omega_full.push_back(detail::as_complex(x, where()));
                } else if (key.rfind("block_", 0) == 0) {
                    int idx = std::stoi(key.substr(6));
                    if (idx < 1) throw ConfigError(where() + ": block indices start at 1");
                    std::vector<Complex> entries;
                    for (const auto& x : parse_value().items)
                        entries.push_back(detail::as_complex(x, where()));
                    blocks[idx] = std::move(entries);
                } else {
                    throw ConfigError(where() + ": unknown key");
                }
            } else if (section == "classical") {
                if (key == "lambdas") {
                    for (const auto& row : parse_value().items) {
                        std::vector<int> l;
                        for (const auto& x : row.items)
                            l.push_back(static_cast<int>(detail::as_integer(x, where())));
                        cfg.lambdas.push_back(l);
                    }
                } else if (key == "rates") {
                    for (const auto& x : parse_value().items)
                        cfg.rates.push_back(detail::as_number(x, where()));
                } else {
                    throw ConfigError(where() + ": unknown key");
                }
            } else if (section == "run") {
                if (key == "t_max") cfg.t_max = detail::as_number(parse_value(), where());
                else if (key == "dt") cfg.dt = detail::as_number(parse_value(), where());
                else if (key == "samples") cfg.samples = detail::as_integer(parse_value(), where());
                else if (key == "seed")
                    cfg.seed = static_cast<uint64_t>(detail::as_integer(parse_value(), where()));
                else if (key == "tol") cfg.tol = detail::as_number(parse_value(), where());
                else if (key == "n_paths")
                    cfg.n_paths = static_cast<int>(detail::as_integer(parse_value(), where()));
                else if (key == "t_list") {
                    saw_t = true;
                    for (const auto& x : parse_value().items)
                        cfg.t_list.push_back(detail::as_number(x, where()));
                } else if (key == "mu_list") {
                    saw_mu = true;
                    for (const auto& row : parse_value().items) {
                        std::vector<int> mu;
                        if (row.kind == ConfigValue::Kind::number) {
                            mu.push_back(static_cast<int>(detail::as_integer(row, where())));
                        } else {
                            for (const auto& x : row.items)
                                mu.push_back(static_cast<int>(detail::as_integer(x, where())));
                        }
                        cfg.mu_list.push_back(mu);
                    }
                } else {
                    throw ConfigError(where() + ": unknown key");
                }
            } else {
                throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& err) {
            throw ConfigError(where() + ": " + err.what());
        }
    }
    for (auto& [idx, entries] : blocks) cfg.omega_blocks.push_back(std::move(entries));
    if (!saw_t || cfg.t_list.empty()) cfg.t_list = {0.1, 1.0};
    if (!saw_mu) {
        int rank = 1;
        if (!cfg.algebra_name.empty())
            rank = CartanData::named(cfg.algebra_name).rank;
        else if (!cfg.symmetrizers.empty())
            rank = static_cast<int>(cfg.symmetrizers.size());
        if (rank == 1) {
            for (int mu = -2; mu <= 2; ++mu) cfg.mu_list.push_back({mu});
        } else {
            std::vector<int> zero(static_cast<size_t>(rank), 0);
            cfg.mu_list.push_back(zero);
            for (int i = 0; i < rank; ++i) {
                std::vector<int> mu = zero;
                mu[static_cast<size_t>(i)] = 1;
                cfg.mu_list.push_back(mu);
                mu[static_cast<size_t>(i)] = -1;
                cfg.mu_list.push_back(mu);
            }
        }
    }
    cfg.validate();
    return cfg;
}

inline std::string print_config(const ModelConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    auto complex_str = [&](Complex z) {
        std::ostringstream s;
        s.precision(17);
        s << "(" << z.real() << ", " << z.imag() << ")";
        return s.str();
    };
    os << "[algebra]\n";
    if (!cfg.algebra_name.empty()) {
        os << "name = " << cfg.algebra_name << "\n";
    } else {
        os << "matrix = [";
        for (size_t r = 0; r < cfg.cartan_matrix.size(); ++r) {
            os << (r ? ", [" : "[");
            for (size_t c = 0; c < cfg.cartan_matrix[r].size(); ++c)
                os << (c ? ", " : "") << cfg.cartan_matrix[r][c];
            os << "]";
        }
        os << "]\nsymmetrizers = [";
        for (size_t i = 0; i < cfg.symmetrizers.size(); ++i)
            os << (i ? ", " : "") << cfg.symmetrizers[i];
        os << "]\n";
    }
    os << "q = " << cfg.q << "\n";
    if (cfg.has_representation()) {
        os << "\n[representation]\n";
        if (!cfg.rep_file.empty()) {
            os << "file = " << cfg.rep_file << "\n";
        } else {
            os << "spins = [";
            for (size_t s = 0; s < cfg.spins.size(); ++s)
                os << (s ? ", (" : "(") << 0.5 * cfg.spins[s].first << ", " << cfg.spins[s].second
                   << ")";
            os << "]\n";
        }
    }
    if (cfg.has_omega()) {
        os << "\n[omega]\n";
        if (!cfg.omega_full.empty()) {
            os << "omega = [";
            for (size_t i = 0; i < cfg.omega_full.size(); ++i)
                os << (i ? ", " : "") << complex_str(cfg.omega_full[i]);
            os << "]\n";
        }
        for (size_t b = 0; b < cfg.omega_blocks.size(); ++b) {
            os << "block_" << b + 1 << " = [";
            for (size_t i = 0; i < cfg.omega_blocks[b].size(); ++i)
                os << (i ? ", " : "") << complex_str(cfg.omega_blocks[b][i]);
            os << "]\n";
        }
    }
    if (cfg.has_classical()) {
        os << "\n[classical]\nlambdas = [";
        for (size_t l = 0; l < cfg.lambdas.size(); ++l) {
            os << (l ? ", [" : "[");
            for (size_t i = 0; i < cfg.lambdas[l].size(); ++i)
                os << (i ? ", " : "") << cfg.lambdas[l][i];
            os << "]";
        }
        os << "]\nrates = [";
        for (size_t l = 0; l < cfg.rates.size(); ++l) os << (l ? ", " : "") << cfg.rates[l];
        os << "]\n";
    }
    os << "\n[run]\n";
    os << "t_max = " << cfg.t_max << "\n";
    os << "dt = " << cfg.dt << "\n";
    os << "samples = " << cfg.samples << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "tol = " << cfg.tol << "\n";
    os << "n_paths = " << cfg.n_paths << "\n";
    os << "t_list = [";
    for (size_t i = 0; i < cfg.t_list.size(); ++i) os << (i ? ", " : "") << cfg.t_list[i];
    os << "]\nmu_list = [";
    for (size_t l = 0; l < cfg.mu_list.size(); ++l) {
        os << (l ? ", [" : "[");
        for (size_t i = 0; i < cfg.mu_list[l].size(); ++i)
            os << (i ? ", " : "") << cfg.mu_list[l][i];
        os << "]";
    }
    os << "]\n";
    return os.str();
}

}  // namespace qglevy
