#ifndef KASHAEV_CLI_HPP
#define KASHAEV_CLI_HPP

// Command-line front end.  Kept in a header so tests can drive dispatch()
// with in-memory streams.

#include "kashaev/cf.hpp"
#include "kashaev/errors.hpp"
#include "kashaev/experiments.hpp"
#include "kashaev/invariant.hpp"
#include "kashaev/ostrowski.hpp"
#include "kashaev/rational.hpp"
#include "kashaev/sudler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace kashaev::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kResource = 4, kPrecision = 5 };

struct Config {
    Precision precision = Precision::Double;
    std::int64_t budget = kDefaultEnumerationBudget;
    std::size_t guard = kDefaultGuard;
    std::string out;  // empty: standard output
    std::size_t workers = 1;
};

/// Raised for malformed arguments that CLI11 itself cannot detect.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_log(const LogValue& v) { return v.zero ? "-inf" : format_double(v.log_mag); }

inline Rational parse_rational_arg(const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

/// Comma or whitespace separated positive integers.
inline std::vector<BigInt> parse_quotients(const std::string& text) {
    std::vector<BigInt> out;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        for (char ch : token) {
            if (ch < '0' || ch > '9') throw UsageError("bad partial quotient '" + token + "'");
        }
        BigInt v(token);
        if (v < 1) throw UsageError("partial quotients must be >= 1");
        out.push_back(v);
        token.clear();
    };
    for (char ch : text) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            flush();
        } else {
            token.push_back(ch);
        }
    }
    flush();
    if (out.empty()) throw UsageError("empty list of partial quotients");
    return out;
}

inline std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& q : parse_quotients(text)) out.push_back(detail::narrow_int<std::size_t>(q));
    return out;
}

/// Quotients a_1, a_2, ... from --alpha (a period, repeated) or --alpha-file.
struct AlphaSource {
    std::vector<BigInt> quotients;
    bool periodic = false;

    bool given() const { return !quotients.empty(); }

    std::vector<BigInt> prefix(std::size_t n) const {
        if (periodic) {
            std::vector<BigInt> out;
            out.reserve(n);
            for (std::size_t i = 0; i < n; ++i) out.push_back(quotients[i % quotients.size()]);
            return out;
        }
        if (quotients.size() < n) {
            throw DomainError("alpha file supplies " + std::to_string(quotients.size()) + " quotients, need " +
                              std::to_string(n));
        }
        return {quotients.begin(), quotients.begin() + static_cast<std::ptrdiff_t>(n)};
    }
};

inline AlphaSource load_alpha(const std::string& alpha, const std::string& alpha_file) {
    AlphaSource src;
    if (!alpha.empty() && !alpha_file.empty()) throw UsageError("--alpha and --alpha-file are exclusive");
    if (!alpha.empty()) {
        src.quotients = parse_quotients(alpha);
        src.periodic = true;
    } else if (!alpha_file.empty()) {
        std::ifstream in(alpha_file);
        if (!in) throw UsageError("cannot read " + alpha_file);
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        src.quotients = parse_quotients(text);
    } else {
        throw UsageError("one of --alpha or --alpha-file is required");
    }
    return src;
}

inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
    os << "p,q,x,log_j,h\n";
    for (const auto& r : rows) {
        os << r.p << ',' << r.q << ',' << format_double(r.x) << ',' << format_double(r.log_j) << ','
           << format_double(r.h) << '\n';
    }
}

inline void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
    os << "n,p,q,h,osc\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.p << ',' << r.q << ',' << format_double(r.h) << ',' << format_double(r.osc) << '\n';
    }
}

/// One JSON object per line; the "kind" key names the measurement.
inline void write_diagnostics_jsonl(std::ostream& os, const DiagnosticsReport& rep) {
    using nlohmann::json;
    auto emit = [&](const json& j) { os << j.dump() << '\n'; };
    emit({{"kind", "meta"}, {"r", rep.r}, {"L", rep.L}});
    for (const auto& e : rep.evil_mass) {
        emit({{"kind", "evil_mass"},
              {"k", e.k},
              {"ratio", e.ratio},
              {"log_total", e.log_total},
              {"log_partition", e.log_partition}});
    }
    for (const auto& s : rep.split) {
        emit({{"kind", "split"}, {"k", s.k}, {"j", s.j}, {"ratio", s.ratio}, {"ratio_prime", s.ratio_prime}});
    }
    for (const auto& t : rep.tail) emit({{"kind", "tail"}, {"k", t.k}, {"squared", t.squared}, {"plain", t.plain}});
    for (const auto& g : rep.local_gain) {
        emit({{"kind", "local_gain"},
              {"N", g.N},
              {"N_star", g.N_star},
              {"ell", g.ell},
              {"construction", g.construction},
              {"log_gain", g.log_gain}});
    }
    for (const auto& t : rep.tail_quotient) {
        emit({{"kind", "tail_quotient"}, {"N", t.N}, {"ell", t.ell}, {"log_quotient", t.log_quotient}});
    }
    for (const auto& h : rep.h_error) {
        emit({{"kind", "h_error"}, {"ell", h.ell}, {"q_ell", h.q_ell}, {"rel_error", h.rel_error}});
    }
}

namespace detail {

/// Writes to --out when given, otherwise to the caller's stream.
template <class Fn>
void with_output(const Config& cfg, std::ostream& fallback, Fn&& fn) {
    if (cfg.out.empty()) {
        fn(fallback);
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw UsageError("cannot open " + cfg.out + " for writing");
    fn(file);
    if (!file) throw std::runtime_error("write to " + cfg.out + " failed");
}

} // namespace detail

/// Runs one subcommand.  args excludes the program name.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kashaev invariant of the figure-eight knot and related machinery", "kashaev"};
    app.require_subcommand(1);

    Config cfg;
    std::string precision = "double";
    std::int64_t budget = cfg.budget;
    std::size_t guard = cfg.guard;
    bool guard_given = false;
    std::size_t workers = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--precision", precision, "double or double-double")
            ->check(CLI::IsMember({"double", "double-double"}));
        sub->add_option("--budget", budget, "enumeration budget (largest denominator walked)")
            ->check(CLI::Range(std::int64_t{1000}, std::numeric_limits<std::int64_t>::max()));
        sub->add_option("--out", cfg.out, "output path (default: standard output)");
        sub->add_option("--workers", workers, "worker threads (0: hardware concurrency)");
    };

    std::string r_text, n_text;
    auto* cf_cmd = app.add_subcommand("cf", "continued fraction of p/q in [0,1)");
    cf_cmd->add_option("r", r_text, "rational p/q")->required();
    add_common(cf_cmd);

    auto* ost_cmd = app.add_subcommand("ostrowski", "Ostrowski digits b_0..b_{L-1} of N with respect to p/q");
    ost_cmd->add_option("N", n_text, "integer 0 <= N < q")->required();
    ost_cmd->add_option("r", r_text, "rational p/q")->required();
    add_common(ost_cmd);

    auto* sud_cmd = app.add_subcommand("sudler", "log of the Sudler product P_N(p/q)");
    sud_cmd->add_option("N", n_text, "integer 0 <= N < q")->required();
    sud_cmd->add_option("r", r_text, "rational p/q")->required();
    add_common(sud_cmd);

    auto* j_cmd = app.add_subcommand("jinv", "log J(p/q)");
    j_cmd->add_option("r", r_text, "rational p/q")->required();
    add_common(j_cmd);

    auto* h_cmd = app.add_subcommand("h", "h(p/q) = log J(p/q) - log J({q/p})");
    h_cmd->add_option("r", r_text, "rational p/q")->required();
    add_common(h_cmd);

    std::int64_t max_den = 0;
    auto* scan_cmd = app.add_subcommand("scan", "log J and h at all reduced p/q in (0,1) with q <= max-den");
    scan_cmd->add_option("--max-den", max_den, "largest denominator")->required();
    add_common(scan_cmd);

    std::string center_text, radius_text;
    auto* win_cmd = app.add_subcommand("window", "scan restricted to |x - center| <= radius");
    win_cmd->add_option("--center", center_text, "rational center")->required();
    win_cmd->add_option("--radius", radius_text, "rational radius")->required();
    win_cmd->add_option("--max-den", max_den, "largest denominator")->required();
    add_common(win_cmd);

    std::string alpha, alpha_file;
    std::size_t depth = 0, start = 1;
    auto* conv_cmd = app.add_subcommand("converge", "h along the convergents of alpha");
    conv_cmd->add_option("--alpha", alpha, "period of partial quotients, e.g. 1,1,1");
    conv_cmd->add_option("--alpha-file", alpha_file, "file with explicit partial quotients");
    conv_cmd->add_option("--depth", depth, "last convergent index")->required();
    conv_cmd->add_option("--start", start, "first convergent index (default 1)");
    add_common(conv_cmd);

    std::string k_grid_text;
    auto* diag_cmd = app.add_subcommand("diagnose", "structural diagnostics at a convergent of alpha (JSON Lines)");
    diag_cmd->add_option("--alpha", alpha, "period of partial quotients");
    diag_cmd->add_option("--alpha-file", alpha_file, "file with explicit partial quotients");
    diag_cmd->add_option("--depth", depth, "convergent index of the evaluation point")->required();
    diag_cmd->add_option("--k-grid", k_grid_text, "comma separated k values")->required();
    diag_cmd->add_option("--guard", guard, "also report M_k with this guard depth (>= 10)")
        ->check(CLI::Range(std::size_t{10}, std::size_t{100000}));
    add_common(diag_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failed = &app;
        for (const auto* sub : app.get_subcommands()) failed = sub;
        err << failed->help();
        return kUsage;
    }

    guard_given = diag_cmd->count("--guard") > 0;
    cfg.precision = precision == "double-double" ? Precision::DoubleDouble : Precision::Double;
    cfg.budget = budget;
    cfg.guard = guard;
    cfg.workers = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;

    auto read_r = [&] {
        const Rational r = parse_rational_arg(r_text);
        kashaev::detail::check_budget(r.den(), cfg.budget, "input");
        return r;
    };
    auto read_n = [&] {
        const Rational n = parse_rational_arg(n_text);
        if (n.den() != 1) throw UsageError("N must be an integer");
        return n.num();
    };

    try {
        if (cf_cmd->parsed()) {
            const Rational r = parse_rational_arg(r_text);
            detail::with_output(cfg, out, [&](std::ostream& os) { os << cf_expand(r).str() << '\n'; });
        } else if (ost_cmd->parsed()) {
            const Rational r = read_r();
            const BigInt N = read_n();
            const auto ctx = cf_context(r);
            const auto d = ostrowski_encode(N, ctx, ctx.length());
            detail::with_output(cfg, out, [&](std::ostream& os) {
                for (std::size_t i = 0; i < d.digits.size(); ++i) {
                    os << (i ? "," : "") << kashaev::detail::int_to_string(d.digits[i]);
                }
                os << '\n';
            });
        } else if (sud_cmd->parsed()) {
            const Rational r = read_r();
            const BigInt N = read_n();
            const LogValue v = sudler_log_P(N, r, cfg.precision);
            detail::with_output(cfg, out, [&](std::ostream& os) { os << format_log(v) << '\n'; });
        } else if (j_cmd->parsed()) {
            const LogValue v = j_log(read_r(), cfg.precision);
            detail::with_output(cfg, out, [&](std::ostream& os) { os << format_log(v) << '\n'; });
        } else if (h_cmd->parsed()) {
            const double v = h_value(read_r(), cfg.precision);
            detail::with_output(cfg, out, [&](std::ostream& os) { os << format_double(v) << '\n'; });
        } else if (scan_cmd->parsed()) {
            kashaev::detail::check_budget(BigInt(max_den), cfg.budget, "scan");
            const auto rows = scan(max_den, cfg.workers, cfg.precision);
            detail::with_output(cfg, out, [&](std::ostream& os) { write_scan_csv(os, rows); });
        } else if (win_cmd->parsed()) {
            kashaev::detail::check_budget(BigInt(max_den), cfg.budget, "window");
            const auto rows = window_scan(parse_rational_arg(center_text), parse_rational_arg(radius_text), max_den,
                                          cfg.workers, cfg.precision);
            detail::with_output(cfg, out, [&](std::ostream& os) { write_scan_csv(os, rows); });
        } else if (conv_cmd->parsed()) {
            const auto src = load_alpha(alpha, alpha_file);
            const auto rows = convergence_study(src.prefix(depth), start, depth, cfg.budget, cfg.precision);
            detail::with_output(cfg, out, [&](std::ostream& os) { write_convergence_csv(os, rows); });
        } else if (diag_cmd->parsed()) {
            const auto src = load_alpha(alpha, alpha_file);
            const auto k_grid = parse_size_list(k_grid_text);
            DiagnosticsOptions opts;
            opts.budget = cfg.budget;
            const auto rep = structure_diagnostics(src.prefix(depth), depth, k_grid, opts);
            std::vector<std::pair<std::size_t, double>> mk;
            if (guard_given) {
                std::size_t k_max = 0;
                for (std::size_t k : k_grid) k_max = std::max(k_max, k);
                const auto prefix = src.prefix(k_max + cfg.guard + 10);
                for (std::size_t k : k_grid) mk.emplace_back(k, m_k_alpha(prefix, k, cfg.guard));
            }
            detail::with_output(cfg, out, [&](std::ostream& os) {
                write_diagnostics_jsonl(os, rep);
                for (const auto& [k, v] : mk) {
                    os << nlohmann::json{{"kind", "m_k"}, {"k", k}, {"guard", cfg.guard}, {"value", v}}.dump() << '\n';
                }
            });
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << '\n';
        return kResource;
    } catch (const PrecisionError& e) {
        err << "precision error: " << e.what() << '\n';
        return kPrecision;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const OverflowError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    }
    return kOk;
}

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, out, err);
}

} // namespace kashaev::cli

#endif
