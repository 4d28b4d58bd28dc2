#include "pwmap/map_spec.hpp"

#include "pwmap/zoo.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <type_traits>

namespace pwmap {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bigint pow10(long k) {
    bigint p(1);
    for (long i = 0; i < k; ++i) p *= 10;
    return p;
}

// cpp_int's string constructor treats a leading 0 as an octal prefix
bigint dec_bigint(const std::string& s) {
    std::size_t i = 0;
    while (i + 1 < s.size() && s[i] == '0') ++i;
    return bigint(s.substr(i));
}

rational require_param(const map_document& doc, const std::string& key) {
    auto it = doc.params.find(key);
    if (it == doc.params.end())
        throw validation_error("generator '" + doc.generator + "' missing parameter '" + key + "'");
    return it->second;
}

template <class R>
R as(const rational& q) {
    if constexpr (std::is_same_v<R, rational>) return q;
    else return q.template convert_to<double>();
}

template <class R>
piecewise_monotonic_map<R> build(const map_document& doc) {
    if (!doc.generator.empty()) {
        if (doc.generator == "tent") return make_tent<R>(as<R>(require_param(doc, "slope")));
        if (doc.generator == "skew_tent")
            return make_skew_tent<R>(as<R>(require_param(doc, "left")),
                                     as<R>(require_param(doc, "right")));
        if (doc.generator == "beta") return make_beta<R>(as<R>(require_param(doc, "beta")));
        if (doc.generator == "mod_one")
            return make_mod_one<R>(as<R>(require_param(doc, "beta")),
                                   as<R>(require_param(doc, "alpha")));
        throw validation_error("unknown generator '" + doc.generator + "'");
    }
    std::vector<R> crit;
    crit.reserve(doc.criticals.size());
    for (const rational& c : doc.criticals) crit.push_back(as<R>(c));
    std::vector<branch_spec<R>> branches;
    branches.reserve(doc.branches.size());
    for (const branch_record& b : doc.branches)
        branches.push_back(branch_spec<R>::affine(as<R>(b.slope), as<R>(b.intercept)));
    return piecewise_monotonic_map<R>(std::move(crit), std::move(branches));
}

} // namespace

rational parse_spec_number(const std::string& token, std::size_t line) {
    if (token.empty()) throw parse_error(line, "empty number");
    // fraction a/b
    if (auto slash = token.find('/'); slash != std::string::npos) {
        const std::string num = token.substr(0, slash);
        const std::string den = token.substr(slash + 1);
        std::string nd = num;
        bool neg = false;
        if (!nd.empty() && (nd[0] == '-' || nd[0] == '+')) {
            neg = nd[0] == '-';
            nd = nd.substr(1);
        }
        if (!all_digits(nd) || !all_digits(den))
            throw parse_error(line, "malformed fraction '" + token + "'");
        bigint n = dec_bigint(nd), d = dec_bigint(den);
        if (d == 0) throw parse_error(line, "zero denominator in '" + token + "'");
        rational q(n, d);
        return neg ? rational(-q) : q;
    }
    // integer or decimal with optional exponent
    std::string s = token;
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        const std::string es = s.substr(e + 1);
        s = s.substr(0, e);
        try {
            exp10 = std::stol(es);
        } catch (...) {
            throw parse_error(line, "malformed exponent in '" + token + "'");
        }
        if (exp10 > 1000 || exp10 < -1000)
            throw parse_error(line, "exponent out of range in '" + token + "'");
    }
    std::string digits = s;
    long frac_digits = 0;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        frac_digits = static_cast<long>(s.size() - dot - 1);
    }
    if (!all_digits(digits)) throw parse_error(line, "malformed number '" + token + "'");
    rational q(dec_bigint(digits), bigint(1));
    const long shift = exp10 - frac_digits;
    if (shift > 0) q *= rational(pow10(shift), bigint(1));
    if (shift < 0) q /= rational(pow10(-shift), bigint(1));
    return neg ? rational(-q) : q;
}

map_document parse_map_spec(const std::string& text) {
    map_document doc;
    bool explicit_form = false;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw = raw.substr(0, hash);
        auto toks = split_ws(raw);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "name") {
            if (toks.size() != 2) throw parse_error(lineno, "name takes one identifier");
            doc.name = toks[1];
        } else if (key == "backend") {
            if (toks.size() != 2) throw parse_error(lineno, "backend takes float|rational");
            if (toks[1] == "float") doc.backend = backend_kind::float_backend;
            else if (toks[1] == "rational") doc.backend = backend_kind::rational_backend;
            else throw parse_error(lineno, "backend must be float or rational");
            doc.backend_explicit = true;
        } else if (key == "critical") {
            if (toks.size() < 2) throw parse_error(lineno, "critical needs at least one value");
            for (std::size_t i = 1; i < toks.size(); ++i)
                doc.criticals.push_back(parse_spec_number(toks[i], lineno));
            explicit_form = true;
        } else if (key == "branch") {
            if (toks.size() < 2 || toks[1] != "affine")
                throw parse_error(lineno, "only 'branch affine ...' is supported");
            branch_record rec;
            bool have_slope = false, have_intercept = false;
            std::string direction;
            for (std::size_t i = 2; i < toks.size(); ++i) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw parse_error(lineno, "expected key=value, got '" + toks[i] + "'");
                const std::string k = toks[i].substr(0, eq);
                const std::string v = toks[i].substr(eq + 1);
                if (k == "slope") {
                    rec.slope = parse_spec_number(v, lineno);
                    have_slope = true;
                } else if (k == "intercept") {
                    rec.intercept = parse_spec_number(v, lineno);
                    have_intercept = true;
                } else if (k == "direction") {
                    direction = v;
                } else {
                    throw parse_error(lineno, "unknown branch field '" + k + "'");
                }
            }
            if (!have_slope || !have_intercept)
                throw parse_error(lineno, "branch affine needs slope= and intercept=");
            if (!direction.empty()) {
                if (direction != "increasing" && direction != "decreasing")
                    throw parse_error(lineno, "direction must be increasing or decreasing");
                const bool inc = rec.slope > 0;
                if (inc != (direction == "increasing"))
                    throw parse_error(lineno, "declared direction contradicts slope sign");
            }
            doc.branches.push_back(rec);
            explicit_form = true;
        } else if (key == "generator") {
            if (toks.size() < 2) throw parse_error(lineno, "generator needs a name");
            if (!doc.generator.empty()) throw parse_error(lineno, "multiple generator lines");
            doc.generator = toks[1];
            for (std::size_t i = 2; i < toks.size(); ++i) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw parse_error(lineno, "expected key=value, got '" + toks[i] + "'");
                doc.params[toks[i].substr(0, eq)] =
                    parse_spec_number(toks[i].substr(eq + 1), lineno);
            }
        } else {
            throw parse_error(lineno, "unknown directive '" + key + "'");
        }
    }
    if (doc.generator.empty() && !explicit_form)
        throw parse_error(lineno, "spec defines neither a generator nor critical/branch lines");
    if (!doc.generator.empty() && explicit_form)
        throw parse_error(lineno, "spec mixes generator and explicit critical/branch lines");
    return doc;
}

map_document load_map_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw map_error("cannot open map spec '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_map_spec(ss.str());
}

piecewise_monotonic_map<double> map_document::build_double() const { return build<double>(*this); }

piecewise_monotonic_map<rational> map_document::build_rational() const {
    return build<rational>(*this);
}

} // namespace pwmap
