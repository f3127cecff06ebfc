// LP text format (CPLEX dialect subset); grammar in docs/lp_format.md.

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "tcsc/lp.hpp"

namespace tcsc::lp {

namespace {

bool allowed_name_char(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    switch (c) {
        case '_': case '(': case ')': case ',': case '.': case '#': case '!': case '{':
        case '}': case '~': case '@': case '&': case '$': case '%': case '?': case '|':
            return true;
        default: return false;
    }
}

std::string sanitize(std::string s, int j) {
    if (s.empty()) return "x" + std::to_string(j);
    for (char& c : s) {
        if (c == '[') c = '(';
        else if (c == ']') c = ')';
        else if (!allowed_name_char(c)) c = '_';
    }
    const char f = s.front();
    if (std::isdigit(static_cast<unsigned char>(f)) || f == '.' || f == 'e' || f == 'E') s = "_" + s;
    return s;
}

std::string num(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_expr(std::ostream& os, const std::vector<std::pair<double, std::string>>& terms) {
    bool first = true;
    for (const auto& [c, name] : terms) {
        if (first) {
            os << (c < 0 ? "- " : "") << num(std::abs(c)) << ' ' << name;
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ") << num(std::abs(c)) << ' ' << name;
        }
    }
    if (first) os << "0";
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok) {
    const std::string t = lower(tok);
    if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") return kInf;
    if (t == "-inf" || t == "-infinity") return -kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ProblemError("LP format: bad number '" + tok + "'");
    }
    if (used != tok.size()) throw ProblemError("LP format: bad number '" + tok + "'");
    return v;
}

bool is_number(const std::string& tok) {
    if (tok.empty()) return false;
    const std::string t = lower(tok);
    if (t == "inf" || t == "-inf" || t == "+inf" || t == "infinity" || t == "-infinity") return true;
    const char c = tok[0];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
           ((c == '-' || c == '+') && tok.size() > 1);
}

}  // namespace

void write_lp_format(std::ostream& os, const LpProblem& p, std::span<const int> binaries) {
    std::vector<std::string> names(p.n_vars);
    std::unordered_map<std::string, int> seen;
    for (int j = 0; j < p.n_vars; ++j) {
        std::string nm = sanitize(j < static_cast<int>(p.var_names.size()) ? p.var_names[j] : "", j);
        if (seen.count(nm)) nm += "#" + std::to_string(j);
        seen[nm] = j;
        names[j] = nm;
    }
    os << "\\ variables: " << p.n_vars << ", rows: " << p.n_rows() << "\n";
    os << "Minimize\n obj: ";
    std::vector<std::pair<double, std::string>> terms;
    for (int j = 0; j < p.n_vars; ++j) terms.emplace_back(p.objective[j], names[j]);
    write_expr(os, terms);
    if (p.objective_offset != 0.0)
        os << (p.objective_offset < 0 ? " - " : " + ") << num(std::abs(p.objective_offset));
    os << "\nSubject To\n";
    for (int r = 0; r < p.n_rows(); ++r) {
        const auto& c = p.constraints[r];
        terms.clear();
        for (const Term& t : c.terms) terms.emplace_back(t.coef, names[t.var]);
        os << ' ' << (c.name.empty() ? "c" + std::to_string(r) : sanitize(c.name, r)) << ": ";
        write_expr(os, terms);
        const char* rel = c.rel == Relation::LessEqual ? " <= " : c.rel == Relation::Equal ? " = " : " >= ";
        os << rel << num(c.rhs) << '\n';
    }
    os << "Bounds\n";
    for (int j = 0; j < p.n_vars; ++j) {
        const double lo = p.lower[j], hi = p.upper[j];
        if (lo == -kInf && hi == kInf) os << ' ' << names[j] << " free\n";
        else if (lo == hi) os << ' ' << names[j] << " = " << num(lo) << '\n';
        else os << ' ' << num(lo) << " <= " << names[j] << " <= " << num(hi) << '\n';
    }
    if (!binaries.empty()) {
        os << "Binaries\n";
        for (int j : binaries) os << ' ' << names[j] << '\n';
    }
    os << "End\n";
}

LpProblem read_lp_format(std::istream& is, std::vector<int>* binaries) {
    enum class Section { None, Objective, Rows, Bounds, Binaries, Done };
    LpProblem p;
    std::unordered_map<std::string, int> index;
    auto var = [&](const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        const int j = p.add_var(0.0, kInf, 0.0, name);
        index.emplace(name, j);
        return j;
    };
    // Parses "[-] c name [+|- c name]... [+|- const]" into terms and a constant.
    auto parse_expr = [&](const std::vector<std::string>& toks, std::size_t b, std::size_t e,
                          std::vector<Term>& out, double& constant) {
        double sign = 1.0;
        double coef = 1.0;
        bool have_coef = false;
        for (std::size_t i = b; i < e; ++i) {
            const std::string& t = toks[i];
            if (t == "+") continue;
            if (t == "-") {
                sign = -sign;
                continue;
            }
            if (is_number(t)) {
                if (have_coef) {
                    constant += sign * coef;
                    sign = 1.0;
                }
                coef = parse_number(t);
                have_coef = true;
                continue;
            }
            out.push_back({var(t), sign * (have_coef ? coef : 1.0)});
            sign = 1.0;
            coef = 1.0;
            have_coef = false;
        }
        if (have_coef) constant += sign * coef;
    };

    Section sec = Section::None;
    std::string line;
    int line_no = 0;
    while (sec != Section::Done && std::getline(is, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '\\') continue;
        const std::string key = lower(line);
        if (key == "minimize" || key == "minimum" || key == "min") { sec = Section::Objective; continue; }
        if (key == "subject to" || key == "st" || key == "s.t.") { sec = Section::Rows; continue; }
        if (key == "bounds") { sec = Section::Bounds; continue; }
        if (key == "binaries" || key == "binary") { sec = Section::Binaries; continue; }
        if (key == "end") { sec = Section::Done; continue; }

        std::string name;
        if (const auto colon = line.find(':'); colon != std::string::npos && sec != Section::Bounds) {
            name = trim(line.substr(0, colon));
            line = line.substr(colon + 1);
        }
        std::vector<std::string> toks;
        {
            std::istringstream ss(line);
            std::string t;
            while (ss >> t) toks.push_back(t);
        }
        switch (sec) {
            case Section::Objective: {
                std::vector<Term> terms;
                double constant = 0.0;
                parse_expr(toks, 0, toks.size(), terms, constant);
                for (const Term& t : terms) p.objective[t.var] += t.coef;
                p.objective_offset += constant;
                break;
            }
            case Section::Rows: {
                std::size_t rel_at = toks.size();
                for (std::size_t i = 0; i < toks.size(); ++i)
                    if (toks[i] == "<=" || toks[i] == ">=" || toks[i] == "=" || toks[i] == "<" || toks[i] == ">")
                        rel_at = i;
                if (rel_at + 2 != toks.size())
                    throw ProblemError("LP format line " + std::to_string(line_no) + ": malformed constraint");
                std::vector<Term> terms;
                double constant = 0.0;
                parse_expr(toks, 0, rel_at, terms, constant);
                const std::string& r = toks[rel_at];
                const Relation rel = r[0] == '<' ? Relation::LessEqual : r[0] == '>' ? Relation::GreaterEqual
                                                                                     : Relation::Equal;
                p.add_constraint(std::move(terms), rel, parse_number(toks.back()) - constant, name);
                break;
            }
            case Section::Bounds: {
                if (toks.size() == 2 && lower(toks[1]) == "free") {
                    const int j = var(toks[0]);
                    p.lower[j] = -kInf;
                    p.upper[j] = kInf;
                } else if (toks.size() == 5) {
                    const int j = var(toks[2]);
                    p.lower[j] = parse_number(toks[0]);
                    p.upper[j] = parse_number(toks[4]);
                } else if (toks.size() == 3) {
                    if (is_number(toks[0])) {
                        const int j = var(toks[2]);
                        const double v = parse_number(toks[0]);
                        if (toks[1] == "<=") p.lower[j] = v;
                        else if (toks[1] == ">=") p.upper[j] = v;
                        else p.lower[j] = p.upper[j] = v;
                    } else {
                        const int j = var(toks[0]);
                        const double v = parse_number(toks[2]);
                        if (toks[1] == "<=") p.upper[j] = v;
                        else if (toks[1] == ">=") p.lower[j] = v;
                        else p.lower[j] = p.upper[j] = v;
                    }
                } else {
                    throw ProblemError("LP format line " + std::to_string(line_no) + ": malformed bound");
                }
                break;
            }
            case Section::Binaries:
                for (const auto& t : toks) {
                    const int j = var(t);
                    if (binaries) binaries->push_back(j);
                    p.lower[j] = std::max(p.lower[j], 0.0);
                    p.upper[j] = std::min(p.upper[j], 1.0);
                }
                break;
            default:
                throw ProblemError("LP format line " + std::to_string(line_no) + ": text outside a section");
        }
    }
    return p;
}

}  // namespace tcsc::lp
