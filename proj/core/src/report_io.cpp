#include "grushin/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

namespace grushin {

namespace {

int significant_digits(const char* s, std::size_t len) {
    int digits = 0;
    bool leading = true;
    for (std::size_t i = 0; i < len; ++i) {
        const char ch = s[i];
        if (ch == 'e' || ch == 'E') break;
        if (ch < '0' || ch > '9') continue;
        if (leading && ch == '0') continue;
        leading = false;
        ++digits;
    }
    return digits;
}

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) >= 0x20) out += ch;
        }
    }
    return out;
}

std::string quoted(const std::string& s) { return "\"" + escape_json(s) + "\""; }

std::string term_json(const TermReport& t) {
    return "{\"value\": " + format_number(t.value) +
           ", \"refined\": " + format_number(t.refined) +
           ", \"error_estimate\": " + format_number(t.error_estimate) + "}";
}

std::string spec_json(const RunDescriptor& run) {
    std::string s = "{\"name\": " + quoted(run.name) +
                    ", \"m\": " + std::to_string(run.m) +
                    ", \"k\": " + std::to_string(run.k) +
                    ", \"gamma\": " + format_number(run.gamma) + ", \"params\": {";
    bool first = true;
    for (const auto& [key, value] : run.params) {
        if (!first) s += ", ";
        first = false;
        s += quoted(key) + ": " + format_number(value);
    }
    s += "}, \"f\": " + quoted(run.f_text) + "}";
    return s;
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (significant_digits(buf, static_cast<std::size_t>(res.ptr - buf)) > 12)
        res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string verification_json(const RunDescriptor& run, const VerificationReport& rep) {
    std::string s = "{\n  \"spec\": " + spec_json(run) + ",\n";
    s += "  \"lhs\": " + term_json(rep.lhs) + ",\n";
    s += "  \"weighted\": " + term_json(rep.weighted) + ",\n";
    s += "  \"extras\": [";
    for (std::size_t i = 0; i < rep.extras.size(); ++i) {
        if (i) s += ", ";
        s += term_json(rep.extras[i]);
    }
    s += "],\n";
    s += "  \"extras_sum\": " + format_number(rep.extras_sum) + ",\n";
    s += "  \"remainder\": " + term_json(rep.remainder) + ",\n";
    s += "  \"residual_rel\": " + format_number(rep.residual_rel) + ",\n";
    s += "  \"residual_refined\": " + format_number(rep.residual_refined) + ",\n";
    s += "  \"nodes_used\": " + std::to_string(rep.nodes_used) + ",\n";
    s += "  \"support_ok\": ";
    s += bool_text(rep.support_ok);
    s += ",\n  \"pass\": ";
    s += bool_text(rep.pass);
    s += "\n}\n";
    return s;
}

std::string hpw_json(const RunDescriptor& run, const HpwReport& rep) {
    std::string s = "{\n  \"spec\": " + spec_json(run) + ",\n";
    s += "  \"alpha_star\": " + format_number(rep.alpha_star) + ",\n";
    s += "  \"moment\": " + term_json(rep.moment) + ",\n";
    s += "  \"stretched\": " + term_json(rep.stretched) + ",\n";
    s += "  \"energy\": " + term_json(rep.energy) + ",\n";
    s += "  \"deficit\": " + term_json(rep.deficit) + ",\n";
    s += "  \"lhs\": {\"value\": " + format_number(rep.lhs) +
         ", \"refined\": " + format_number(rep.lhs_refined) + "},\n";
    s += "  \"weighted\": {\"value\": " + format_number(rep.weighted) +
         ", \"refined\": " + format_number(rep.weighted_refined) + "},\n";
    s += "  \"remainder\": {\"value\": " + format_number(rep.remainder) +
         ", \"refined\": " + format_number(rep.remainder_refined) + "},\n";
    s += "  \"residual_rel\": " + format_number(rep.residual_rel) + ",\n";
    s += "  \"residual_refined\": " + format_number(rep.residual_refined) + ",\n";
    s += "  \"nodes_used\": " + std::to_string(rep.nodes_used) + ",\n";
    s += "  \"pass\": ";
    s += bool_text(rep.pass);
    s += "\n}\n";
    return s;
}

std::string constants_json(const CpConstants& c) {
    std::string s = "{\n  \"p\": " + format_number(c.p);
    if (c.has_c1) {
        s += ",\n  \"c1\": {\"value\": " + format_number(c.c1.value) +
             ", \"bracket\": " + format_number(c.c1.bracket) + "}";
    }
    if (c.has_c2c3) {
        s += ",\n  \"c2_inf\": {\"value\": " + format_number(c.c2_inf.value) +
             ", \"bracket\": " + format_number(c.c2_inf.bracket) + "}";
        s += ",\n  \"c3_sup\": {\"value\": " + format_number(c.c3_sup.value) +
             ", \"bracket\": " + format_number(c.c3_sup.bracket) + "}";
    }
    s += "\n}\n";
    return s;
}

std::string campaign_csv_header() {
    return "run,key,p,lhs,weighted,extras_sum,remainder,residual_rel,pass\n";
}

std::string campaign_csv_row(int run_index, const RunDescriptor& run,
                             const VerificationReport& rep) {
    std::string s = std::to_string(run_index);
    s += ",";
    s += run.name;
    s += ",";
    s += format_number(rep.p);
    s += ",";
    s += format_number(rep.lhs.value);
    s += ",";
    s += format_number(rep.weighted.value);
    s += ",";
    s += format_number(rep.extras_sum);
    s += ",";
    s += format_number(rep.remainder.value);
    s += ",";
    s += format_number(rep.residual_rel);
    s += ",";
    s += bool_text(rep.pass);
    s += "\n";
    return s;
}

}  // namespace grushin
