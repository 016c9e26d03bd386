#include "squeezeprobe/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace squeezeprobe::io {

namespace {

void append_row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_number(v);
        first = false;
    }
    out += '\n';
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string format_number(double x) {
    if (x == 0.0) return "0";  // fold negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
}

std::string pair_name(BellPair pair) {
    return pair == BellPair::I ? "I" : "II";
}

BellPair pair_from_string(const std::string& s) {
    const std::string t = trim(s);
    if (t == "I") return BellPair::I;
    if (t == "II") return BellPair::II;
    throw std::invalid_argument("unknown Bell pair label: '" + s + "' (expected I or II)");
}

std::string trace_to_csv(const CoherenceTrace& trace) {
    std::string out = "t,abs_k1,abs_k2,abs_k12,abs_l12,re_k12,im_k12,re_l12,im_l12\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        append_row(out, {trace.times[i], std::abs(trace.kappa1[i]), std::abs(trace.kappa2[i]),
                         std::abs(trace.kappa12[i]), std::abs(trace.lambda12[i]),
                         trace.kappa12[i].real(), trace.kappa12[i].imag(),
                         trace.lambda12[i].real(), trace.lambda12[i].imag()});
    }
    return out;
}

std::string compare_to_csv(const CoherenceTrace& probe, const CoherenceTrace& reference) {
    if (probe.times.size() != reference.times.size()) {
        throw std::invalid_argument("compare_to_csv: traces have different lengths");
    }
    std::string out =
        "t,abs_k1,abs_k2,abs_k12,abs_l12,re_k12,im_k12,re_l12,im_l12,deviation\n";
    double max_dev = 0.0;
    for (std::size_t i = 0; i < probe.times.size(); ++i) {
        const double dev = std::max(
            {std::abs(std::abs(probe.kappa1[i]) - std::abs(reference.kappa1[i])),
             std::abs(std::abs(probe.kappa2[i]) - std::abs(reference.kappa2[i])),
             std::abs(std::abs(probe.kappa12[i]) - std::abs(reference.kappa12[i])),
             std::abs(std::abs(probe.lambda12[i]) - std::abs(reference.lambda12[i]))});
        max_dev = std::max(max_dev, dev);
        append_row(out, {probe.times[i], std::abs(probe.kappa1[i]), std::abs(probe.kappa2[i]),
                         std::abs(probe.kappa12[i]), std::abs(probe.lambda12[i]),
                         probe.kappa12[i].real(), probe.kappa12[i].imag(),
                         probe.lambda12[i].real(), probe.lambda12[i].imag(), dev});
    }
    out += "# max_deviation = " + format_number(max_dev) + "\n";
    return out;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
    std::string out = "delta_t,measure,best_pair\n";
    for (const SweepPoint& p : points) {
        out += format_number(p.delta_t);
        out += ',';
        out += format_number(p.measure);
        out += ',';
        out += pair_name(p.best_pair);
        out += '\n';
    }
    return out;
}

std::string nonmarkov_to_json(const NonMarkovResult& result) {
    std::string out = "{\"measure\": " + format_number(result.measure) +
                      ", \"best_pair\": \"" + pair_name(result.best_pair) +
                      "\", \"intervals\": [";
    for (std::size_t i = 0; i < result.increase_intervals.size(); ++i) {
        const IncreaseInterval& iv = result.increase_intervals[i];
        if (i > 0) out += ", ";
        out += "{\"t0\": " + format_number(iv.t_begin) + ", \"t1\": " +
               format_number(iv.t_end) + ", \"gain\": " + format_number(iv.gain) + "}";
    }
    out += "]}\n";
    return out;
}

std::string optimal_to_json(const OptimalResult& result) {
    return "{\"delta_t_star\": " + format_number(result.delta_t_star) +
           ", \"measure_star\": " + format_number(result.measure_star) +
           ", \"on_edge\": " + (result.on_edge ? "true" : "false") + "}\n";
}

std::string covariance_to_json(const TwoModeCovariance& S) {
    return "{\"a\": " + format_number(S.a) + ", \"b\": " + format_number(S.b) +
           ", \"c_plus\": " + format_number(S.c_plus) +
           ", \"c_minus\": " + format_number(S.c_minus) +
           ", \"c12\": " + format_number(S.c12) + ", \"c21\": " + format_number(S.c21) +
           "}\n";
}

TwoModeCovariance covariance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) {
        throw std::invalid_argument("covariance JSON must be an object");
    }
    TwoModeCovariance S;
    S.a = j.value("a", 0.5);
    S.b = j.value("b", 0.5);
    S.c_plus = j.value("c_plus", 0.0);
    S.c_minus = j.value("c_minus", 0.0);
    S.c12 = j.value("c12", 0.0);
    S.c21 = j.value("c21", 0.0);
    return S;
}

std::vector<Measurement> measurements_from_csv(const std::string& text) {
    std::vector<Measurement> out;
    std::istringstream stream(text);
    std::string line;
    bool first_content = true;
    while (std::getline(stream, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> fields = split_csv(t);
        double dt = 0.0;
        if (first_content && !parse_double(fields[0], dt)) {
            first_content = false;  // header row
            continue;
        }
        first_content = false;
        if (fields.size() != 3) {
            throw std::invalid_argument("measurement rows need 3 fields: delta_t,observed,pair");
        }
        Measurement m;
        if (!parse_double(fields[0], m.delta_t) || !parse_double(fields[1], m.observed)) {
            throw std::invalid_argument("malformed measurement row: '" + t + "'");
        }
        m.pair = pair_from_string(fields[2]);
        out.push_back(m);
    }
    return out;
}

std::string measurements_to_csv(const std::vector<Measurement>& measurements) {
    std::string out = "delta_t,observed,pair\n";
    for (const Measurement& m : measurements) {
        out += format_number(m.delta_t);
        out += ',';
        out += format_number(m.observed);
        out += ',';
        out += pair_name(m.pair);
        out += '\n';
    }
    return out;
}

std::string estimate_to_json(const EstimationResult& result) {
    std::string out = "{\"r_hat\": " + format_number(result.r_hat) + ", \"phi_hat\": ";
    out += result.phi_hat.has_value() ? format_number(*result.phi_hat) : "null";
    out += ", \"residual\": " + format_number(result.residual) + ", \"warnings\": [";
    for (std::size_t i = 0; i < result.warnings.size(); ++i) {
        if (i > 0) out += ", ";
        out += '"' + json_escape(result.warnings[i]) + '"';
    }
    out += "]}\n";
    return out;
}

}  // namespace squeezeprobe::io
