#include "bql/io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "bql/errors.hpp"

namespace bql::io {

namespace {

double param(const json& params, const char* key) {
    if (!params.is_object() || !params.contains(key) || !params.at(key).is_number()) {
        throw InvalidArgument(std::string("channel descriptor lacks numeric params.") + key);
    }
    return params.at(key).get<double>();
}

}  // namespace

json to_json(const LadderChannel& ch) {
    json params = json::object();
    for (const auto& [k, v] : ch.params()) {
        params[k] = v;
    }
    return json{{"type", std::string(to_string(ch.kind()))},
                {"n_max", ch.n_max()},
                {"params", std::move(params)},
                {"f", std::vector<double>(ch.f().begin(), ch.f().end())}};
}

LadderChannel channel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw InvalidArgument("channel descriptor needs a string 'type'");
    }
    const auto kind = channel_kind_from_string(j.at("type").get<std::string>());
    const json params = j.value("params", json::object());

    if (kind == ChannelKind::custom) {
        if (!j.contains("f") || !j.at("f").is_array()) {
            throw InvalidArgument("custom channel descriptor needs an 'f' array");
        }
        LadderChannel::Params p;
        for (const auto& [k, v] : params.items()) {
            if (v.is_number()) {
                p[k] = v.get<double>();
            }
        }
        return LadderChannel(j.at("f").get<std::vector<double>>(), Direction::addition,
                             ChannelKind::custom, std::move(p));
    }

    if (!j.contains("n_max") || !j.at("n_max").is_number_integer() ||
        j.at("n_max").get<long long>() < 1) {
        throw InvalidArgument("channel descriptor needs integer n_max >= 1");
    }
    const auto n_max = j.at("n_max").get<std::size_t>();
    switch (kind) {
        case ChannelKind::optimal:
            return optimal_channel(n_max);
        case ChannelKind::distinguishable:
            return distinguishable_channel(n_max);
        case ChannelKind::pdc:
            return pdc_channel(param(params, "gamma_t"), n_max);
        case ChannelKind::bs:
            return bs_subtraction_channel(param(params, "reflectivity"), n_max);
        case ChannelKind::feshbach:
            return feshbach_ladder(param(params, "gamma_t"), n_max);
        case ChannelKind::custom:
            break;
    }
    throw InvalidArgument("unhandled channel type");
}

json to_json(const MeasureReport& r) {
    return json{{"p0_initial", r.p0_initial},   {"p0_as", r.p0_as},
                {"m_raw", r.m_raw},             {"m_script", r.m_script},
                {"add_success", r.add_success}, {"sub_success", r.sub_success},
                {"calibrated", r.calibrated},   {"channel_descriptor", to_json(r.channel_descriptor)}};
}

json to_json(const CobosonTable& t) {
    return json{{"chi", t.chi},
                {"alpha_sq", t.alpha_sq},
                {"eps_norm_sq", t.eps_norm_sq},
                {"delta_diag", t.delta_diag},
                {"purity", t.purity}};
}

SchmidtSpectrum spectrum_from_json(const json& j) {
    if (!j.is_object() || !j.contains("lambda") || !j.at("lambda").is_array()) {
        throw InvalidArgument("spectrum JSON needs a 'lambda' array");
    }
    return SchmidtSpectrum(j.at("lambda").get<std::vector<double>>());
}

SchmidtSpectrum load_spectrum(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open spectrum file " + path.string());
    }
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw InvalidArgument("spectrum file " + path.string() + " is not valid JSON");
    }
    return spectrum_from_json(j);
}

std::string format_number(double x) { return fmt::format("{:.12g}", x); }

void write_csv(std::ostream& os, const CsvTable& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_number(row[i]);
        }
        os << '\n';
    }
}

}  // namespace bql::io
