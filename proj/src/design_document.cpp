#include "lrf/design_document.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lrf/response_analysis.hpp"

namespace lrf {

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from(const json& j, const char* name, Eigen::Index rows, Eigen::Index cols) {
    const auto r = j.at("rows").get<Eigen::Index>();
    const auto c = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (r != rows || c != cols || static_cast<Eigen::Index>(data.size()) != r * c) {
        throw std::invalid_argument(std::string("matrix '") + name + "' has dimensions " + std::to_string(r) + "x" +
                                    std::to_string(c) + ", expected " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = data.at(i * c + k).get<double>();
    }
    return m;
}

Eigen::VectorXd vector_from(const json& j, const char* name, Eigen::Index size) {
    const auto v = j.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(v.size()) != size) {
        throw std::invalid_argument(std::string("vector '") + name + "' has length " + std::to_string(v.size()) +
                                    ", expected " + std::to_string(size));
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), size);
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

DesignDocument make_design_document(const DesignSpec& spec) {
    VrfReport report = optimal_delay(spec);
    DesignSpec resolved = spec;
    if (!resolved.delay) resolved.delay = report.q_optimal;
    FilterRealization realization = build_realization(resolved);
    const auto f_c = bandwidth(realization);
    const double tau = group_delay_dc(realization);
    return DesignDocument{spec.delay, std::move(realization), std::move(report), f_c, tau};
}

std::string to_json(const DesignDocument& doc) {
    const auto& r = doc.realization;
    const auto& t = r.transforms;
    json candidates = json::array();
    for (const auto& c : doc.vrf_report.candidates) {
        candidates.push_back({{"q", c.delay}, {"vrf", c.vrf}, {"is_minimum", c.is_minimum}});
    }
    json j = {
        {"format", "lrf-design"},
        {"version", 1},
        {"spec",
         {{"kappa", r.spec.weight.kappa()},
          {"p", r.spec.weight.p()},
          {"kx", r.spec.model_order},
          {"kt", r.spec.derivative_count},
          {"q", doc.requested_delay ? json(*doc.requested_delay) : json("auto")},
          {"ts", r.spec.sample_period}}},
        {"resolved_q", r.delay()},
        {"vrf", matrix_json(r.vrf)},
        {"f_c", doc.f_c ? json(*doc.f_c) : json(nullptr)},
        {"group_delay_dc", doc.group_delay_dc},
        {"gamma", r.gamma},
        {"residual_scale", r.residual_scale},
        {"first_rho", vector_json(r.first_rho)},
        {"second_rho", vector_json(r.second_rho)},
        {"matrices",
         {{"overlap", matrix_json(t.overlap)},
          {"psi_from_phi", matrix_json(t.psi_from_phi)},
          {"phi_from_psi", matrix_json(t.phi_from_psi)},
          {"synthesis", matrix_json(t.synthesis)},
          {"first_moment_output", matrix_json(t.first_moment_output)},
          {"derivative_output", matrix_json(t.derivative_output)},
          {"second_moment_output", matrix_json(t.second_moment_output)}}},
        {"vrf_report", {{"q_optimal", doc.vrf_report.q_optimal}, {"vrf", matrix_json(doc.vrf_report.vrf)},
                        {"candidates", candidates}}},
    };
    return j.dump(2) + "\n";
}

DesignDocument from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != "lrf-design") throw std::invalid_argument("not a design document");
        const auto& s = j.at("spec");
        DesignSpec spec{
            .weight = WeightSpec::make(s.at("kappa").get<int>(), s.at("p").get<double>()),
            .model_order = s.at("kx").get<int>(),
            .derivative_count = s.at("kt").get<int>(),
            .delay = std::nullopt,
            .sample_period = s.at("ts").get<double>(),
        };
        std::optional<double> requested;
        if (s.at("q").is_number()) requested = s.at("q").get<double>();
        else if (s.at("q").get<std::string>() != "auto") throw std::invalid_argument("spec.q must be a number or \"auto\"");
        spec.delay = j.at("resolved_q").get<double>();
        spec.validate();

        const int kx = spec.model_order;
        const int kt = spec.derivative_count;
        const int k1 = spec.first_moment_order();
        const int k2 = spec.second_moment_order();
        const auto& m = j.at("matrices");
        TransformSet t{
            matrix_from(m.at("overlap"), "overlap", kx, kx),
            matrix_from(m.at("psi_from_phi"), "psi_from_phi", kx, kx),
            matrix_from(m.at("phi_from_psi"), "phi_from_psi", kx, kx),
            matrix_from(m.at("synthesis"), "synthesis", kt, kx),
            matrix_from(m.at("first_moment_output"), "first_moment_output", kx, k1),
            matrix_from(m.at("derivative_output"), "derivative_output", kt, k1),
            matrix_from(m.at("second_moment_output"), "second_moment_output", 1, k2),
        };
        const double p = spec.weight.p();
        FilterRealization r{
            spec,
            NetworkMatrices(k1, p),
            NetworkMatrices(k2, p),
            std::move(t),
            vector_from(j.at("first_rho"), "first_rho", k1),
            vector_from(j.at("second_rho"), "second_rho", k2),
            j.at("gamma").get<double>(),
            j.at("residual_scale").get<double>(),
            matrix_from(j.at("vrf"), "vrf", kt, kt),
        };

        const auto& vr = j.at("vrf_report");
        VrfReport report{matrix_from(vr.at("vrf"), "vrf_report.vrf", kt, kt), vr.at("q_optimal").get<double>(), {}};
        for (const auto& c : vr.at("candidates")) {
            report.candidates.push_back(
                {c.at("q").get<double>(), c.at("vrf").get<double>(), c.at("is_minimum").get<bool>()});
        }
        std::optional<double> f_c;
        if (!j.at("f_c").is_null()) f_c = j.at("f_c").get<double>();
        return DesignDocument{requested, std::move(r), std::move(report), f_c, j.at("group_delay_dc").get<double>()};
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed design document: ") + e.what());
    } catch (const std::domain_error& e) {
        throw std::invalid_argument(std::string("invalid design document: ") + e.what());
    }
}

void save_design_document(const DesignDocument& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json(doc);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

DesignDocument load_design_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

}  // namespace lrf
