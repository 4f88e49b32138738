#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "relab/detector/rgcn.hpp"

namespace relab {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = std::vector<double>(m.data(), m.data() + m.size());
    return j;
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.size())
        throw std::runtime_error("detector checkpoint: weight array size mismatch");
    std::copy(data.begin(), data.end(), m.data());
    return m;
}

}  // namespace

void save_detector(const RgcnDetector& det, const std::string& path) {
    const RgcnModel& m = det.model();
    json j;
    j["format"] = "relab-detector";
    j["version"] = 1;
    j["input_dim"] = m.input_dim();
    j["hidden_dim"] = m.hidden_dim();
    j["layers"] = m.layers();
    json layers = json::array();
    for (int k = 0; k < m.layers(); ++k) {
        json lw = json::array();
        for (int r = 0; r <= kRelationCount; ++r) lw.push_back(matrix_to_json(m.layer(k)[r]));
        layers.push_back(lw);
    }
    j["weights"] = std::move(layers);
    j["head_w"] = m.head_weights();
    j["head_b"] = m.head_bias();
    j["encoder"] = {{"min_degree", det.encoder().min_degree},
                    {"max_degree", det.encoder().max_degree}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_detector: cannot open " + path);
    out << j.dump(2) << "\n";
}

RgcnDetector load_detector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_detector: cannot open " + path);
    json j = json::parse(in);
    if (j.value("format", "") != "relab-detector")
        throw std::runtime_error("load_detector: not a detector checkpoint: " + path);
    if (j.value("version", 0) != 1)
        throw std::runtime_error("load_detector: unsupported checkpoint version");
    RgcnModel m(j.at("input_dim").get<int>(), j.at("hidden_dim").get<int>(),
                j.at("layers").get<int>(), 0);
    const json& layers = j.at("weights");
    if (layers.size() != static_cast<std::size_t>(m.layers()))
        throw std::runtime_error("load_detector: layer count mismatch");
    for (int k = 0; k < m.layers(); ++k)
        for (int r = 0; r <= kRelationCount; ++r) {
            Matrix w = matrix_from_json(layers[k][r]);
            if (!w.same_shape(m.layer(k)[r]))
                throw std::runtime_error("load_detector: weight shape mismatch");
            m.layer(k)[r] = std::move(w);
        }
    m.head_weights() = j.at("head_w").get<std::vector<double>>();
    if (m.head_weights().size() != static_cast<std::size_t>(m.hidden_dim()))
        throw std::runtime_error("load_detector: head size mismatch");
    m.head_bias() = j.at("head_b").get<double>();
    NodeEncoder enc;
    enc.min_degree = j.at("encoder").at("min_degree").get<double>();
    enc.max_degree = j.at("encoder").at("max_degree").get<double>();
    return RgcnDetector(std::move(m), enc);
}

}  // namespace relab
