#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascade/linalg.hpp"
#include "cascade/spaces.hpp"
#include "cascade/spectral_core.hpp"

namespace cascade::cli {

struct Range {
    double min = 0.0;
    double max = 1.0;
    int count = 1;

    std::vector<double> values() const;
};

struct SpectrumBlock {
    long n_max = 10;
    long m_max = 10;
    int grid_points = 11;
};

struct GammaScanBlock {
    double beta0 = 1.0;
    long n_max = 2;
    Range a{0.0, 0.0, 1};
    Range b{0.0, 1.0, 201};
    double refine_tol = 1e-13;
};

struct HumBlock {
    std::optional<ModalVector> init;
    std::optional<ModalVector> target;
    std::uint64_t seed = 20240611;
    int samples = 101;
};

struct NoninvBlock {
    double t = 1.25;
    long n_min = 5;
    long n_max = 20;
};

struct ConstantsBlock {
    std::vector<double> T_list{1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<int> N_h_list{1, 2, 4, 8, 16, 32, 64};
    std::vector<int> parabolic_list{0, 1, 2, 3, 4};
};

struct HwBlock {
    long m_min = 16;
    long m_max = 512;
    int samples = 40;
    long table_m = 20;
    bool steer = true;
};

struct ExperimentConfig {
    SystemParams params;
    CouplingProfile profile;
    Truncation truncation;
    Precision precision = Precision::DoubleDouble;
    int workers = 1;
    std::string output_dir = ".";
    SpectrumBlock spectrum;
    GammaScanBlock gamma_scan;
    HumBlock hum;
    NoninvBlock noninv;
    ConstantsBlock constants;
    HwBlock hw;
};

// Throws ConfigError naming the offending key; unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& c);
nlohmann::json default_config_json();

nlohmann::json to_json(const ModalVector& v);
ModalVector modal_vector_from_json(const nlohmann::json& j, const std::string& field);

}  // namespace cascade::cli
