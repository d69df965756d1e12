#include "pcreg/cli/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pcreg/core/errors.hpp"

namespace pcreg {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("config: bad number for " + key);
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("config: bad integer for " + key);
    return v;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "voxel") c.voxel = parse_double(key, value);
    else if (key == "sparse_factor") c.sparse_factor = parse_double(key, value);
    else if (key == "desc_radius") c.desc_radius = parse_double(key, value);
    else if (key == "normal_k") c.normal_k = static_cast<int>(parse_int(key, value));
    else if (key == "desc_bins") c.desc_bins = static_cast<int>(parse_int(key, value));
    else if (key == "head_dim") c.head_dim = static_cast<int>(parse_int(key, value));
    else if (key == "head_init_sigma") c.head_init_sigma = parse_double(key, value);
    else if (key == "estimator") c.estimator = value;
    else if (key == "tau_c") c.tau_c = parse_double(key, value);
    else if (key == "n_seeds") c.n_seeds = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "ransac_iters") c.ransac_iters = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "top_k") c.top_k = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "max_iters") c.max_iters = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "seed_threshold") c.seed_threshold = parse_double(key, value);
    else if (key == "n_p") c.n_p = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "adapt_steps") c.adapt_steps = static_cast<int>(parse_int(key, value));
    else if (key == "adapt_lr") c.adapt_lr = parse_double(key, value);
    else if (key == "temperature") c.temperature = parse_double(key, value);
    else if (key == "nn_radius") c.nn_radius = parse_double(key, value);
    else if (key == "lambda_corr") c.lambda_corr = parse_double(key, value);
    else if (key == "lambda_1") c.lambda_1 = parse_double(key, value);
    else if (key == "margin_pos") c.margin_pos = parse_double(key, value);
    else if (key == "margin_neg") c.margin_neg = parse_double(key, value);
    else if (key == "train_lr") c.train_lr = parse_double(key, value);
    else if (key == "epochs") c.epochs = static_cast<int>(parse_int(key, value));
    else if (key == "overlap") c.overlap = parse_double(key, value);
    else if (key == "crop_mode") c.crop_mode = value;
    else if (key == "period") c.period = parse_double(key, value);
    else if (key == "duty") c.duty = parse_double(key, value);
    else if (key == "max_rot_deg") c.max_rot_deg = parse_double(key, value);
    else if (key == "max_trans_m") c.max_trans_m = parse_double(key, value);
    else if (key == "noise_sigma") c.noise_sigma = parse_double(key, value);
    else if (key == "rre_thresh") c.rre_thresh = parse_double(key, value);
    else if (key == "rte_thresh") c.rte_thresh = parse_double(key, value);
    else if (key == "ir_thresh") c.ir_thresh = parse_double(key, value);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "jobs") c.jobs = static_cast<int>(parse_int(key, value));
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    RunConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        }
        apply_config_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

void RunConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("config: ") + what);
    };
    require(voxel > 0.0, "voxel must be positive");
    require(sparse_factor > 1.0, "sparse_factor must exceed 1");
    require(desc_radius > 0.0, "desc_radius must be positive");
    require(normal_k >= 3, "normal_k must be >= 3");
    require(desc_bins >= 2, "desc_bins must be >= 2");
    require(head_dim >= 2, "head_dim must be >= 2");
    require(head_init_sigma >= 0.0, "head_init_sigma must be >= 0");
    require(estimator == "soc" || estimator == "sc2" || estimator == "ransac",
            "estimator must be soc|ransac");
    require(tau_c > 0.0, "tau_c must be positive");
    require(n_seeds >= 1, "n_seeds must be >= 1");
    require(ransac_iters >= 1, "ransac_iters must be >= 1");
    require(top_k >= 1, "top_k must be >= 1");
    require(max_iters >= 1, "max_iters must be >= 1");
    require(seed_threshold > 0.0 && seed_threshold < 1.0, "seed_threshold must be in (0, 1)");
    require(n_p >= 1, "n_p must be >= 1");
    require(adapt_steps >= 1, "adapt_steps must be >= 1");
    require(adapt_lr >= 0.0, "adapt_lr must be >= 0");
    require(temperature > 0.0, "temperature must be positive");
    require(nn_radius > 0.0, "nn_radius must be positive");
    require(lambda_corr >= 0.0, "lambda_corr must be >= 0");
    require(lambda_1 >= 0.0, "lambda_1 must be >= 0");
    require(margin_pos >= 0.0, "margin_pos must be >= 0");
    require(margin_neg > 0.0, "margin_neg must be positive");
    require(train_lr >= 0.0, "train_lr must be >= 0");
    require(epochs >= 0, "epochs must be >= 0");
    require(overlap > 0.0 && overlap <= 1.0, "overlap must be in (0, 1]");
    require(crop_mode == "halfspace" || crop_mode == "spherical",
            "crop_mode must be halfspace|spherical");
    require(period > 0.0, "period must be positive");
    require(duty > 0.0 && duty <= 1.0, "duty must be in (0, 1]");
    require(max_rot_deg >= 0.0, "max_rot_deg must be >= 0");
    require(max_trans_m >= 0.0, "max_trans_m must be >= 0");
    require(noise_sigma >= 0.0, "noise_sigma must be >= 0");
    require(rre_thresh > 0.0, "rre_thresh must be positive");
    require(rte_thresh > 0.0, "rte_thresh must be positive");
    require(ir_thresh > 0.0, "ir_thresh must be positive");
    require(jobs >= 1, "jobs must be >= 1");
}

}  // namespace pcreg
