// Exercises the shared-library C API the way an external client would:
// only cauchysketch.h, no core headers.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "cauchysketch.h"

static int failures = 0;

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            std::fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__,        \
                         __LINE__, #cond);                            \
            ++failures;                                               \
        }                                                             \
    } while (0)

static std::string temp_path(const char* name) {
    const char* dir = std::getenv("TMPDIR");
    std::string p = dir ? dir : "/tmp";
    p += '/';
    p += name;
    return p;
}

static void write_file(const std::string& path, const std::string& body) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fwrite(body.data(), 1, body.size(), f);
    std::fclose(f);
}

static std::string read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return {};
    std::string body;
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) body.append(buf, n);
    std::fclose(f);
    return body;
}

int main() {
    CHECK(std::strcmp(cs_version(), "1.0.0") == 0);
    CHECK(std::strcmp(cs_status_name(CS_OK), "ok") == 0);
    CHECK(std::strcmp(cs_status_name(CS_ERR_CHECKSUM), "checksum_mismatch") ==
          0);

    // ---- matrix loading and errors ----
    cs_matrix* matrix = nullptr;
    CHECK(cs_matrix_load_csv("/no/such/file.csv", ',', 0, &matrix) ==
          CS_ERR_IO);
    CHECK(std::strlen(cs_last_error()) > 0);

    const std::string csv = temp_path("capi_matrix.csv");
    write_file(csv, "1,2\n3,4\n");
    CHECK(cs_matrix_load_csv(csv.c_str(), ',', 0, &matrix) == CS_OK);
    CHECK(cs_matrix_rows(matrix) == 2);
    CHECK(cs_matrix_cols(matrix) == 2);
    double dist = 0.0;
    CHECK(cs_matrix_l1_distance(matrix, 0, 1, &dist) == CS_OK);
    CHECK(dist == 4.0);
    CHECK(cs_matrix_l1_distance(matrix, 0, 5, &dist) == CS_ERR_INDEX);
    cs_matrix_free(matrix);

    write_file(csv, "1,2\n3\n");
    CHECK(cs_matrix_load_csv(csv.c_str(), ',', 0, &matrix) ==
          CS_ERR_RAGGED_ROWS);
    write_file(csv, "1,nan\n");
    CHECK(cs_matrix_load_csv(csv.c_str(), ',', 0, &matrix) == CS_ERR_PARSE);

    // ---- projection round trip through the C surface ----
    std::vector<double> values;
    const size_t n = 6, D = 40;
    for (size_t i = 0; i < n * D; ++i) {
        values.push_back(std::sin(0.37 * double(i)) * 3.0);
    }
    cs_matrix* data = nullptr;
    CHECK(cs_matrix_from_values(n, D, values.data(), &data) == CS_OK);

    cs_sketch* sketch = nullptr;
    CHECK(cs_project(data, 42, 16, CS_GEN_CAUCHY, 0.0, &sketch) == CS_OK);
    CHECK(cs_sketch_rows(sketch) == n);
    CHECK(cs_sketch_dim(sketch) == 16);
    CHECK(cs_sketch_source_dim(sketch) == D);
    CHECK(cs_sketch_seed(sketch) == 42);
    CHECK(cs_sketch_generator(sketch) == CS_GEN_CAUCHY);

    const std::string skpath = temp_path("capi_sketch.bin");
    CHECK(cs_sketch_write(sketch, skpath.c_str()) == CS_OK);
    cs_sketch* loaded = nullptr;
    CHECK(cs_sketch_read(skpath.c_str(), &loaded) == CS_OK);
    CHECK(cs_sketch_rows(loaded) == n);
    double v1 = 0.0, v2 = 0.0;
    CHECK(cs_estimate_pair(sketch, 0, 1, CS_EST_GM_C, 0.0, &v1, nullptr) ==
          CS_OK);
    CHECK(cs_estimate_pair(loaded, 0, 1, CS_EST_GM_C, 0.0, &v2, nullptr) ==
          CS_OK);
    CHECK(v1 == v2);
    CHECK(v1 > 0.0);
    cs_sketch_free(loaded);

    // estimator/generator compatibility guard, both directions
    double out = 0.0;
    CHECK(cs_estimate_pair(sketch, 0, 1, CS_EST_L2SQ, 0.0, &out, nullptr) ==
          CS_ERR_ESTIMATOR_MISMATCH);
    {
        cs_sketch* nsketch = nullptr;
        CHECK(cs_project(data, 3, 8, CS_GEN_NORMAL, 0.0, &nsketch) == CS_OK);
        CHECK(cs_estimate_pair(nsketch, 0, 1, CS_EST_GM_C, 0.0, &out,
                               nullptr) == CS_ERR_ESTIMATOR_MISMATCH);
        CHECK(cs_estimate_pair(nsketch, 0, 1, CS_EST_L2SQ, 0.0, &out,
                               nullptr) == CS_OK);
        CHECK(out > 0.0);
        cs_sketch_free(nsketch);
    }

    // identical rows: gm estimates 0, the mle flags its zero convention
    {
        const double dup[4] = {1.5, -2.0, 1.5, -2.0};
        cs_matrix* two = nullptr;
        CHECK(cs_matrix_from_values(2, 2, dup, &two) == CS_OK);
        cs_sketch* dup_sketch = nullptr;
        CHECK(cs_project(two, 9, 6, CS_GEN_CAUCHY, 0.0, &dup_sketch) ==
              CS_OK);
        int flagged = 0;
        CHECK(cs_estimate_pair(dup_sketch, 0, 1, CS_EST_GM_C, 0.0, &out,
                               &flagged) == CS_OK);
        CHECK(out == 0.0);
        CHECK(cs_estimate_pair(dup_sketch, 0, 1, CS_EST_MLE, 0.0, &out,
                               &flagged) == CS_OK);
        CHECK(out == 0.0);
        CHECK(flagged == 1);
        cs_sketch_free(dup_sketch);
        cs_matrix_free(two);
    }

    // corrupt file -> checksum; junk -> bad magic
    std::string bytes = read_file(skpath);
    bytes.resize(bytes.size() - 5);
    write_file(skpath, bytes);
    CHECK(cs_sketch_read(skpath.c_str(), &loaded) == CS_ERR_CHECKSUM);
    write_file(skpath, "not a sketch at all");
    CHECK(cs_sketch_read(skpath.c_str(), &loaded) == CS_ERR_BAD_MAGIC);

    // ---- raw-sample estimators ----
    const double sample[4] = {1.0, 1.0, 1.0, 1.0};
    CHECK(cs_estimate_samples(sample, 4, CS_EST_FRAC, 0.5, &out, nullptr) ==
          CS_OK);
    CHECK(std::abs(out - 0.5) < 1e-12);
    const double zeros[3] = {0.0, 0.0, 0.0};
    int flagged = 0;
    CHECK(cs_estimate_samples(zeros, 3, CS_EST_MLE, 0.0, &out, &flagged) ==
          CS_OK);
    CHECK(out == 0.0);
    CHECK(flagged == 1);
    CHECK(cs_estimate_samples(sample, 4, CS_EST_FRAC, 1.5, &out, nullptr) ==
          CS_ERR_INVALID_ARGUMENT);

    // ---- planning ----
    size_t k = 0;
    int binding = -1;
    CHECK(cs_plan_l1(100, 0.5, 0.05, &k, &binding) == CS_OK);
    CHECK(k == 586);
    CHECK(binding == 0);
    CHECK(cs_plan_l2(100, 0.5, 0.05, &k) == CS_OK);
    CHECK(k == 293);
    CHECK(cs_plan_l1(100, 0.0, 0.05, &k, nullptr) ==
          CS_ERR_INVALID_ARGUMENT);

    // ---- bounds ----
    cs_gm_bounds gm;
    CHECK(cs_gm_tail_bounds(50, 0.5, 0.0, &gm) == CS_OK);
    CHECK(std::abs(gm.markov_upper - 0.15693511015720749) < 1e-12);
    CHECK(gm.markov_upper <= gm.exp_upper);
    CHECK(gm.markov_lower_valid == 1);
    cs_mle_bounds mle;
    CHECK(cs_mle_tail_bounds(100, 0.5, &mle) == CS_OK);
    CHECK(std::abs(mle.alpha - 49.261083743842365) < 1e-10);
    CHECK(mle.ig_upper <= mle.ig_chern_upper);
    CHECK(std::abs(mle.ig_chern_symmetric - 2.0 * mle.ig_chern_upper) <
          1e-15);

    // ---- bias factor ----
    double b = 0.0;
    CHECK(cs_median_bias_factor(5, &b) == CS_OK);
    CHECK(std::abs(b - 1.3124154276454762) < 1e-9);
    CHECK(cs_median_bias_factor(4, &b) == CS_ERR_INVALID_ARGUMENT);
    CHECK(std::abs(cs_std_normal_cdf(0.0) - 0.5) == 0.0);

    // ---- CSV table surfaces ----
    const std::string table = temp_path("capi_table.csv");
    CHECK(cs_bias_table_csv(21, table.c_str(), "via=capi") == CS_OK);
    std::string body = read_file(table);
    CHECK(body.find("# cauchysketch bias-table") == 0);
    CHECK(body.find("via=capi") != std::string::npos);
    CHECK(body.find("k,b_me,var_factor") != std::string::npos);

    CHECK(cs_pairwise_csv(sketch, CS_EST_GM_C, 0.0, nullptr, table.c_str(),
                          "via=capi") == CS_OK);
    body = read_file(table);
    CHECK(body.find("i,j,estimate,status") != std::string::npos);
    CHECK(body.find("# rows=15 errors=0") != std::string::npos);

    const std::string pairs = temp_path("capi_pairs.csv");
    write_file(pairs, "0,1\n2,3\n");
    CHECK(cs_pairwise_csv(sketch, CS_EST_GM_C, 0.0, pairs.c_str(),
                          table.c_str(), nullptr) == CS_OK);
    body = read_file(table);
    CHECK(body.find("# rows=2 errors=0") != std::string::npos);

    CHECK(cs_sim_moments_csv(CS_EST_GM_C, 0.0, 10, 1.0, 20000, 5,
                             table.c_str(), "via=capi") == CS_OK);
    body = read_file(table);
    CHECK(body.find("mean,") != std::string::npos);

    const double grid[3] = {0.1, 0.5, 1.0};
    CHECK(cs_sim_tail_csv(CS_EST_GM_C, 0.0, 10, 1.0, 20000, 5, grid, 3,
                          table.c_str(), nullptr) == CS_OK);
    body = read_file(table);
    CHECK(body.find("markov_upper") != std::string::npos);

    const size_t klist[2] = {3, 5};
    CHECK(cs_sim_mse_csv(klist, 2, 20000, 5, table.c_str(), nullptr) ==
          CS_OK);
    body = read_file(table);
    CHECK(body.find("infinite") != std::string::npos);

    CHECK(cs_sim_hist_csv(CS_EST_GM_C, 0.0, 10, 1.0, 20000, 5, 30,
                          table.c_str(), nullptr) == CS_OK);
    body = read_file(table);
    CHECK(body.find("bin_center,count") != std::string::npos);

    cs_sketch_free(sketch);
    cs_matrix_free(data);

    if (failures == 0) {
        std::printf("capi: all checks passed\n");
        return 0;
    }
    std::printf("capi: %d failures\n", failures);
    return 1;
}
