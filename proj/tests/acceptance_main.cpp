// Acceptance runner. One line per criterion, PASS or FAIL, nonzero exit when
// anything fails. The training criteria share one set of desk-scale runs, so
// expect the full suite to take on the order of fifteen minutes.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gdnn/analysis.hpp"
#include "gdnn/config.hpp"
#include "gdnn/dataset.hpp"
#include "gdnn/dropout.hpp"
#include "gdnn/errors.hpp"
#include "gdnn/matrix.hpp"
#include "gdnn/network.hpp"
#include "gdnn/rng.hpp"
#include "gdnn/theory.hpp"
#include "gdnn/train.hpp"
#include "support/idx_bytes.hpp"
#include "support/stats.hpp"
#include "support/synthetic_digits.hpp"

namespace fs = std::filesystem;
using namespace gd;
using namespace testsup;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double secs_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int idx, const std::string& label, bool passed, const std::string& detail) {
    if (!passed) ++g_failures;
    std::printf("C%d %s: %s (%s)\n", idx, label.c_str(), passed ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const CheckResult* find_check(const VerifyReport& rep, const std::string& name) {
    for (const auto& c : rep.checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

double median3(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[1];
}

// ---- criterion 2 helpers --------------------------------------------------

double net_loss(Network& net, const Matrix& x, const std::vector<int>& labels,
                const std::vector<MaskWithScale>& masks) {
    const ForwardCache cache = forward(net, x, masks);
    return loss_softmax_ce(cache.logits, labels);
}

// worst |fd - analytic| / max(1, |analytic|) over every parameter
double fd_worst_network(std::uint64_t seed, const std::vector<std::size_t>& sizes) {
    Network net = init_network(sizes, seed);
    RngStream rng(seed, 7000);
    const std::size_t batch = 3;

    std::vector<MaskWithScale> masks;
    for (std::size_t l = 0; l + 2 < sizes.size(); ++l) {
        MaskWithScale m;
        m.r = sample_bernoulli(rng, sizes[l + 1], 0.75);
        m.scale = 1.0 / 0.75;
        masks.push_back(m);
    }

    // Central differences are only valid away from the relu kink, so redraw
    // the batch until every pre-activation clears the step size comfortably.
    Matrix x;
    ForwardCache cache;
    for (int attempt = 0; attempt < 100; ++attempt) {
        x = sample_uniform(rng, batch, sizes.front(), -1.0, 1.0);
        cache = forward(net, x, masks);
        double closest = 1.0;
        for (const auto& lc : cache.layers) {
            for (double z : lc.z.data()) closest = std::min(closest, std::fabs(z));
        }
        if (closest > 1e-4) break;
    }
    std::vector<int> labels(batch);
    for (auto& l : labels) l = static_cast<int>(rng.next_below(sizes.back()));

    const Gradients grads = backward(net, cache, labels);

    const double h = 1e-6;
    double worst = 0.0;
    auto fd_one = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = net_loss(net, x, labels, masks);
        param = saved - h;
        const double dn = net_loss(net, x, labels, masks);
        param = saved;
        const double fd = (up - dn) / (2 * h);
        worst = std::max(worst, std::fabs(fd - analytic) / std::max(1.0, std::fabs(analytic)));
    };

    for (std::size_t l = 0; l < net.hidden.size(); ++l) {
        auto& layer = net.hidden[l];
        for (std::size_t i = 0; i < layer.W.size(); ++i) {
            fd_one(layer.W.data()[i], grads.hidden[l].dW.data()[i]);
        }
        for (std::size_t i = 0; i < layer.b.size(); ++i) fd_one(layer.b[i], grads.hidden[l].db[i]);
        for (std::size_t i = 0; i < layer.t.size(); ++i) fd_one(layer.t[i], grads.hidden[l].dt[i]);
    }
    for (std::size_t i = 0; i < net.out.W.size(); ++i) {
        fd_one(net.out.W.data()[i], grads.dW_out.data()[i]);
    }
    for (std::size_t i = 0; i < net.out.b.size(); ++i) fd_one(net.out.b[i], grads.db_out[i]);
    return worst;
}

double fd_worst_factorized(std::uint64_t seed) {
    RngStream rng(seed, 7100);
    const std::size_t d1 = 2 + rng.next_below(4);
    const std::size_t d2 = 2 + rng.next_below(4);
    const std::size_t n = 1 + rng.next_below(6);
    const double thetas[] = {0.5, 0.7, 0.8, 0.9};
    FactorizedModel m;
    m.U = sample_normal(rng, d1, n, 0.0, 1.0);
    m.V = sample_normal(rng, d2, n, 0.0, 1.0);
    m.t.resize(n);
    for (auto& v : m.t) v = rng.uniform(-1.0, 1.0);
    m.theta = thetas[rng.next_below(4)];
    // an all-dropped mask makes the loss constant and the check vacuous
    BinaryVector r = sample_bernoulli(rng, n, m.theta);
    for (int attempt = 0; attempt < 100 && r == BinaryVector(n, 0); ++attempt) {
        r = sample_bernoulli(rng, n, m.theta);
    }
    Vector x(d2), y(d1);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();

    const FactorizedGradients g = factorized_gradients(m, x, y, r, UpdateMode::Corrected);

    const double h = 1e-6;
    double worst = 0.0;
    auto fd_one = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = factorized_loss(m, x, y, r);
        param = saved - h;
        const double dn = factorized_loss(m, x, y, r);
        param = saved;
        const double fd = (up - dn) / (2 * h);
        worst = std::max(worst, std::fabs(fd - analytic) / std::max(1.0, std::fabs(analytic)));
    };
    for (std::size_t i = 0; i < m.U.size(); ++i) fd_one(m.U.data()[i], g.dU.data()[i]);
    for (std::size_t i = 0; i < m.V.size(); ++i) fd_one(m.V.data()[i], g.dV.data()[i]);
    for (std::size_t i = 0; i < n; ++i) fd_one(m.t[i], g.dt[i]);
    return worst;
}

// ---- criterion 9 helpers --------------------------------------------------

int run_cmd(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    if (WIFEXITED(rc)) return WEXITSTATUS(rc);
    return -2;
}

std::vector<std::uint8_t> slurp(const fs::path& p) { return read_bytes(p.string()); }

std::string slurp_text(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// drop the named column from a CSV, so wall-clock noise stays out of the diff
std::string csv_without_column(const std::string& text, const std::string& column) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    std::ptrdiff_t drop = -1;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string f;
        std::istringstream ls(line);
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (first) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == column) drop = static_cast<std::ptrdiff_t>(i);
            }
            first = false;
        }
        if (drop >= 0 && static_cast<std::size_t>(drop) < fields.size()) {
            fields.erase(fields.begin() + drop);
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << fields[i];
        }
        out << '\n';
    }
    return out.str();
}

// manifests carry wall-clock timestamps; everything else must match
std::string without_timestamp_lines(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("\"start_time\"") != std::string::npos) continue;
        if (line.find("\"end_time\"") != std::string::npos) continue;
        out << line << '\n';
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli_path;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];
    }

    const fs::path wd = fs::current_path() / "acceptance_work";
    std::error_code ec;
    fs::remove_all(wd, ec);
    fs::create_directories(wd);

    // ---- C1 + C4: verification suite --------------------------------------
    const auto t_suite = Clock::now();
    VerifyOptions vo;  // 200 lemma instances, n <= 12, tol 1e-9
    const VerifyReport rep = run_verify_suite(vo);
    const double suite_secs = secs_since(t_suite);

    {
        const CheckResult* lemma = find_check(rep, "lemma_closed_vs_enumerated");
        const bool ok = lemma && lemma->passed && suite_secs < 30.0;
        report(1, "lemma closed form vs exact enumeration", ok,
               fmt("%zu instances, max rel err %.3g vs tol %.0e, %.2fs < 30s",
                   lemma ? lemma->trials : 0, lemma ? lemma->max_rel_error : 1.0,
                   lemma ? lemma->tolerance : 0.0, suite_secs));
    }

    // ---- C2: analytic gradients vs central finite differences -------------
    {
        const auto t0 = Clock::now();
        const std::vector<std::vector<std::size_t>> archs = {
            {4, 6, 5, 3}, {3, 5, 4, 3}, {5, 7, 3}, {2, 4, 4, 2}, {6, 8, 3}};
        double worst = 0.0;
        for (std::size_t i = 0; i < 25; ++i) {
            worst = std::max(worst, fd_worst_network(100 + i, archs[i % archs.size()]));
        }
        for (std::size_t i = 0; i < 25; ++i) {
            worst = std::max(worst, fd_worst_factorized(300 + i));
        }
        const double dt = secs_since(t0);
        const bool ok = worst <= 1e-6 && dt < 60.0;
        report(2, "analytic gradients match finite differences", ok,
               fmt("50 instances, worst rel err %.3g vs tol 1e-6, %.2fs < 60s", worst, dt));
    }

    // ---- C3: mask contracts ------------------------------------------------
    {
        // exact drop counts for every width and every ratio on the 0.01 grid
        std::size_t count_bad = 0;
        RngStream trng(5, 9001);
        for (std::size_t n = 1; n <= 64; ++n) {
            Vector t(n);
            for (auto& v : t) v = trng.uniform(-2.0, 2.0);
            for (std::size_t idx = 0; idx < 100; ++idx) {
                const double ratio = static_cast<double>(idx) / 100.0;
                const std::size_t want = n * idx / 100;
                const MaskWithScale m = topk_mask(t, ratio);
                if (m.dropped_count() != want) ++count_bad;
                const double want_scale =
                    static_cast<double>(n) / static_cast<double>(n - want);
                if (std::fabs(m.scale - want_scale) > 1e-12) ++count_bad;
            }
        }

        // DR never touches the inactive region
        Vector bimodal(40);
        for (std::size_t i = 0; i < 30; ++i) bimodal[i] = 0.10 + 1e-5 * static_cast<double>(i);
        for (std::size_t i = 0; i < 10; ++i) {
            bimodal[30 + i] = 0.90 + 1e-3 * static_cast<double>(i);
        }
        const RegionSplit split = detect_regions(bimodal);
        std::size_t inactive_drops = 0;
        RngStream drng(5, 9002);
        for (std::size_t trial = 0; trial < 10000; ++trial) {
            const MaskWithScale m = dr_mask(bimodal, 0.5, drng);
            for (std::size_t idx : split.inactive_indices) inactive_drops += (m.r[idx] == 0);
        }

        // inverted-scale mean preservation, 1e5 Monte Carlo samples
        RngStream srng(5, 9003);
        const std::size_t sn = 16;
        std::vector<double> elem_sum(sn, 0.0);
        for (std::size_t trial = 0; trial < 100000; ++trial) {
            const MaskWithScale m = standard_mask(sn, 0.3, srng);
            for (std::size_t i = 0; i < sn; ++i) elem_sum[i] += m.scale * m.r[i];
        }
        double std_dev_worst = 0.0;
        for (double s : elem_sum) std_dev_worst = std::max(std_dev_worst, std::fabs(s / 1e5 - 1.0));

        RngStream mrng(5, 9004);
        double layer_sum = 0.0;
        for (std::size_t trial = 0; trial < 100000; ++trial) {
            const MaskWithScale m = dr_mask(bimodal, 0.4, mrng);
            double mean = 0.0;
            for (std::size_t i = 0; i < bimodal.size(); ++i) mean += m.scale * m.r[i];
            layer_sum += mean / static_cast<double>(bimodal.size());
        }
        const double dr_dev = std::fabs(layer_sum / 1e5 - 1.0);

        // all-active DR should be distributionally plain Bernoulli dropout
        const std::size_t cn = 24;
        RegionSplit all_active;
        all_active.active_indices.resize(cn);
        for (std::size_t i = 0; i < cn; ++i) all_active.active_indices[i] = i;
        std::vector<double> h1(cn + 1, 0.0), h2(cn + 1, 0.0);
        RngStream c1(5, 9005), c2(5, 9006);
        for (std::size_t trial = 0; trial < 10000; ++trial) {
            h1[dr_mask(all_active, cn, 0.3, c1).dropped_count()] += 1.0;
            h2[standard_mask(cn, 0.3, c2).dropped_count()] += 1.0;
        }
        const double p = chi2_two_sample_p(h1, h2);

        const bool ok = count_bad == 0 && inactive_drops == 0 && std_dev_worst <= 0.01 &&
                        dr_dev <= 0.01 && p > 0.01;
        report(3, "mask contracts", ok,
               fmt("topk count errors %zu/6400; inactive drops %zu/1e4; mean dev std %.4f dr "
                   "%.4f vs 0.01; chi2 p %.3f > 0.01",
                   count_bad, inactive_drops, std_dev_worst, dr_dev, p));
    }

    // ---- C4: top-k drop maximizes residual on SVD factors ------------------
    {
        const CheckResult* ord = find_check(rep, "svd_topk_drop_maximizes_residual");
        const CheckResult* ey = find_check(rep, "svd_eckart_young_identity");

        double ortho_worst = 0.0;
        bool sigma_ok = true;
        RngStream rng(5, 9100);
        for (std::size_t n = 2; n <= 10; ++n) {
            const Matrix W = sample_normal(rng, n, n, 0.0, 1.0);
            const Svd s = svd(W);
            const Matrix utu = matmul_tn(s.U, s.U);
            const Matrix vtv = matmul_tn(s.V, s.V);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double id = i == j ? 1.0 : 0.0;
                    ortho_worst = std::max(ortho_worst, std::fabs(utu(i, j) - id));
                    ortho_worst = std::max(ortho_worst, std::fabs(vtv(i, j) - id));
                }
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (s.sigma[i] < 0.0) sigma_ok = false;
                if (i && s.sigma[i] > s.sigma[i - 1] + 1e-12) sigma_ok = false;
            }
        }

        const bool ok = ord && ord->passed && ey && ey->passed && ortho_worst <= 1e-10 &&
                        sigma_ok;
        report(4, "svd ordering is exhaustively optimal", ok,
               fmt("%s; orthonormality dev %.2g <= 1e-10; sigma sorted %s",
                   ord ? ord->details.c_str() : "check missing", ortho_worst,
                   sigma_ok ? "yes" : "no"));
    }

    // ---- C5/C6/C7 shared desk-scale runs -----------------------------------
    const auto t5 = Clock::now();
    std::printf("generating digit corpus and training 9 desk-scale runs, this is the slow "
                "part...\n");
    std::fflush(stdout);

    const SynthCorpus corpus = make_synth_corpus(SynthParams{});
    const fs::path train_im = wd / "train-images-idx3-ubyte";
    const fs::path train_lb = wd / "train-labels-idx1-ubyte";
    const fs::path test_im = wd / "t10k-images-idx3-ubyte";
    const fs::path test_lb = wd / "t10k-labels-idx1-ubyte";
    write_bytes(train_im.string(),
                idx3_bytes(static_cast<std::uint32_t>(corpus.train_labels.size()), 28, 28,
                           corpus.train_pixels));
    write_bytes(train_lb.string(),
                idx1_bytes(static_cast<std::uint32_t>(corpus.train_labels.size()),
                           corpus.train_labels));
    write_bytes(test_im.string(),
                idx3_bytes(static_cast<std::uint32_t>(corpus.test_labels.size()), 28, 28,
                           corpus.test_pixels));
    write_bytes(test_lb.string(),
                idx1_bytes(static_cast<std::uint32_t>(corpus.test_labels.size()),
                           corpus.test_labels));

    const Dataset full_train = load_mnist_idx(train_im.string(), train_lb.string());
    const Dataset test_set = load_mnist_idx(test_im.string(), test_lb.string());
    const Dataset train10k = subsample(full_train, 10000, 1);

    const std::vector<std::size_t> arch = {784, 256, 256, 10};
    struct RunOut {
        double acc = 0.0;
        double gap = 0.0;
    };
    std::map<std::string, std::vector<RunOut>> runs;  // policy -> by seed
    Network dr_net;
    bool have_dr_net = false;

    const std::vector<std::pair<std::string, double>> policies = {
        {"none", 0.0}, {"standard", 0.2}, {"guided_dr", 0.2}};
    for (const auto& [pname, rate] : policies) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            TrainConfig cfg =
                scale_to_epochs(make_default_config(parse_policy(pname, rate), arch), 60);
            cfg.seed = seed;
            const auto tr0 = Clock::now();
            auto [net, metrics] = train(cfg, train10k, test_set);
            const EpochMetrics& last = metrics.back();
            RunOut out;
            out.acc = last.test_acc;
            out.gap = last.test_loss - last.train_loss;
            runs[pname].push_back(out);
            if (pname == "guided_dr" && seed == 1) {
                dr_net = std::move(net);
                have_dr_net = true;
            }
            std::printf("  run %-9s seed %llu: test_acc %.4f loss_gap %+.4f (%.0fs)\n",
                        pname.c_str(), static_cast<unsigned long long>(seed), out.acc, out.gap,
                        secs_since(tr0));
            std::fflush(stdout);
        }
    }
    const double c5_secs = secs_since(t5);

    // ---- C5: accuracy trend ------------------------------------------------
    {
        auto accs = [&](const std::string& p) {
            std::vector<double> v;
            for (const auto& r : runs[p]) v.push_back(r.acc);
            return v;
        };
        const double med_dr = median3(accs("guided_dr"));
        const double med_none = median3(accs("none"));
        const double med_std = median3(accs("standard"));
        double min_acc = 1.0;
        for (const auto& [p, v] : runs) {
            for (const auto& r : v) min_acc = std::min(min_acc, r.acc);
        }
        const double slack = 0.003;
        const bool ok =
            med_dr >= med_none - slack && med_dr >= med_std - slack && min_acc >= 0.90;
        report(5, "desk-scale accuracy trend", ok,
               fmt("median dr %.4f vs none %.4f std %.4f, slack 0.003; min run %.4f >= 0.90; "
                   "%.0fs, 20min target informational",
                   med_dr, med_none, med_std, min_acc, c5_secs));
    }

    // ---- C6: ablation curves on the guided net -----------------------------
    {
        const auto t0 = Clock::now();
        bool ok = have_dr_net;
        std::string detail = "no trained net";
        if (have_dr_net) {
            const AblationCurve asc =
                ablation_sweep(dr_net, test_set, 0, AblationOrder::Ascending, 8);
            const AblationCurve desc =
                ablation_sweep(dr_net, test_set, 0, AblationOrder::Descending, 8);
            const double acc0 = asc.points.front().second;
            double acc_half = -1.0;
            for (const auto& [removed, acc] : asc.points) {
                if (removed == 128) acc_half = acc;
            }
            std::size_t above = 0;
            double worst_excess = 0.0;
            for (std::size_t i = 0; i < asc.points.size() && i < desc.points.size(); ++i) {
                const double excess = desc.points[i].second - asc.points[i].second;
                if (excess > 1e-12) {
                    ++above;
                    worst_excess = std::max(worst_excess, excess);
                }
            }
            const double dt = secs_since(t0);
            ok = acc_half >= 0.0 && acc_half >= acc0 - 0.02 && above == 0 && dt < 300.0;
            detail = fmt("weak-half ablation %.4f -> %.4f (drop %.4f <= 0.02); descending "
                         "above ascending at %zu points (max %+.4f); %.1fs < 300s",
                         acc0, acc_half, acc0 - acc_half, above, worst_excess, dt);
        }
        report(6, "ablation keeps accuracy until strong nodes go", ok, detail);
    }

    // ---- C7: generalization gap --------------------------------------------
    {
        auto gaps = [&](const std::string& p) {
            std::vector<double> v;
            for (const auto& r : runs[p]) v.push_back(r.gap);
            return v;
        };
        const double med_dr = median3(gaps("guided_dr"));
        const double med_none = median3(gaps("none"));
        const bool ok = med_dr <= med_none;
        report(7, "final loss gap favors guided dropout", ok,
               fmt("median test-train gap dr %+.4f <= none %+.4f", med_dr, med_none));
    }

    // ---- C8: per-epoch overhead on the wide net ----------------------------
    {
        const std::vector<std::size_t> wide = {784, 1024, 1024, 10};
        TrainConfig cfg_none =
            scale_to_epochs(make_default_config(parse_policy("none", 0.0), wide), 60);
        TrainConfig cfg_dr =
            scale_to_epochs(make_default_config(parse_policy("guided_dr", 0.2), wide), 60);
        const auto rows = time_per_epoch({cfg_none, cfg_dr}, train10k, 3);
        double sec_none = 0.0, sec_dr = 0.0;
        for (const auto& [name, sec] : rows) {
            if (name == "none") sec_none = sec;
            if (name == "guided_dr") sec_dr = sec;
        }
        const double ratio = sec_dr / sec_none;
        const bool ok = sec_none > 0.0 && ratio <= 1.3;
        report(8, "guided dropout epoch overhead", ok,
               fmt("median s/epoch none %.2f dr %.2f, ratio %.3f <= 1.3", sec_none, sec_dr,
                   ratio));
    }

    // ---- C9: byte-identical artifacts on repeated commands -----------------
    {
        bool ok = !cli_path.empty();
        std::string detail = "no --cli path given";
        if (ok) {
            const fs::path c9 = wd / "c9";
            fs::create_directories(c9);
            const fs::path cfg_path = c9 / "train.conf";
            {
                std::ofstream cfg(cfg_path);
                cfg << "layer_sizes = 784,32,10\n"
                    << "policy = guided_dr\n"
                    << "drop_rate = 0.2\n"
                    << "epochs = 4\n"
                    << "batch_size = 64\n"
                    << "lr_initial = 0.01\n"
                    << "lr_decay_every = 2\n"
                    << "strength_warmup_epochs = 1\n"
                    << "phase_schedule = 0.2:3\n"
                    << "seed = 11\n";
            }
            const std::string data_flags =
                " --mnist-images " + train_im.string() + " --mnist-labels " + train_lb.string() +
                " --mnist-test-images " + test_im.string() + " --mnist-test-labels " +
                test_lb.string() + " --subsample-n 600 --subsample-seed 5";

            std::vector<std::string> problems;
            auto train_once = [&](const std::string& out) {
                const std::string cmd = cli_path + " train --config " + cfg_path.string() +
                                        data_flags + " --out " + (c9 / out).string() + " > " +
                                        (c9 / (out + ".log")).string() + " 2>&1";
                const int rc = run_cmd(cmd);
                if (rc != 0) problems.push_back("train " + out + " rc " + std::to_string(rc));
            };
            auto verify_once = [&](const std::string& out) {
                const std::string cmd = cli_path + " verify --trials 40 --n 8 --seed 3 --out " +
                                        (c9 / out).string() + " > " +
                                        (c9 / (out + ".log")).string() + " 2>&1";
                const int rc = run_cmd(cmd);
                if (rc != 0) problems.push_back("verify " + out + " rc " + std::to_string(rc));
            };
            train_once("runA");
            train_once("runB");
            verify_once("verA");
            verify_once("verB");

            auto same_text = [&](const fs::path& a, const fs::path& b, const char* what,
                                 auto&& normalize) {
                if (!fs::exists(a) || !fs::exists(b)) {
                    problems.push_back(std::string(what) + " missing");
                    return;
                }
                if (normalize(slurp_text(a)) != normalize(slurp_text(b))) {
                    problems.push_back(std::string(what) + " differs");
                }
            };
            if (problems.empty()) {
                for (const char* f : {"runA/checkpoint.gdnn", "runB/checkpoint.gdnn"}) {
                    if (!fs::exists(c9 / f)) problems.push_back(std::string(f) + " missing");
                }
            }
            if (problems.empty()) {
                same_text(c9 / "runA/metrics.csv", c9 / "runB/metrics.csv", "metrics.csv",
                          [](const std::string& s) { return csv_without_column(s, "wall_seconds"); });
                if (slurp(c9 / "runA/checkpoint.gdnn") != slurp(c9 / "runB/checkpoint.gdnn")) {
                    problems.push_back("checkpoint.gdnn differs");
                }
                same_text(c9 / "runA/manifest.json", c9 / "runB/manifest.json",
                          "train manifest.json", without_timestamp_lines);
                same_text(c9 / "verA/verify_report.json", c9 / "verB/verify_report.json",
                          "verify_report.json", [](const std::string& s) { return s; });
                same_text(c9 / "verA/manifest.json", c9 / "verB/manifest.json",
                          "verify manifest.json", without_timestamp_lines);
            }
            ok = problems.empty();
            detail = ok ? "train and verify artifacts byte-identical, timestamps excluded"
                        : problems.front();
        }
        report(9, "repeated commands are byte-identical", ok, detail);
    }

    std::printf("acceptance: %d/9 criteria passed\n", 9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
