// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] is the path to the fringewire binary (used by the
// determinism criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fringewire/cli.hpp"
#include "fringewire/field.hpp"
#include "fringewire/heisenberg.hpp"
#include "fringewire/obstruction.hpp"
#include "fringewire/quantum.hpp"
#include "fringewire/rng.hpp"
#include "fringewire/transport.hpp"

using namespace fringewire;
namespace fs = std::filesystem;

namespace {

std::string g_binary_path;

class Checker {
public:
    void require(bool condition, const std::string& message) {
        if (!condition) {
            ok_ = false;
            detail_ << "    failed: " << message << '\n';
        }
    }
    bool ok() const { return ok_; }
    std::string detail() const { return detail_.str(); }

private:
    bool ok_ = true;
    std::ostringstream detail_;
};

std::string num(double v) { return cli::g12(v); }

double run_seconds(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int run_binary(const std::string& args) {
    const std::string command = g_binary_path + " " + args;
    const int status = std::system(command.c_str());
    if (status < 0) return -1;
    return WEXITSTATUS(status);
}

// ---------------------------------------------------------------------------

void criterion_fringe_spacing(Checker& check) {
    PhotonRng rng(1001, 0);
    const double elapsed = run_seconds([&] {
        for (int trial = 0; trial < 20; ++trial) {
            BeamPair beams;
            beams.wavelength = 0.25 + 1.75 * rng.uniform();
            beams.crossing_angle = 0.002 + 0.188 * rng.uniform();
            const double period = beams.wavelength / beams.crossing_angle;
            beams.waist = std::max(10.0 * beams.wavelength, 2.0 * period);

            const ComplexField field = superpose(beams, 8.0 * period, 2048);
            const double measured = locate_fringes(field, beams).spacing_l;
            check.require(std::abs(measured - period) <= 0.01 * period,
                          "trial " + std::to_string(trial) + ": measured " + num(measured) +
                              " vs formula " + num(period));
        }
    });
    check.require(elapsed < 5.0, "runtime " + num(elapsed) + " s exceeds 5 s");
}

void criterion_visibility(Checker& check) {
    BeamPair beams;
    const double window = 3000.0;
    const std::size_t n = 8192;

    const double v_equal = beam_visibility(beams, window, n);
    check.require(std::abs(v_equal - 1.0) <= 1e-6,
                  "equal beams: V = " + num(v_equal) + ", expected 1 within 1e-6");

    beams.amplitude_ratio = 0.0;
    const double v_single = beam_visibility(beams, window, n);
    check.require(std::abs(v_single) <= 1e-6,
                  "single beam: V = " + num(v_single) + ", expected 0 within 1e-6");

    beams.amplitude_ratio = 0.5;
    const double expected = 2.0 * 0.5 / (1.0 + 0.25);  // analytic two-wave contrast
    const double v_half = beam_visibility(beams, window, n);
    check.require(std::abs(v_half - expected) <= 1e-3,
                  "r = 0.5: V = " + num(v_half) + ", expected " + num(expected));
}

void criterion_babinet(Checker& check) {
    BeamPair beams;
    const ComplexField field = superpose(beams, 3000.0, 4096);
    const DetectorPlane plane = DetectorPlane::for_beams(beams);
    const std::vector<double> angles = detector_angles(plane);
    const FarField full = farfield(field, beams.wavelength, angles);

    double scale = 0.0;
    for (const auto& a : full.amplitudes) scale = std::max(scale, std::abs(a));

    PhotonRng rng(2002, 0);
    for (int trial = 0; trial < 10; ++trial) {
        WireComb comb;
        comb.wires.push_back({-600.0 + 1200.0 * rng.uniform(), 5.0 + 40.0 * rng.uniform(), true});
        const FarField masked = farfield(apply_mask(field, comb), beams.wavelength, angles);
        const FarField complement =
            farfield(complement_field(field, comb), beams.wavelength, angles);
        double worst = 0.0;
        for (std::size_t i = 0; i < angles.size(); ++i) {
            const double residual = std::abs(
                masked.amplitudes[i] - (full.amplitudes[i] - complement.amplitudes[i]));
            worst = std::max(worst, residual);
        }
        check.require(worst <= 1e-10 * scale, "trial " + std::to_string(trial) +
                                                  ": residual " + num(worst) + " vs bound " +
                                                  num(1e-10 * scale));
    }
}

void criterion_scan_shape(Checker& check) {
    const double elapsed = run_seconds([&] {
        BeamPair beams;
        const double period = fringe_spacing(beams);
        const DetectorPlane plane = DetectorPlane::for_beams(beams);

        const std::size_t steps = 65;
        const double step = 4.0 * period / static_cast<double>(steps - 1);
        std::vector<double> positions;
        for (std::size_t i = 0; i < steps; ++i)
            positions.push_back(-2.0 * period + step * static_cast<double>(i));

        const ScanResult scan = scan_wire(beams, WireSpec{}, plane, positions);
        std::vector<double> loss;
        for (const auto& row : scan.rows) loss.push_back(row.loss_fraction);

        // Autocorrelation peak at one period (16 steps).
        double mean = 0.0;
        for (double x : loss) mean += x;
        mean /= static_cast<double>(loss.size());
        double best = -1e300;
        std::size_t best_lag = 0;
        for (std::size_t lag = 8; lag <= 24; ++lag) {
            double c = 0.0;
            for (std::size_t i = 0; i + lag < loss.size(); ++i)
                c += (loss[i] - mean) * (loss[i + lag] - mean);
            if (c > best) {
                best = c;
                best_lag = lag;
            }
        }
        check.require(best_lag >= 15 && best_lag <= 17,
                      "autocorrelation peak at lag " + std::to_string(best_lag) +
                          " steps, expected 16 +- 1");

        // Dark-fringe loss below a tenth of bright-fringe loss.
        const auto nearest = [&](double y) {
            std::size_t best_i = 0;
            for (std::size_t i = 0; i < positions.size(); ++i)
                if (std::abs(positions[i] - y) < std::abs(positions[best_i] - y)) best_i = i;
            return best_i;
        };
        const double bright = loss[nearest(0.0)];
        const double dark = loss[nearest(0.5 * period)];
        check.require(dark < 0.1 * bright,
                      "dark " + num(dark) + " not below 0.1 * bright " + num(bright));

        // Maximum loss on a bright fringe.
        const std::size_t max_index =
            std::max_element(loss.begin(), loss.end()) - loss.begin();
        const double max_pos = positions[max_index];
        const double nearest_bright = std::round(max_pos / period) * period;
        check.require(std::abs(max_pos - nearest_bright) <= step,
                      "loss maximum at " + num(max_pos) + ", nearest bright " +
                          num(nearest_bright));
    });
    check.require(elapsed < 60.0, "runtime " + num(elapsed) + " s exceeds 60 s");
}

void criterion_calibration(Checker& check) {
    BeamPair beams;
    const WireSpec wire{0.0, 17.0, true};
    const double waist = calibrate_waist(beams, wire, 0.08);

    BeamPair calibrated = beams;
    calibrated.waist = waist;
    const DetectorPlane plane = DetectorPlane::for_beams(calibrated);
    const double blocked = blocked_beam_loss(calibrated, wire, plane);
    check.require(std::abs(blocked - 0.08) <= 1e-4,
                  "calibrated blocked loss " + num(blocked) + " misses 0.08 by more than 1e-4");

    std::vector<double> center{0.0};
    const double bright = scan_wire(calibrated, wire, plane, center).rows[0].loss_fraction;
    check.require(bright > blocked, "bright-fringe loss " + num(bright) +
                                        " does not exceed blocked-beam loss " + num(blocked));

    // Regression constant recorded from the deterministic pipeline; the
    // absolute bright-fringe value is geometry-dependent, so only the
    // ordering and the recorded constant are asserted.
    check.require(std::abs(bright - 0.149854379143) <= 1e-6 * 0.149854379143,
                  "calibrated bright-fringe loss drifted: " + num(bright));
}

void criterion_comb(Checker& check) {
    BeamPair beams;
    const DetectorPlane plane = DetectorPlane::for_beams(beams);
    const double period = fringe_spacing(beams);

    const double aligned = comb_at_dark_fringes(beams, plane, 0.0).rows[0].loss_fraction;
    check.require(std::abs(aligned - 0.0606518722511) <= 1e-6 * 0.0606518722511,
                  "aligned comb loss drifted: " + num(aligned));

    std::vector<double> center{0.0};
    const double bright = scan_wire(beams, WireSpec{}, plane, center).rows[0].loss_fraction;
    check.require(aligned < bright, "comb loss " + num(aligned) +
                                        " not below single bright-fringe wire loss " +
                                        num(bright));

    double previous = aligned;
    for (int i = 1; i <= 4; ++i) {
        const double m = 0.25 * period * i / 4.0;
        const double loss = comb_at_dark_fringes(beams, plane, m).rows[0].loss_fraction;
        check.require(loss >= previous - 1e-12,
                      "loss not monotone at misalignment " + num(m));
        previous = loss;
    }
}

void criterion_quantum_maps(Checker& check) {
    for (auto convention : {PhaseConvention::hadamard, PhaseConvention::iphase}) {
        const std::string tag = to_string(convention);
        PhotonRng rng(3003, convention == PhaseConvention::hadamard ? 0 : 1);
        double worst_norm = 0.0;
        double worst_inverse = 0.0;
        for (int i = 0; i < 10000; ++i) {
            std::complex<double> a{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
            std::complex<double> b{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
            const double norm = std::sqrt(std::norm(a) + std::norm(b));
            if (norm < 1e-3) continue;
            const TwoModeState state{a / norm, b / norm};
            const TwoModeState out = clamped_scatter(state, convention);
            worst_norm = std::max(worst_norm, std::abs(out.norm_squared() - 1.0));
            const TwoModeState back = clamped_scatter(out, convention);
            worst_inverse = std::max(worst_inverse, std::abs(back.c1 - state.c1));
            worst_inverse = std::max(worst_inverse, std::abs(back.c2 - state.c2));
        }
        check.require(worst_norm <= 1e-12,
                      tag + ": unitarity defect " + num(worst_norm) + " exceeds 1e-12");
        check.require(worst_inverse <= 1e-12,
                      tag + ": self-inverse defect " + num(worst_inverse) + " exceeds 1e-12");

        // Equal split of the basis state, exact in probability.
        const TwoModeState split = clamped_scatter({1.0, 0.0}, convention);
        check.require(std::abs(std::norm(split.c1) - 0.5) <= 1e-15 &&
                          std::abs(std::norm(split.c2) - 0.5) <= 1e-15,
                      tag + ": basis state does not split 50/50");
    }

    // The default completion reproduces the equal superposition literally.
    const TwoModeState eq5 = clamped_scatter({1.0, 0.0}, PhaseConvention::hadamard);
    const double s = std::sqrt(0.5);
    check.require(eq5.c1 == std::complex<double>(s, 0.0) &&
                      eq5.c2 == std::complex<double>(s, 0.0),
                  "hadamard image of (1,0) is not (1/sqrt2, 1/sqrt2) exactly");
}

void criterion_statistics(Checker& check) {
    const double elapsed = run_seconds([&] {
        // Free-wire branch frequencies at N = 1e6, every photon entering in
        // mode 1 and reaching the wire.
        EnsembleConfig free_config;
        free_config.photon_count = 1000000;
        free_config.source_split = 1.0;
        free_config.interacting_fraction = 1.0;
        free_config.wire = WireSpec{31.65, 17.0, false};
        free_config.seed = 404;
        const RunReport free_report = run_ensemble(free_config);
        const double m = static_cast<double>(free_report.interacting_class.count);
        const double switch_freq =
            static_cast<double>(free_report.interacting_class.switches) / m;
        check.require(std::abs(switch_freq - 0.5) <= 4.0 * std::sqrt(0.25 / m),
                      "free-wire switch frequency " + num(switch_freq) + " outside 4 sigma");

        // Clamped ensemble detector split at N = 1e6.
        EnsembleConfig clamped_config;
        clamped_config.photon_count = 1000000;
        clamped_config.wire = WireSpec{31.65, 17.0, true};
        clamped_config.seed = 405;
        const RunReport clamped_report = run_ensemble(clamped_config);
        const double n = static_cast<double>(clamped_config.photon_count);
        check.require(std::abs(static_cast<double>(clamped_report.detector_1) - 0.5 * n) <=
                          4.0 * std::sqrt(0.25 * n),
                      "clamped detector split outside 4 sigma");

        // Pure transport conserves every photon.
        check.require(clamped_report.lost == 0, "clamped run lost photons");
        check.require(clamped_report.detected() == clamped_config.photon_count,
                      "clamped run dropped counts");
        check.require(free_report.lost == 0 &&
                          free_report.detected() == free_config.photon_count,
                      "free-wire run dropped counts");
    });
    check.require(elapsed < 30.0, "runtime " + num(elapsed) + " s exceeds 30 s");
}

void criterion_duality_sweep(Checker& check) {
    PhotonRng rng(5005, 0);
    int emitted = 0;
    for (int trial = 0; trial < 500; ++trial) {
        EnsembleConfig config;
        config.photon_count = 2000;
        config.source_split = rng.uniform();
        config.interacting_fraction = rng.uniform();
        config.seed = static_cast<std::uint64_t>(trial);
        config.convention =
            trial % 2 == 0 ? PhaseConvention::hadamard : PhaseConvention::iphase;
        const int wire_kind = trial % 3;  // none / clamped / free
        if (wire_kind == 1) config.wire = WireSpec{31.65, 17.0, true};
        if (wire_kind == 2) config.wire = WireSpec{31.65, 17.0, false};

        const RunReport report = run_ensemble(config);
        for (const ClassStats* cls : {&report.free_class, &report.interacting_class}) {
            const double sum = cls->which_way_K * cls->which_way_K +
                               cls->visibility_V * cls->visibility_V;
            check.require(sum <= 1.0 + 1e-9 && cls->satisfied,
                          "trial " + std::to_string(trial) + ": K^2+V^2 = " + num(sum));
            ++emitted;
        }
    }
    check.require(emitted == 1000, "expected 1000 emitted (K, V) pairs");

    for (const auto& row : scenario_table()) {
        if (row.excluded_by_physics) {
            check.require(row.k2_plus_v2 == 2.0 && !row.satisfied,
                          "counterfactual row must report K^2+V^2 = 2, violated");
        } else {
            check.require(row.satisfied, "physical scenario row violates the inequality");
        }
    }
}

void criterion_uncertainty(Checker& check) {
    PhotonRng rng(6006, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        BeamPair beams;
        beams.wavelength = 0.1 + 9.9 * rng.uniform();
        beams.crossing_angle = 1e-4 + 0.1989 * rng.uniform();
        beams.waist = 100.0 * beams.wavelength;
        const UncertaintyReport report = uncertainty_report(beams);
        check.require(report.wire_position_uncertainty / report.fringe_spacing == 1.0,
                      "trial " + std::to_string(trial) + ": dy/l != 1 exactly");
        check.require(report.spans_fringe, "spans_fringe false");
        check.require(report.fringe_spacing == fringe_spacing(beams),
                      "cross-module fringe spacing mismatch");
    }
}

void criterion_determinism(Checker& check) {
    // Library level: shard independence of ensembles.
    EnsembleConfig config;
    config.photon_count = 200000;
    config.wire = WireSpec{31.65, 17.0, true};
    config.seed = 777;
    const RunReport reference = run_ensemble(config);
    for (int shards : {2, 4, 9}) {
        EnsembleConfig sharded = config;
        sharded.shards = shards;
        check.require(run_ensemble(sharded) == reference,
                      "ensemble differs at shard count " + std::to_string(shards));
    }

    // Process level: rerunning a command reproduces the bytes.
    if (g_binary_path.empty()) {
        check.require(false, "no binary path supplied on the command line");
        return;
    }
    const fs::path dir = fs::temp_directory_path() / "fringewire_acceptance";
    fs::create_directories(dir);
    const auto out = [&](const std::string& name) { return (dir / name).string(); };

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"fringes", "fringes --seed 3"},
        {"scan", "scan --scan_steps 9"},
        {"blocked", "blocked"},
        {"comb", "comb --misalignment 8"},
        {"photons", "photons --seed 7 --photon_count 50000"},
        {"duality", "duality"},
        {"uncertainty", "uncertainty"},
    };
    for (const auto& [name, args] : commands) {
        const std::string first = out(name + "_1.out");
        const std::string second = out(name + "_2.out");
        check.require(run_binary(args + " --output " + first) == 0, name + " run 1 failed");
        check.require(run_binary(args + " --output " + second) == 0, name + " run 2 failed");
        const std::string payload = read_file(first);
        check.require(!payload.empty() && payload == read_file(second),
                      name + " outputs differ between identical runs");
    }

    std::error_code ec;
    fs::remove_all(dir, ec);
}

struct Criterion {
    std::string name;
    std::function<void(Checker&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_binary_path = argv[1];

    const std::vector<Criterion> criteria = {
        {"fringe spacing matches lambda/alpha within 1% over 20 random pairs",
         criterion_fringe_spacing},
        {"visibility endpoints: V(1)=1, V(0)=0, V(0.5)=0.8", criterion_visibility},
        {"Babinet identity to 1e-10 over 10 random wire placements", criterion_babinet},
        {"scan-curve shape: period l, dark << bright, maximum on a bright fringe",
         criterion_scan_shape},
        {"waist calibration reaches 8% blocked loss; bright-fringe loss exceeds it",
         criterion_calibration},
        {"dark-fringe comb: below single-wire loss, monotone in misalignment",
         criterion_comb},
        {"clamped-wire map unitary, self-inverse, exact equal split (both conventions)",
         criterion_quantum_maps},
        {"scattering statistics at N=1e6 within 4 sigma; pure transport lossless",
         criterion_statistics},
        {"duality inequality holds for all 1000 emitted (K, V) pairs over 500 configs",
         criterion_duality_sweep},
        {"uncertainty identity dy/l = 1 exactly over 1000 random pairs",
         criterion_uncertainty},
        {"determinism: byte-identical reruns, shard-independent ensembles",
         criterion_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker check;
        const double elapsed = run_seconds([&] { criteria[i].fn(check); });
        const bool ok = check.ok();
        if (!ok) ++failures;
        std::printf("[%s] criterion %02zu: %s (%.2f s)\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), elapsed);
        if (!ok) std::fputs(check.detail().c_str(), stdout);
    }

    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
