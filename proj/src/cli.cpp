#include "roughchange/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "roughchange/baselines.hpp"
#include "roughchange/errors.hpp"
#include "roughchange/eval.hpp"
#include "roughchange/image.hpp"
#include "roughchange/pipeline.hpp"
#include "roughchange/report.hpp"

namespace roughchange::cli {

namespace fs = std::filesystem;

const std::vector<ThresholdPreset>& threshold_presets() {
    static const std::vector<ThresholdPreset> presets = {
        {"satellite", 0.5, "multitemporal satellite scenes (desert to farmland)"},
        {"medical", 0.55, "cell image patch detection"},
        {"surveillance", 0.52, "video frames against a reference frame"},
        {"satellite-recent", 0.3, "satellite pair with faint recent change"},
        {"band4", 0.5, "single-band remote sensing (e.g. Landsat band 4)"},
    };
    return presets;
}

std::optional<double> preset_threshold(std::string_view name) {
    for (const auto& p : threshold_presets()) {
        if (p.name == name) return p.threshold;
    }
    return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string presets_help() {
    std::ostringstream os;
    os << "Threshold presets (--preset):\n";
    for (const auto& p : threshold_presets()) {
        os << "  " << p.name << std::string(18 - std::min<std::size_t>(17, p.name.size()), ' ') << "T=" << p.threshold
           << "  " << p.description << "\n";
    }
    os << "An explicit -t/--threshold on the command line overrides --preset.\n"
          "Config files hold key=value lines named after long options (e.g. bins=48);\n"
          "command-line flags override them. ROUGHCHANGE_CONFIG names a default config file.";
    return os.str();
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::size_t parse_count(const std::string& s, const char* what) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw InvalidArgument(std::string(what) + ": '" + s + "' is not a non-negative integer");
    }
    try {
        return std::stoul(s);
    } catch (const std::exception&) {
        throw InvalidArgument(std::string(what) + ": '" + s + "' is out of range");
    }
}

std::pair<std::size_t, std::size_t> parse_size(const std::string& text) {
    const auto parts = split(text, 'x');
    if (parts.size() != 2) throw InvalidArgument("--size expects WIDTHxHEIGHT, got '" + text + "'");
    return {parse_count(parts[0], "--size"), parse_count(parts[1], "--size")};
}

Rect parse_rect(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) throw InvalidArgument("--patch expects X,Y,W,H, got '" + text + "'");
    return {parse_count(parts[0], "--patch"), parse_count(parts[1], "--patch"), parse_count(parts[2], "--patch"),
            parse_count(parts[3], "--patch")};
}

Rgb parse_rgb(const std::string& text, const char* what) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw InvalidArgument(std::string(what) + " expects R,G,B, got '" + text + "'");
    std::array<std::uint8_t, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t v = parse_count(parts[i], what);
        if (v > 255) throw InvalidArgument(std::string(what) + ": channel value " + parts[i] + " exceeds 255");
        c[i] = static_cast<std::uint8_t>(v);
    }
    return {c[0], c[1], c[2]};
}

void emit_json(const nlohmann::json& doc, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << doc.dump(2) << '\n';
    } else {
        write_json(doc, path);
    }
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

// Options shared by detect and batch.
struct DetectOptions {
    double threshold = 0.5;
    std::string preset;
    std::uint32_t bins = 32;
    std::string candidate_rule = "otsu";
    CLI::Option* threshold_opt = nullptr;

    void attach(CLI::App& app) {
        threshold_opt = app.add_option("-t,--threshold", threshold, "Rough-membership threshold T in [0,1]")
                            ->check(CLI::Range(0.0, 1.0))
                            ->capture_default_str();
        app.add_option("--preset", preset, "Named threshold preset (see below)")
            ->check(CLI::IsMember([] {
                std::vector<std::string> names;
                for (const auto& p : threshold_presets()) names.emplace_back(p.name);
                return names;
            }()));
        app.add_option("--bins", bins, "Quantization bins per image for the indiscernibility classes")
            ->check(CLI::Range(1U, kScalarLevels))
            ->capture_default_str();
        app.add_option("--candidate-rule", candidate_rule, "Cutoff rule for the candidate changed set: otsu|mean|fixed:<t0>")
            ->capture_default_str();
    }

    DetectionParams resolve() const {
        DetectionParams params;
        params.threshold = threshold;
        if (!preset.empty() && threshold_opt->count() == 0) params.threshold = *preset_threshold(preset);
        params.bins = bins;
        params.candidate_rule = CandidateRule::parse(candidate_rule);
        params.validate();
        return params;
    }
};

struct ClusterFlags {
    double fuzzifier = 2.0;
    std::size_t max_iter = 100;
    double tol = 1e-4;
    std::string cutoff;
};

nlohmann::json detection_document(const DetectionReport& report, const std::string& preset) {
    nlohmann::json doc = to_json(report);
    if (!preset.empty()) doc["preset"] = preset;
    return doc;
}

void warn(const DetectionReport& report, std::ostream& err) {
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
}

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {
        app_.description("Rough-set change detection between co-registered images");
        app_.require_subcommand(1);
        app_.set_help_all_flag("--help-all", "Expand help for all subcommands");

        detect_ = app_.add_subcommand("detect", "Detect changed pixels with rough-set clustering");
        detect_->add_option("before", before_, "Reference image (PNG/PGM/PPM)")->required();
        detect_->add_option("after", after_, "Image to compare against the reference")->required();
        detect_opts_.attach(*detect_);
        detect_->add_option("-o,--output", output_, "Mask path (.png, or .pgm)")->capture_default_str();
        detect_->add_option("--report", report_, "Report JSON path (stdout when omitted)");
        detect_->add_option("--truth", truth_, "Ground-truth mask; adds an \"eval\" section to the report");
        add_config_flag(*detect_);
        detect_->footer(presets_help());

        baseline_ = app_.add_subcommand("baseline", "Run a comparison detector: hcm, fcm or diff");
        baseline_->add_option("args", baseline_args_, "[METHOD] BEFORE AFTER")->required()->expected(2, 3);
        baseline_->add_option("--method", method_, "hcm | fcm | diff (alternative to the positional METHOD)");
        baseline_->add_option("-o,--output", output_, "Mask path")->capture_default_str();
        baseline_->add_option("--report", report_, "Report JSON path (stdout when omitted)");
        baseline_->add_option("--truth", truth_, "Ground-truth mask; adds an \"eval\" section to the report");
        baseline_->add_option("--fuzzifier", cluster_.fuzzifier, "FCM fuzzifier m > 1")->capture_default_str();
        baseline_->add_option("--max-iter", cluster_.max_iter, "HCM/FCM iteration cap")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        baseline_->add_option("--tol", cluster_.tol, "HCM/FCM center-movement tolerance")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        baseline_->add_option("--cutoff", cluster_.cutoff,
                              "diff: fixed cutoff in [0,1530]; when omitted it is resolved by --candidate-rule");
        baseline_->add_option("--candidate-rule", baseline_rule_, "diff: cutoff rule when --cutoff is omitted")
            ->capture_default_str();
        add_config_flag(*baseline_);
        baseline_->footer(
            "The diff method is plain differencing with a fixed cutoff, an approximation of the IOM\n"
            "detector; its report carries \"iom_approximation\": true.");

        batch_ = app_.add_subcommand("batch", "Detect changes of every frame in a directory against one reference");
        batch_->add_option("reference", before_, "Reference frame")->required();
        batch_->add_option("frames", frames_dir_, "Directory of frames (.png/.pgm/.ppm/.pnm)")->required();
        batch_->add_option("-o,--output", batch_out_, "Output directory for masks, reports and summary.json")
            ->required();
        batch_opts_.attach(*batch_);
        add_config_flag(*batch_);
        batch_->footer(presets_help());

        synth_ = app_.add_subcommand("synth", "Write a synthetic before/after pair and its truth mask");
        synth_->add_option("--size", size_, "WIDTHxHEIGHT")->capture_default_str();
        synth_->add_option("--patch", patch_, "Changed rectangle X,Y,W,H")->capture_default_str();
        synth_->add_option("--background", background_, "Background colour R,G,B")->capture_default_str();
        synth_->add_option("--patch-color", patch_color_, "Patch colour R,G,B")->capture_default_str();
        synth_->add_option("--noise", noise_, "Uniform noise amplitude per channel")
            ->check(CLI::Range(0U, 255U))
            ->capture_default_str();
        synth_->add_option("--seed", seed_, "Noise seed")->capture_default_str();
        synth_->add_option("--format", synth_format_, "png | pnm")
            ->check(CLI::IsMember({"png", "pnm"}))
            ->capture_default_str();
        synth_->add_option("-o,--output", synth_out_, "Output directory")->capture_default_str();
        add_config_flag(*synth_);

        eval_ = app_.add_subcommand("eval", "Compare a predicted mask with ground truth");
        eval_->add_option("predicted", before_, "Predicted mask")->required();
        eval_->add_option("truth", after_, "Ground-truth mask")->required();
        eval_->add_option("--report", report_, "Metrics JSON path (stdout when omitted)");
        add_config_flag(*eval_);
    }

    int run(const std::vector<std::string>& args) {
        try {
            apply_config(args);
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app_.parse(reversed);
        } catch (const CLI::ParseError& e) {
            const int code = app_.exit(e, out_, err_);
            return code == 0 ? kOk : kInvalidArguments;
        } catch (const InvalidArgument& e) {
            err_ << "error: " << e.what() << '\n';
            return kInvalidArguments;
        } catch (const IoError& e) {
            err_ << "error: " << e.what() << '\n';
            return kIoFailure;
        }

        try {
            if (detect_->parsed()) return cmd_detect();
            if (baseline_->parsed()) return cmd_baseline();
            if (batch_->parsed()) return cmd_batch();
            if (synth_->parsed()) return cmd_synth();
            if (eval_->parsed()) return cmd_eval();
        } catch (const DimensionMismatch& e) {
            err_ << "error: " << e.what() << '\n';
            return kDimensionMismatch;
        } catch (const InvalidArgument& e) {
            err_ << "error: " << e.what() << '\n';
            return kInvalidArguments;
        } catch (const IoError& e) {
            err_ << "error: " << e.what() << '\n';
            return kIoFailure;
        } catch (const FormatError& e) {
            err_ << "error: " << e.what() << '\n';
            return kIoFailure;
        } catch (const fs::filesystem_error& e) {
            err_ << "error: " << e.what() << '\n';
            return kIoFailure;
        }
        return kInvalidArguments;
    }

private:
    void add_config_flag(CLI::App& sub) {
        sub.add_option("--config", config_path_, "key=value configuration file (flags override it)");
    }

    // Config values become option defaults before parsing, so explicit flags win.
    void apply_config(const std::vector<std::string>& args) {
        std::string path;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
        }
        if (path.empty()) {
            if (const char* env = std::getenv("ROUGHCHANGE_CONFIG"); env != nullptr && *env != '\0') path = env;
        }
        if (path.empty()) return;

        std::ifstream in(path);
        if (!in) throw IoError("cannot read config file " + path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        const auto entries = parse_config(buffer.str());

        CLI::App* target = nullptr;
        for (const auto& a : args) {
            for (CLI::App* sub : {detect_, baseline_, batch_, synth_, eval_}) {
                if (a == sub->get_name()) target = sub;
            }
            if (target != nullptr) break;
        }
        for (const auto& [key, value] : entries) {
            if (key == "config") throw InvalidArgument("config files cannot include other config files");
            bool known = false;
            for (CLI::App* sub : {detect_, baseline_, batch_, synth_, eval_}) {
                CLI::Option* opt = sub->get_option_no_throw("--" + key);
                if (opt == nullptr) continue;
                known = true;
                if (sub == target) opt->default_val(value);
            }
            if (!known) throw InvalidArgument("unknown config key '" + key + "'");
        }
    }

    nlohmann::json maybe_eval(const ChangeMask& mask) const {
        if (truth_.empty()) return nullptr;
        return to_json(compare_masks(mask, load_mask(truth_)));
    }

    int cmd_detect() {
        const DetectionParams params = detect_opts_.resolve();
        const RasterImage before = load_image(before_);
        const RasterImage after = load_image(after_);
        const DetectionResult result = detect_changes(before, after, params);
        warn(result.report, err_);
        nlohmann::json doc = detection_document(result.report, detect_opts_.preset);
        if (auto metrics = maybe_eval(result.mask); !metrics.is_null()) doc["eval"] = metrics;
        save_mask(result.mask, output_);
        emit_json(doc, report_, out_);
        return kOk;
    }

    int cmd_baseline() {
        std::vector<std::string> positional = baseline_args_;
        if (positional.size() == 3) {
            if (!method_.empty()) throw InvalidArgument("method given both positionally and with --method");
            method_ = positional.front();
            positional.erase(positional.begin());
        }
        if (method_.empty()) throw InvalidArgument("baseline needs a method: hcm, fcm or diff");
        if (method_ != "hcm" && method_ != "fcm" && method_ != "diff") {
            throw InvalidArgument("unknown baseline method '" + method_ + "' (expected hcm, fcm or diff)");
        }
        ClusterOptions options;
        options.fuzzifier = cluster_.fuzzifier;
        options.max_iter = cluster_.max_iter;
        options.tol = cluster_.tol;
        options.validate(method_ == "fcm");
        std::optional<CandidateRule> rule;
        if (method_ == "diff") {
            rule = cluster_.cutoff.empty() ? CandidateRule::parse(baseline_rule_)
                                           : CandidateRule::parse("fixed:" + cluster_.cutoff);
        }

        const RasterImage before = load_image(positional[0]);
        const RasterImage after = load_image(positional[1]);
        if (before.width() != after.width() || before.height() != after.height()) {
            throw DimensionMismatch("images differ in size");
        }
        const ScalarField diff = abs_difference(transform_to_scalar(before), transform_to_scalar(after));

        std::optional<ChangeMask> mask;
        nlohmann::json doc;
        if (method_ == "diff") {
            const CandidateSet candidates = candidate_change_set(diff, *rule);
            mask = threshold_diff_detect(diff, candidates.t0);
            doc = {{"method", "diff"},
                   {"iom_approximation", true},
                   {"cutoff", candidates.t0},
                   {"cutoff_rule", rule->to_string()},
                   {"changed_count", mask->changed_count()}};
        } else {
            const ClusterModel model = method_ == "hcm" ? hcm_cluster(diff, options) : fcm_cluster(diff, options);
            mask = model.to_mask(diff.width(), diff.height());
            doc = cluster_report(method_, model, mask->changed_count());
            doc["max_iter"] = options.max_iter;
            doc["tol"] = options.tol;
            if (method_ == "fcm") doc["fuzzifier"] = options.fuzzifier;
        }
        if (auto metrics = maybe_eval(*mask); !metrics.is_null()) doc["eval"] = metrics;
        save_mask(*mask, output_);
        emit_json(doc, report_, out_);
        return kOk;
    }

    int cmd_batch() {
        const DetectionParams params = batch_opts_.resolve();
        const fs::path frames_dir(frames_dir_);
        const fs::path out_dir(batch_out_);
        if (!fs::is_directory(frames_dir)) throw IoError("frame directory " + frames_dir_ + " does not exist");
        fs::create_directories(out_dir);
        if (fs::equivalent(frames_dir, out_dir)) {
            throw InvalidArgument("batch output directory must differ from the frame directory");
        }
        const RasterImage reference = load_image(before_);

        std::vector<fs::path> frames;
        for (const auto& entry : fs::directory_iterator(frames_dir)) {
            if (entry.is_regular_file() && is_image_file(entry.path())) frames.push_back(entry.path());
        }
        std::sort(frames.begin(), frames.end(),
                  [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
        if (frames.empty()) {
            err_ << "error: no frames found in " << frames_dir_ << '\n';
            return kIoFailure;
        }

        nlohmann::json rows = nlohmann::json::array();
        std::size_t succeeded = 0;
        for (const fs::path& frame : frames) {
            const std::string stem = frame.stem().string();
            nlohmann::json row = {{"frame", frame.filename().string()}};
            try {
                const DetectionResult result = detect_changes(reference, load_image(frame), params);
                warn(result.report, err_);
                save_mask(result.mask, out_dir / (stem + ".mask.png"));
                write_json(detection_document(result.report, batch_opts_.preset), out_dir / (stem + ".report.json"));
                row["status"] = "ok";
                row["changed_count"] = result.report.changed_count;
                row["mask"] = stem + ".mask.png";
                row["report"] = stem + ".report.json";
                ++succeeded;
            } catch (const std::exception& e) {
                err_ << "warning: frame " << frame.filename().string() << " failed: " << e.what() << '\n';
                row["status"] = "failed";
                row["error"] = e.what();
            }
            rows.push_back(std::move(row));
        }

        nlohmann::json summary = {
            {"reference", fs::path(before_).filename().string()},
            {"threshold_T", params.threshold},
            {"bins_B", params.bins},
            {"candidate_rule", params.candidate_rule.to_string()},
            {"frames", rows},
            {"succeeded", succeeded},
            {"failed", frames.size() - succeeded},
        };
        if (!batch_opts_.preset.empty()) summary["preset"] = batch_opts_.preset;
        write_json(summary, out_dir / "summary.json");
        return succeeded > 0 ? kOk : kIoFailure;
    }

    int cmd_synth() {
        SynthSpec spec;
        std::tie(spec.width, spec.height) = parse_size(size_);
        spec.patch = parse_rect(patch_);
        spec.background = parse_rgb(background_, "--background");
        spec.patch_color = parse_rgb(patch_color_, "--patch-color");
        spec.noise_amplitude = noise_;
        spec.seed = seed_;
        const SynthPair pair = synth_pair(spec);

        const fs::path dir(synth_out_);
        fs::create_directories(dir);
        const bool png = synth_format_ == "png";
        save_image(pair.before, dir / (png ? "before.png" : "before.ppm"));
        save_image(pair.after, dir / (png ? "after.png" : "after.ppm"));
        save_mask(pair.truth, dir / (png ? "truth.png" : "truth.pgm"));
        return kOk;
    }

    int cmd_eval() {
        const ChangeMask predicted = load_mask(before_);
        const ChangeMask truth = load_mask(after_);
        emit_json({{"eval", to_json(compare_masks(predicted, truth))}}, report_, out_);
        return kOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    CLI::App app_{"roughchange"};
    CLI::App* detect_ = nullptr;
    CLI::App* baseline_ = nullptr;
    CLI::App* batch_ = nullptr;
    CLI::App* synth_ = nullptr;
    CLI::App* eval_ = nullptr;

    std::string before_;
    std::string after_;
    std::string output_ = "mask.png";
    std::string report_;
    std::string truth_;
    std::string config_path_;
    DetectOptions detect_opts_;
    DetectOptions batch_opts_;

    std::vector<std::string> baseline_args_;
    std::string method_;
    std::string baseline_rule_ = "otsu";
    ClusterFlags cluster_;

    std::string frames_dir_;
    std::string batch_out_;

    std::string size_ = "64x64";
    std::string patch_ = "16,16,16,16";
    std::string background_ = "40,60,80";
    std::string patch_color_ = "200,180,160";
    std::uint32_t noise_ = 0;
    std::uint64_t seed_ = 0;
    std::string synth_format_ = "png";
    std::string synth_out_ = ".";
};

}  // namespace

std::map<std::string, std::string> parse_config(std::string_view text) {
    std::map<std::string, std::string> entries;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim(std::string_view(content).substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw InvalidArgument("config line " + std::to_string(line_no) + ": empty key");
        entries[key] = trim(std::string_view(content).substr(eq + 1));
    }
    return entries;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Cli cli(out, err);
    return cli.run(args);
}

}  // namespace roughchange::cli
