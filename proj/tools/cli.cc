#include "cli.h"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "c2a2/au_map.h"
#include "c2a2/csv.h"
#include "c2a2/emotion_space.h"
#include "c2a2/error.h"
#include "c2a2/losses.h"
#include "c2a2/metrics.h"
#include "c2a2/pipeline.h"

namespace c2a2 {
namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string frame_path;
  std::string mode = "3d";
  std::string out_path;
};

class Runner {
 public:
  Runner(const GlobalOptions& g, std::ostream& out, std::ostream& err)
      : g_(g), out_(out), err_(err) {}

  AxisFrame Frame() const {
    if (g_.frame_path.empty()) {
      err_ << "note: no --frame given; using the reference frame\n";
      return ReferenceFrame();
    }
    return FrameFromJson(ReadTextFile(g_.frame_path));
  }

  bool ThreeD() const { return g_.mode == "3d"; }

  void Emit(const std::string& text) const {
    if (g_.out_path.empty()) {
      out_ << text;
    } else {
      WriteTextFile(g_.out_path, text);
    }
  }

  void EmitMetric(const std::string& name, double value, json extra) const {
    json doc = {{"metric", name}, {"value", value}, {"seed", g_.seed}};
    for (auto& [k, v] : extra.items()) doc[k] = v;
    Emit(doc.dump() + "\n");
  }

  std::ostream& err() const { return err_; }
  std::uint64_t seed() const { return g_.seed; }

 private:
  const GlobalOptions& g_;
  std::ostream& out_;
  std::ostream& err_;
};

std::vector<double> ParseList(const std::string& text, std::string_view what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseDouble(item, 0, what));
  return out;
}

Category RequireCategory(const std::string& name) {
  const auto c = ParseCategory(name);
  if (!c) throw Error(ErrorCode::kInvalidArgument, "unknown category '" + name + "'");
  return *c;
}

json AuList(const Category& c) {
  json aus = json::array();
  for (int id : CategoryToAUs(c)) aus.push_back(id);
  return aus;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"C2A2 emotion-space toolkit", "c2a2"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--frame", g.frame_path, "Axis frame JSON");
  app.add_option("--mode", g.mode, "Emotion model")
      ->check(CLI::IsMember({"2d", "3d"}));
  app.add_option("--out", g.out_path, "Output file (default: stdout)");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Fit an axis frame from AV labels");
  std::string av_path;
  double neutral_rho = kDefaultNeutralRho;
  calibrate->add_option("--av", av_path, "av_labels.csv with a category column")
      ->required();
  calibrate->add_option("--neutral-rho", neutral_rho, "Neutral radius");

  // pseudolabel
  auto* pseudolabel =
      app.add_subcommand("pseudolabel", "Build C2A2 labels and AU targets");
  std::string au_path, zhat_path;
  pseudolabel->add_option("--av", av_path, "av_labels.csv")->required();
  pseudolabel->add_option("--au", au_path, "au_probs.csv")->required();
  pseudolabel->add_option("--zhat", zhat_path, "zhat.csv (3D labels)");

  // map
  auto* map = app.add_subcommand("map", "Category and point conversions");
  std::string category, point, polar;
  auto* map_cat = map->add_option("--category", category, "Category name");
  auto* map_point = map->add_option("--point", point, "a,v,z");
  auto* map_polar = map->add_option("--polar", polar, "theta_deg,rho");
  map_cat->excludes(map_point)->excludes(map_polar);
  map_point->excludes(map_polar);

  // sample
  auto* sample = app.add_subcommand("sample", "Sample condition vectors");
  std::size_t n = 100;
  double jitter_deg = kDefaultJitterDeg;
  std::string kind;
  sample->add_option("-n,--count", n, "Number of samples");
  sample->add_option("--jitter-deg", jitter_deg, "Cone half-angle (degrees)");
  sample->add_option("--kind", kind, "uniform2d | axis3d | ball3d")
      ->check(CLI::IsMember({"uniform2d", "axis3d", "ball3d"}));

  // grid
  auto* grid = app.add_subcommand("grid", "Emit a conditioning grid");
  std::string grid_kind = "circle";
  std::string z_levels = "0";
  std::size_t n_theta = 10;
  double radius = 0.6;
  std::size_t n_steps = 10;
  grid->add_option("--kind", grid_kind, "circle | rays")
      ->check(CLI::IsMember({"circle", "rays"}));
  grid->add_option("--z-levels", z_levels, "Comma-separated z levels");
  grid->add_option("--n-theta", n_theta, "Angles per circle");
  grid->add_option("--radius", radius, "In-plane radius");
  grid->add_option("--n-steps", n_steps, "Steps per ray");

  // losses eval
  auto* losses = app.add_subcommand("losses", "Supervision losses");
  losses->require_subcommand(1);
  auto* losses_eval = losses->add_subcommand("eval", "Mean losses over a batch");
  std::string pred_path, labels_path;
  double lambda_av = 1.0, lambda_au = 1.0;
  losses_eval->add_option("--pred", pred_path, "predictions.csv")->required();
  losses_eval->add_option("--labels", labels_path, "labels_out.csv")->required();
  losses_eval->add_option("--lambda-av", lambda_av, "AV loss weight");
  losses_eval->add_option("--lambda-au", lambda_au, "AU loss weight");

  // fed
  auto* fed = app.add_subcommand("fed", "Fréchet emotion distance");
  std::string real_path, gen_path;
  fed->add_option("--real", real_path, "features.csv of real images")->required();
  fed->add_option("--gen", gen_path, "features.csv of generated images")->required();

  // ere
  auto* ere = app.add_subcommand("ere", "Emotion reconstruction error (synthetic oracle)");
  double sharpness = 10.0;
  std::size_t budget = 500, runs = 10;
  std::vector<std::string> targets;
  ere->add_option("--sharpness", sharpness, "Synthetic oracle sharpness");
  ere->add_option("--budget", budget, "Samples per search");
  ere->add_option("--runs", runs, "Searches per target");
  ere->add_option("--targets", targets, "Target emotions (default: all six)");

  // smoothness
  auto* smooth = app.add_subcommand("smoothness", "Smoothness score (synthetic oracle)");
  smooth->add_option("--sharpness", sharpness, "Synthetic oracle sharpness");
  smooth->add_option("--n-steps", n_steps, "Intensity steps per ray");

  auto* au_table = app.add_subcommand("au-table", "Print the category/AU table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  Runner run(g, out, err);
  try {
    if (calibrate->parsed()) {
      const AvLabels labels = LoadAvCsv(av_path);
      if (labels.dropped_contempt > 0) {
        err << "warning: dropped " << labels.dropped_contempt
            << " contempt rows\n";
      }
      const auto samples = CalibrationSamples(labels);
      run.Emit(FrameToJson(CalibrateAxes(samples, neutral_rho)));
      err << "calibrated from " << samples.size() << " samples\n";
    } else if (pseudolabel->parsed()) {
      const AxisFrame frame = run.Frame();
      const AvLabels labels = LoadAvCsv(av_path);
      if (labels.dropped_contempt > 0) {
        err << "warning: dropped " << labels.dropped_contempt
            << " contempt rows\n";
      }
      const auto au_records = LoadAuCsv(au_path);
      std::optional<std::vector<ZHatRecord>> zhat;
      if (!zhat_path.empty()) {
        if (run.ThreeD()) {
          zhat = LoadZhatCsv(zhat_path);
        } else {
          err << "note: --mode 2d ignores --zhat\n";
        }
      }
      std::optional<std::span<const ZHatRecord>> zspan;
      if (zhat) zspan = std::span<const ZHatRecord>(*zhat);
      const JoinResult joined = JoinLabels(labels.records, au_records, zspan);
      if (!joined.unmatched.empty()) {
        err << "warning: " << joined.unmatched.size() << " unmatched ids:";
        for (const std::string& id : joined.unmatched) err << ' ' << id;
        err << '\n';
      }
      run.Emit(LabelsToCsv(Pseudolabel(joined.rows, frame)));
      err << "labelled " << joined.rows.size() << " rows\n";
    } else if (map->parsed()) {
      json doc;
      if (!category.empty()) {
        const Category c = RequireCategory(category);
        doc["category"] = std::string(Name(c));
        if (IsNeutral(c)) {
          doc["aus"] = json::array();
        } else {
          doc["aus"] = AuList(c);
        }
        const auto* compound = std::get_if<CompoundEmotion>(&c);
        doc["representable_2d"] =
            compound ? IsRepresentable(*compound, EmotionModel::kTwoD) : true;
        doc["representable_3d"] =
            compound ? IsRepresentable(*compound, EmotionModel::kThreeD) : true;
      } else if (!point.empty()) {
        const std::vector<double> p = ParseList(point, "point");
        if (p.size() != 2 && p.size() != 3) {
          throw Error(ErrorCode::kInvalidArgument, "--point needs a,v[,z]");
        }
        const C2A2Point y{p[0], p[1], p.size() == 3 ? p[2] : 0.0};
        y.Validate();
        const AxisFrame frame = run.Frame();
        const EmotionEstimate est = NearestEmotion(y, frame);
        doc["nearest"] = std::string(Name(est.category));
        doc["intensity"] = est.intensity;
        doc["region"] = std::string(Name(C2A2RegionLabel(y, frame)));
        doc["valence"] = y.a;
        doc["arousal"] = y.v;
      } else if (!polar.empty()) {
        const std::vector<double> p = ParseList(polar, "polar");
        if (p.size() != 2) {
          throw Error(ErrorCode::kInvalidArgument, "--polar needs theta_deg,rho");
        }
        PolarCondition pc{WrapAngle(p[0] * kDeg), p[1]};
        pc.Validate();
        const AVPoint av = PolarToAv(pc);
        doc["valence"] = av.valence;
        doc["arousal"] = av.arousal;
      } else {
        throw Error(ErrorCode::kInvalidArgument,
                    "map needs --category, --point or --polar");
      }
      run.Emit(doc.dump() + "\n");
    } else if (sample->parsed()) {
      SamplingMode mode = run.ThreeD() ? SamplingMode::kAxisProximity3D
                                       : SamplingMode::kUniform2D;
      if (kind == "uniform2d") mode = SamplingMode::kUniform2D;
      if (kind == "axis3d") mode = SamplingMode::kAxisProximity3D;
      if (kind == "ball3d") mode = SamplingMode::kUniformBall3D;
      const AxisFrame frame = run.Frame();
      std::string csv = "idx,a,v,z\n";
      std::size_t idx = 0;
      for (const C2A2Point& y :
           SampleConditions(mode, n, run.seed(), frame, jitter_deg)) {
        csv += std::to_string(idx++) + "," + FormatDouble(y.a) + "," +
               FormatDouble(y.v) + "," + FormatDouble(y.z) + "\n";
      }
      run.Emit(csv);
    } else if (grid->parsed()) {
      if (grid_kind == "circle") {
        const std::vector<double> levels = ParseList(z_levels, "z-levels");
        run.Emit(CircleGridCsv(levels, n_theta, radius));
      } else {
        run.Emit(RayGridCsv(run.Frame(), n_steps));
      }
    } else if (losses_eval->parsed()) {
      const auto preds = ParsePredictionsCsv(ReadTextFile(pred_path));
      const auto labels = ParseLabelsCsv(ReadTextFile(labels_path));
      std::unordered_map<std::string, const LabeledCondition*> by_id;
      for (const LabeledCondition& l : labels) by_id.emplace(l.image_id, &l);
      std::vector<BatchRow> rows;
      std::size_t missing = 0;
      for (const PredictionRecord& p : preds) {
        const auto it = by_id.find(p.image_id);
        if (it == by_id.end()) {
          ++missing;
          continue;
        }
        rows.push_back({p.coords, ProjectToAv(it->second->y), p.au,
                        it->second->au_target});
      }
      if (rows.empty()) {
        throw Error(ErrorCode::kEmptyJoin, "no prediction matches a label id");
      }
      if (missing > 0) err << "warning: " << missing << " predictions without labels\n";
      const BatchLoss loss = EvaluateBatch(rows, lambda_av, lambda_au);
      run.EmitMetric("losses", loss.total,
                     {{"av", loss.av}, {"au", loss.au}, {"n", loss.n},
                      {"lambda_av", lambda_av}, {"lambda_au", lambda_au}});
    } else if (fed->parsed()) {
      const FeatureTable real = LoadFeaturesCsv(real_path);
      const FeatureTable gen = LoadFeaturesCsv(gen_path);
      run.EmitMetric("fed", Fed(real.features, gen.features),
                     {{"n", real.ids.size()}, {"n_gen", gen.ids.size()}});
    } else if (ere->parsed()) {
      const AxisFrame frame = run.Frame();
      std::vector<BasicEmotion> wanted;
      for (const std::string& t : targets) {
        const Category c = RequireCategory(t);
        const auto* b = std::get_if<BasicEmotion>(&c);
        if (b == nullptr || *b == BasicEmotion::kNeutral) {
          throw Error(ErrorCode::kInvalidArgument,
                      "ERE targets must be basic emotions: " + t);
        }
        wanted.push_back(*b);
      }
      if (wanted.empty()) wanted.assign(kBasicEmotions.begin(), kBasicEmotions.end());
      const SyntheticOracle oracle(frame, sharpness);
      EreOptions opts;
      opts.budget = budget;
      opts.runs = runs;
      opts.seed = run.seed();
      opts.space = run.ThreeD() ? SearchSpace::kThreeD : SearchSpace::kTwoD;
      run.EmitMetric("ere", Ere(oracle, wanted, frame, opts),
                     {{"n", budget}, {"runs", runs}, {"sharpness", sharpness}});
    } else if (smooth->parsed()) {
      const AxisFrame frame = run.Frame();
      const SyntheticOracle oracle(frame, sharpness);
      const std::vector<Vec3> dirs = BasicDirections(frame);
      run.EmitMetric("smoothness", Smoothness(oracle, dirs, n_steps),
                     {{"n", n_steps}, {"sharpness", sharpness}});
    } else if (au_table->parsed()) {
      run.Emit(AuTableCsv());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kIoError ? 2 : 1;
  }
  return 0;
}

}  // namespace c2a2
