#ifndef C2A2_PIPELINE_H_
#define C2A2_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "c2a2/au_map.h"
#include "c2a2/emotion_space.h"

namespace c2a2 {

struct AvLabelRecord {
  std::string image_id;
  AVPoint av;
  std::optional<Category> category;
};

struct AvLabels {
  std::vector<AvLabelRecord> records;
  std::size_t dropped_contempt = 0;  // rows labelled "contempt" are skipped
};

// av_labels.csv: image_id,valence,arousal[,category]. Errors name the line
// (the header is line 1): kParseError, kRangeError, kDuplicateId.
AvLabels ParseAvCsv(std::string_view text);
AvLabels LoadAvCsv(const std::filesystem::path& path);

struct AuProbRecord {
  std::string image_id;
  AUActivation probs;
};

// au_probs.csv: image_id,au1..au41.
std::vector<AuProbRecord> ParseAuCsv(std::string_view text);
std::vector<AuProbRecord> LoadAuCsv(const std::filesystem::path& path);

struct ZHatRecord {
  std::string image_id;
  double zhat;
};

// zhat.csv: image_id,zhat.
std::vector<ZHatRecord> ParseZhatCsv(std::string_view text);
std::vector<ZHatRecord> LoadZhatCsv(const std::filesystem::path& path);

struct FeatureTable {
  std::vector<std::string> ids;
  Eigen::MatrixXd features;  // one row per id
};

// features.csv: image_id,f0..f{d-1}.
FeatureTable ParseFeaturesCsv(std::string_view text);
FeatureTable LoadFeaturesCsv(const std::filesystem::path& path);

// Calibration input: records whose category is a basic emotion.
std::vector<CalibrationSample> CalibrationSamples(const AvLabels& labels);

struct JoinedRow {
  std::string image_id;
  AVPoint av;
  AUActivation au;
  std::optional<double> zhat;
};

struct JoinResult {
  std::vector<JoinedRow> rows;          // in AV-file order
  std::vector<std::string> unmatched;   // ids missing from some input
};

// Inner join on image_id; without zhat records the rows carry no zhat (2D).
// Throws kEmptyJoin when nothing matches.
JoinResult JoinLabels(std::span<const AvLabelRecord> av,
                      std::span<const AuProbRecord> au,
                      std::optional<std::span<const ZHatRecord>> zhat);

struct LabeledCondition {
  std::string image_id;
  C2A2Point y;
  Category region;
  AUVector au_target;
};

std::vector<LabeledCondition> Pseudolabel(std::span<const JoinedRow> rows,
                                          const AxisFrame& frame);

// labels_out.csv: image_id,a,v,z,region,t1..t15.
std::string LabelsToCsv(std::span<const LabeledCondition> labels);

// conditions.csv: idx,theta,a,v,z. One block of n_theta rows per z level.
std::string CircleGridCsv(std::span<const double> z_levels,
                          std::size_t n_theta, double radius);

// conditions.csv rows along each basic axis; theta is the axis azimuth.
std::string RayGridCsv(const AxisFrame& frame, std::size_t n_steps);

// Rows of image_id,a,v[,z],p1..p15 paired with labels_out.csv rows by id.
struct PredictionRecord {
  std::string image_id;
  std::vector<double> coords;  // 2 or 3
  AUVector au;
};
std::vector<PredictionRecord> ParsePredictionsCsv(std::string_view text);

// Reads labels_out.csv back (for loss evaluation).
std::vector<LabeledCondition> ParseLabelsCsv(std::string_view text);

}  // namespace c2a2

#endif  // C2A2_PIPELINE_H_
