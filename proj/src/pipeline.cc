#include "c2a2/pipeline.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "c2a2/csv.h"
#include "c2a2/error.h"
#include "c2a2/losses.h"

namespace c2a2 {
namespace {

std::string LinePrefix(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

void ExpectHeader(const CsvTable& table,
                  const std::vector<std::string>& expected,
                  std::string_view file) {
  if (table.header != expected) {
    std::string want;
    for (const std::string& h : expected) want += (want.empty() ? "" : ",") + h;
    throw Error(ErrorCode::kParseError, std::string(file) +
                                            " line 1: expected header '" +
                                            want + "'");
  }
}

void ExpectWidth(const CsvRow& row, std::size_t width) {
  if (row.fields.size() != width) {
    throw Error(ErrorCode::kParseError,
                LinePrefix(row.line) + "expected " + std::to_string(width) +
                    " fields, got " + std::to_string(row.fields.size()));
  }
}

std::string ImageId(const CsvRow& row,
                    std::unordered_set<std::string>& seen) {
  std::string id = row.fields[0];
  if (id.empty()) {
    throw Error(ErrorCode::kParseError, LinePrefix(row.line) + "empty image_id");
  }
  if (!seen.insert(id).second) {
    throw Error(ErrorCode::kDuplicateId,
                LinePrefix(row.line) + "duplicate image_id '" + id + "'");
  }
  return id;
}

double InRange(double x, double lo, double hi, const CsvRow& row,
               std::string_view column) {
  if (!std::isfinite(x) || x < lo || x > hi) {
    throw Error(ErrorCode::kRangeError,
                LinePrefix(row.line) + std::string(column) + " = " +
                    FormatDouble(x) + " outside [" + FormatDouble(lo) + ", " +
                    FormatDouble(hi) + "]");
  }
  return x;
}

bool IsContempt(std::string_view s) {
  std::string lower;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return lower == "contempt";
}

std::vector<std::string> NumberedColumns(std::string_view prefix,
                                         std::size_t first, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(std::string(prefix) + std::to_string(first + i));
  }
  return out;
}

void AppendRow(std::string& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const std::string& f : fields) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
}

}  // namespace

AvLabels ParseAvCsv(std::string_view text) {
  const CsvTable table = ParseCsv(text);
  const std::vector<std::string> base = {"image_id", "valence", "arousal"};
  std::vector<std::string> with_category = base;
  with_category.push_back("category");
  const bool has_category = table.header == with_category;
  if (!has_category) ExpectHeader(table, base, "av_labels.csv");

  AvLabels out;
  std::unordered_set<std::string> seen;
  for (const CsvRow& row : table.rows) {
    ExpectWidth(row, table.header.size());
    std::optional<Category> category;
    if (has_category && !row.fields[3].empty()) {
      if (IsContempt(row.fields[3])) {
        ++out.dropped_contempt;
        continue;
      }
      category = ParseCategory(row.fields[3]);
      if (!category) {
        throw Error(ErrorCode::kParseError, LinePrefix(row.line) +
                                                "unknown category '" +
                                                row.fields[3] + "'");
      }
    }
    AvLabelRecord rec;
    rec.image_id = ImageId(row, seen);
    rec.av.valence = InRange(ParseDouble(row.fields[1], row.line, "valence"),
                             -1.0, 1.0, row, "valence");
    rec.av.arousal = InRange(ParseDouble(row.fields[2], row.line, "arousal"),
                             -1.0, 1.0, row, "arousal");
    rec.category = category;
    out.records.push_back(std::move(rec));
  }
  return out;
}

AvLabels LoadAvCsv(const std::filesystem::path& path) {
  return ParseAvCsv(ReadTextFile(path));
}

std::vector<AuProbRecord> ParseAuCsv(std::string_view text) {
  const CsvTable table = ParseCsv(text);
  std::vector<std::string> header = {"image_id"};
  for (std::string& c : NumberedColumns("au", 1, kNumCatalogueAUs)) {
    header.push_back(std::move(c));
  }
  ExpectHeader(table, header, "au_probs.csv");
  std::vector<AuProbRecord> out;
  std::unordered_set<std::string> seen;
  for (const CsvRow& row : table.rows) {
    ExpectWidth(row, header.size());
    AuProbRecord rec;
    rec.image_id = ImageId(row, seen);
    for (std::size_t i = 0; i < kNumCatalogueAUs; ++i) {
      rec.probs[i] = InRange(ParseDouble(row.fields[i + 1], row.line, header[i + 1]),
                             0.0, 1.0, row, header[i + 1]);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AuProbRecord> LoadAuCsv(const std::filesystem::path& path) {
  return ParseAuCsv(ReadTextFile(path));
}

std::vector<ZHatRecord> ParseZhatCsv(std::string_view text) {
  const CsvTable table = ParseCsv(text);
  ExpectHeader(table, {"image_id", "zhat"}, "zhat.csv");
  std::vector<ZHatRecord> out;
  std::unordered_set<std::string> seen;
  for (const CsvRow& row : table.rows) {
    ExpectWidth(row, 2);
    ZHatRecord rec;
    rec.image_id = ImageId(row, seen);
    rec.zhat = ParseDouble(row.fields[1], row.line, "zhat");
    if (!std::isfinite(rec.zhat)) {
      throw Error(ErrorCode::kRangeError, LinePrefix(row.line) + "zhat is not finite");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ZHatRecord> LoadZhatCsv(const std::filesystem::path& path) {
  return ParseZhatCsv(ReadTextFile(path));
}

FeatureTable ParseFeaturesCsv(std::string_view text) {
  const CsvTable table = ParseCsv(text);
  if (table.header.size() < 2) {
    throw Error(ErrorCode::kParseError,
                "features.csv line 1: need image_id and at least one feature");
  }
  const std::size_t d = table.header.size() - 1;
  std::vector<std::string> header = {"image_id"};
  for (std::string& c : NumberedColumns("f", 0, d)) header.push_back(std::move(c));
  ExpectHeader(table, header, "features.csv");
  FeatureTable out;
  out.features.resize(static_cast<Eigen::Index>(table.rows.size()),
                      static_cast<Eigen::Index>(d));
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const CsvRow& row = table.rows[r];
    ExpectWidth(row, header.size());
    out.ids.push_back(ImageId(row, seen));
    for (std::size_t j = 0; j < d; ++j) {
      const double x = ParseDouble(row.fields[j + 1], row.line, header[j + 1]);
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kRangeError,
                    LinePrefix(row.line) + header[j + 1] + " is not finite");
      }
      out.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = x;
    }
  }
  return out;
}

FeatureTable LoadFeaturesCsv(const std::filesystem::path& path) {
  return ParseFeaturesCsv(ReadTextFile(path));
}

std::vector<CalibrationSample> CalibrationSamples(const AvLabels& labels) {
  std::vector<CalibrationSample> out;
  for (const AvLabelRecord& rec : labels.records) {
    if (!rec.category) continue;
    if (const auto* b = std::get_if<BasicEmotion>(&*rec.category)) {
      out.push_back({*b, rec.av});
    }
  }
  return out;
}

JoinResult JoinLabels(std::span<const AvLabelRecord> av,
                      std::span<const AuProbRecord> au,
                      std::optional<std::span<const ZHatRecord>> zhat) {
  std::unordered_map<std::string, const AuProbRecord*> au_by_id;
  for (const AuProbRecord& r : au) au_by_id.emplace(r.image_id, &r);
  std::unordered_map<std::string, double> z_by_id;
  if (zhat) {
    for (const ZHatRecord& r : *zhat) z_by_id.emplace(r.image_id, r.zhat);
  }

  JoinResult out;
  std::unordered_set<std::string> av_ids;
  std::unordered_set<std::string> unmatched;
  auto note_unmatched = [&](const std::string& id) {
    if (unmatched.insert(id).second) out.unmatched.push_back(id);
  };
  for (const AvLabelRecord& r : av) {
    av_ids.insert(r.image_id);
    const auto a = au_by_id.find(r.image_id);
    const auto z = z_by_id.find(r.image_id);
    if (a == au_by_id.end() || (zhat && z == z_by_id.end())) {
      note_unmatched(r.image_id);
      continue;
    }
    JoinedRow row{r.image_id, r.av, a->second->probs, std::nullopt};
    if (zhat) row.zhat = z->second;
    out.rows.push_back(std::move(row));
  }
  std::unordered_set<std::string> joined_ids;
  for (const JoinedRow& r : out.rows) joined_ids.insert(r.image_id);
  for (const AuProbRecord& r : au) {
    if (!joined_ids.contains(r.image_id)) note_unmatched(r.image_id);
  }
  if (zhat) {
    for (const ZHatRecord& r : *zhat) {
      if (!joined_ids.contains(r.image_id)) note_unmatched(r.image_id);
    }
  }
  if (out.rows.empty()) {
    throw Error(ErrorCode::kEmptyJoin, "no image_id common to all inputs");
  }
  return out;
}

std::vector<LabeledCondition> Pseudolabel(std::span<const JoinedRow> rows,
                                          const AxisFrame& frame) {
  std::vector<LabeledCondition> out;
  out.reserve(rows.size());
  for (const JoinedRow& row : rows) {
    const C2A2Point y = ComposeZLabel(row.av, row.zhat.value_or(0.0));
    const Category region = C2A2RegionLabel(y, frame);
    out.push_back({row.image_id, y, region,
                   MakeAuTarget(region, std::min(1.0, y.norm()))});
  }
  return out;
}

std::string LabelsToCsv(std::span<const LabeledCondition> labels) {
  std::string out = "image_id,a,v,z,region";
  for (const std::string& c : NumberedColumns("t", 1, kNumRelevantAUs)) {
    out += "," + c;
  }
  out += '\n';
  for (const LabeledCondition& l : labels) {
    AppendRow(out, {l.image_id, FormatDouble(l.y.a), FormatDouble(l.y.v),
                    FormatDouble(l.y.z), std::string(Name(l.region))});
    for (double t : l.au_target) out += "," + FormatDouble(t);
    out += '\n';
  }
  return out;
}

std::string CircleGridCsv(std::span<const double> z_levels,
                          std::size_t n_theta, double radius) {
  std::string out = "idx,theta,a,v,z\n";
  std::size_t idx = 0;
  for (double z : z_levels) {
    for (const ScanPoint& p : CircleScan(z, n_theta, radius)) {
      AppendRow(out, {std::to_string(idx++), FormatDouble(p.theta),
                      FormatDouble(p.y.a), FormatDouble(p.y.v),
                      FormatDouble(p.y.z)});
      out += '\n';
    }
  }
  return out;
}

std::string RayGridCsv(const AxisFrame& frame, std::size_t n_steps) {
  std::string out = "idx,theta,a,v,z\n";
  std::size_t idx = 0;
  for (const RayPoint& p : AxisRays(frame, n_steps)) {
    AppendRow(out, {std::to_string(idx++), FormatDouble(frame.azimuth(p.emotion)),
                    FormatDouble(p.y.a), FormatDouble(p.y.v),
                    FormatDouble(p.y.z)});
    out += '\n';
  }
  return out;
}

std::vector<PredictionRecord> ParsePredictionsCsv(std::string_view text) {
  const CsvTable table = ParseCsv(text);
  const bool has_z = table.header.size() > 3 && table.header[3] == "z";
  std::vector<std::string> header = {"image_id", "a", "v"};
  if (has_z) header.push_back("z");
  for (std::string& c : NumberedColumns("p", 1, kNumRelevantAUs)) {
    header.push_back(std::move(c));
  }
  ExpectHeader(table, header, "predictions.csv");
  const std::size_t n_coords = has_z ? 3 : 2;
  std::vector<PredictionRecord> out;
  std::unordered_set<std::string> seen;
  for (const CsvRow& row : table.rows) {
    ExpectWidth(row, header.size());
    PredictionRecord rec;
    rec.image_id = ImageId(row, seen);
    for (std::size_t i = 0; i < n_coords; ++i) {
      rec.coords.push_back(ParseDouble(row.fields[1 + i], row.line, header[1 + i]));
    }
    for (std::size_t i = 0; i < kNumRelevantAUs; ++i) {
      const std::size_t col = 1 + n_coords + i;
      rec.au[i] = ParseDouble(row.fields[col], row.line, header[col]);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<LabeledCondition> ParseLabelsCsv(std::string_view text) {
  const CsvTable table = ParseCsv(text);
  std::vector<std::string> header = {"image_id", "a", "v", "z", "region"};
  for (std::string& c : NumberedColumns("t", 1, kNumRelevantAUs)) {
    header.push_back(std::move(c));
  }
  ExpectHeader(table, header, "labels_out.csv");
  std::vector<LabeledCondition> out;
  std::unordered_set<std::string> seen;
  for (const CsvRow& row : table.rows) {
    ExpectWidth(row, header.size());
    LabeledCondition l;
    l.image_id = ImageId(row, seen);
    l.y = {ParseDouble(row.fields[1], row.line, "a"),
           ParseDouble(row.fields[2], row.line, "v"),
           ParseDouble(row.fields[3], row.line, "z")};
    const auto region = ParseCategory(row.fields[4]);
    if (!region) {
      throw Error(ErrorCode::kParseError,
                  LinePrefix(row.line) + "unknown region '" + row.fields[4] + "'");
    }
    l.region = *region;
    for (std::size_t i = 0; i < kNumRelevantAUs; ++i) {
      l.au_target[i] = ParseDouble(row.fields[5 + i], row.line, header[5 + i]);
    }
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace c2a2
