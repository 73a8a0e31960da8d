#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbgeo/errors.hpp"
#include "rbgeo/clustering.hpp"
#include "rbgeo/evaluation.hpp"
#include "rbgeo/point_set.hpp"
#include "rbgeo/quantization.hpp"
#include "rbgeo/voronoi.hpp"

namespace rbgeo::io {

using nlohmann::json;

// Thrown for malformed input files; carries a message naming the row/field.
class FormatError : public Error {
 public:
  using Error::Error;
};

// CSV with a header row. A column named "label" holds integer groundtruth; all
// other columns are coordinates. Numbers use '.' as decimal point regardless
// of locale.
PointSet read_points_csv(std::istream& in);
PointSet read_points_csv_file(const std::string& path);

// Columns x1..xK[,label].
void write_points_csv(std::ostream& out, const PointSet& points);

// Columns x1..xK,assignment[,label].
void write_assignments_csv(std::ostream& out, const PointSet& points,
                           const ClusteringResult& result);

SyntheticSpec parse_spec(const json& j);
SyntheticSpec read_spec_file(const std::string& path);
json to_json(const SyntheticSpec& spec);

json to_json(const PointSet& points);
json to_json(const ClusteringResult& result);
json to_json(const GaussianMixtureModel& model);
json to_json(const QuantizerReport& report);
json to_json(const EvaluationReport& report);

// Binary PGM (P5): one byte per pixel holding the site index. Requires fewer
// than 257 sites.
void write_pgm(std::ostream& out, const VoronoiRaster& raster);

// 16-colour palette cycled by index.
const std::string& palette_color(std::size_t index);

// Raster as horizontal runs of <rect>, one colour per site.
void write_raster_svg(std::ostream& out, const VoronoiRaster& raster,
                      const PointSet* sites = nullptr);

// Exact cells drawn in original coordinates from their pulled-back edges.
void write_cells_svg(std::ostream& out, const std::vector<ExactCell>& cells,
                     const SiteSet& sites, const BoundingBox& bbox, std::size_t size_px = 512);

// Scatter plot of 2-D points coloured by assignment with centers marked.
void write_scatter_svg(std::ostream& out, const PointSet& points,
                       std::span<const std::size_t> assignments, const PointSet& centers,
                       const std::string& title, std::size_t size_px = 480);

// One row per report: method,generator,seed,accuracy,ari,nmi,size_1..size_k,
// center_1_x1..center_k_xK.
void write_reports_csv(std::ostream& out, const std::vector<EvaluationReport>& reports);

// Tables laid out like the experiment tables: per method, one row per
// generator with matched cluster sizes and mean accuracy over seeds, then the
// matched centers. `data` supplies the "original" row.
void write_summary(std::ostream& out, const std::vector<EvaluationReport>& reports,
                   const PointSet& data);

// Caption-style name of a generator's embedding ("h(x) = ln(x)", ...).
std::string embedding_label(const std::string& generator);

}  // namespace rbgeo::io
