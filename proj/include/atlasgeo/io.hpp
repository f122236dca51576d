#pragma once

#include <string>
#include <vector>

#include "atlasgeo/graph.hpp"
#include "atlasgeo/search.hpp"
#include "atlasgeo/types.hpp"

namespace atlasgeo {

enum class DatasetFormat { csv, raw_f32, idx };

DatasetFormat dataset_format_from_string(const std::string& s);

/// Row-major point matrix plus provenance.
struct DatasetMatrix {
    size_t rows = 0;
    size_t dim = 0;
    std::vector<double> data;
    std::string provenance;

    AmbientPoint row(size_t i) const {
        return AmbientPoint(data.begin() + i * dim, data.begin() + (i + 1) * dim);
    }
    std::vector<AmbientPoint> to_points() const;
};

/// Loads a dataset:
///   csv      one point per line, comma-separated decimals
///   raw_f32  16-byte header (magic "AGMD", u32 LE rows, u32 LE dim,
///            4 reserved bytes) then rows*dim little-endian f32
///   idx      IDX u8 3-D tensor (magic 0x00000803, big-endian dims),
///            pixels scaled by 1/255, flattened to rows_px*cols_px
/// Malformed input raises format_error with a byte offset or line number.
DatasetMatrix load_dataset(const std::string& path, DatasetFormat format);

/// %.17g — lossless double round-trip through decimal text.
std::string format_double(double v);

/// Canonical graph JSON; identical graphs serialize to identical bytes.
std::string graph_to_json(const LatentGraph& graph);
void save_graph(const LatentGraph& graph, const std::string& path);
LatentGraph load_graph(const std::string& path);

std::string path_to_json(const GeodesicPath& path, const std::vector<PathSample>& samples);
void save_path(const GeodesicPath& path, const std::vector<PathSample>& samples,
               const std::string& path_file);

/// Binary PGM (P5, maxval 255), value = round(clamp(v,0,1)*255).
/// Requires width*height == len(x).
void write_pgm(const AmbientPoint& x, int width, int height, const std::string& path);

}  // namespace atlasgeo
