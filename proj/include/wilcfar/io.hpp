#pragma once

// File formats: PGM (8/16-bit) and raw float32 rasters with a text sidecar,
// ground-truth ellipse lists, detection masks, and the CSV outputs.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "wilcfar/clutter.hpp"
#include "wilcfar/metrics.hpp"
#include "wilcfar/sim.hpp"
#include "wilcfar/window.hpp"

namespace wilcfar::io {

// Shortest round-trip decimal form; keeps CSV output byte-stable.
std::string format_double(double v);

// PGM P5 (maxval up to 65535, 16-bit payloads big-endian) or raw float32
// little-endian with a "<path>.hdr" sidecar holding width/height/dtype/endian.
// Pixel values are used as amplitudes exactly as stored.
Raster read_raster(const std::filesystem::path& path);
void write_raster_raw_f32(const std::filesystem::path& path, const Raster&);
void write_raster_pgm16(const std::filesystem::path& path, const Raster&);

// Detection masks as PGM8: 255 = detected, 128 = not evaluated, 0 = clear.
void write_mask_pgm(const std::filesystem::path& path, const DetectionMap&);
DetectionMap read_mask_pgm(const std::filesystem::path& path);

// One ship per line: "ellipse <cx> <cy> <a> <b> <theta_deg>"; '#' comments.
GroundTruth read_ground_truth(const std::filesystem::path& path, int width, int height);
void write_ground_truth(const std::filesystem::path& path, const GroundTruth&);

void write_detections_csv(const std::filesystem::path& path, const DetectionMap&);

// Shared row format for single evaluations and ROC sweeps.
void write_eval_rows_csv(std::ostream&, std::span<const RocRow>);
void write_eval_rows_csv(const std::filesystem::path& path, std::span<const RocRow>);

void write_pd_csv(const std::filesystem::path& path, const PdCurve&);
void write_regulation_csv(const std::filesystem::path& path,
                          std::span<const RegulationRow>);

void write_histogram_body_csv(const std::filesystem::path& path, const HistogramReport&);
void write_histogram_tail_csv(const std::filesystem::path& path, const HistogramReport&);
void write_fit_params_csv(const std::filesystem::path& path, const HistogramReport&);

}  // namespace wilcfar::io
