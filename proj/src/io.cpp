#include "wilcfar/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wilcfar::io {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& why) {
  throw std::runtime_error(path.string() + ": " + why);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(path, "cannot open");
  return in;
}

// PGM header tokens, skipping whitespace and '#' comments.
int next_pgm_int(std::istream& in, const std::filesystem::path& path) {
  for (;;) {
    int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(ch)) {
      in.get();
      continue;
    }
    break;
  }
  int v;
  if (!(in >> v)) fail(path, "malformed PGM header");
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Rasters
// ---------------------------------------------------------------------------

namespace {

Raster read_pgm(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5') fail(path, "expected binary PGM (P5)");
  const int w = next_pgm_int(in, path);
  const int h = next_pgm_int(in, path);
  const int maxval = next_pgm_int(in, path);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) fail(path, "bad PGM dimensions");
  in.get();  // single whitespace after maxval

  const std::size_t count = static_cast<std::size_t>(w) * h;
  std::vector<float> samples(count);
  if (maxval <= 255) {
    std::vector<std::uint8_t> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (!in) fail(path, "truncated PGM payload");
    for (std::size_t i = 0; i < count; ++i) samples[i] = raw[i];
  } else {
    std::vector<std::uint8_t> raw(count * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * 2));
    if (!in) fail(path, "truncated PGM payload");
    for (std::size_t i = 0; i < count; ++i)
      samples[i] = static_cast<float>((raw[2 * i] << 8) | raw[2 * i + 1]);  // big-endian
  }
  return Raster::from_samples(w, h, std::move(samples));
}

Raster read_raw_f32(const std::filesystem::path& path) {
  const std::filesystem::path hdr = path.string() + ".hdr";
  auto hin = open_in(hdr);
  int w = 0, h = 0;
  std::string dtype, endian;
  std::string key;
  while (hin >> key) {
    if (key == "width")
      hin >> w;
    else if (key == "height")
      hin >> h;
    else if (key == "dtype")
      hin >> dtype;
    else if (key == "endian")
      hin >> endian;
    else
      fail(hdr, "unknown sidecar field '" + key + "'");
  }
  if (w < 1 || h < 1) fail(hdr, "missing or bad dimensions");
  if (dtype != "f32") fail(hdr, "unsupported dtype '" + dtype + "'");
  if (endian != "little") fail(hdr, "unsupported endianness '" + endian + "'");

  const std::size_t count = static_cast<std::size_t>(w) * h;
  auto in = open_in(path, true);
  std::vector<float> samples(count);
  in.read(reinterpret_cast<char*>(samples.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (!in || in.peek() != EOF) fail(path, "payload size does not match sidecar dimensions");
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& v : samples) {
      auto u = std::bit_cast<std::uint32_t>(v);
      u = __builtin_bswap32(u);
      v = std::bit_cast<float>(u);
    }
  }
  return Raster::from_samples(w, h, std::move(samples));
}

}  // namespace

Raster read_raster(const std::filesystem::path& path) {
  if (path.extension() == ".pgm") return read_pgm(path);
  return read_raw_f32(path);
}

void write_raster_raw_f32(const std::filesystem::path& path, const Raster& raster) {
  {
    auto hdr = open_out(std::filesystem::path(path.string() + ".hdr"));
    hdr << "width " << raster.width() << "\nheight " << raster.height()
        << "\ndtype f32\nendian little\n";
  }
  auto out = open_out(path, true);
  std::vector<float> samples(raster.samples().begin(), raster.samples().end());
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& v : samples) {
      auto u = std::bit_cast<std::uint32_t>(v);
      u = __builtin_bswap32(u);
      v = std::bit_cast<float>(u);
    }
  }
  out.write(reinterpret_cast<const char*>(samples.data()),
            static_cast<std::streamsize>(samples.size() * sizeof(float)));
}

void write_raster_pgm16(const std::filesystem::path& path, const Raster& raster) {
  auto out = open_out(path, true);
  out << "P5\n" << raster.width() << " " << raster.height() << "\n65535\n";
  for (const float v : raster.samples()) {
    const double clamped = std::clamp(std::round(static_cast<double>(v)), 0.0, 65535.0);
    const auto u = static_cast<std::uint16_t>(clamped);
    const char bytes[2] = {static_cast<char>(u >> 8), static_cast<char>(u & 0xff)};
    out.write(bytes, 2);
  }
}

void write_mask_pgm(const std::filesystem::path& path, const DetectionMap& map) {
  auto out = open_out(path, true);
  out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
  std::vector<std::uint8_t> raw(map.raw().size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    switch (static_cast<PixelState>(map.raw()[i])) {
      case PixelState::detected: raw[i] = 255; break;
      case PixelState::not_evaluated: raw[i] = 128; break;
      case PixelState::clear: raw[i] = 0; break;
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

DetectionMap read_mask_pgm(const std::filesystem::path& path) {
  const Raster r = read_pgm(path);
  DetectionMap map(r.width(), r.height());
  for (int y = 0; y < r.height(); ++y)
    for (int x = 0; x < r.width(); ++x) {
      const float v = r.at(x, y);
      if (v == 255.0f)
        map.set(x, y, PixelState::detected);
      else if (v == 128.0f)
        map.set(x, y, PixelState::not_evaluated);
      else if (v == 0.0f)
        map.set(x, y, PixelState::clear);
      else
        fail(path, "mask pixel value " + std::to_string(v) + " is not 0/128/255");
    }
  return map;
}

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

GroundTruth read_ground_truth(const std::filesystem::path& path, int width, int height) {
  auto in = open_in(path);
  GroundTruth truth;
  truth.width = width;
  truth.height = height;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ShipEllipse e;
    if (!(ls >> tag >> e.cx >> e.cy >> e.a >> e.b >> e.theta_deg) || tag != "ellipse")
      fail(path, "line " + std::to_string(lineno) + ": expected 'ellipse cx cy a b theta_deg'");
    truth.ships.push_back(e);
  }
  return truth;
}

void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth) {
  auto out = open_out(path);
  out << "# ellipse <cx> <cy> <a> <b> <theta_deg>\n";
  for (const auto& s : truth.ships)
    out << "ellipse " << format_double(s.cx) << " " << format_double(s.cy) << " "
        << format_double(s.a) << " " << format_double(s.b) << " "
        << format_double(s.theta_deg) << "\n";
}

// ---------------------------------------------------------------------------
// CSV outputs
// ---------------------------------------------------------------------------

void write_detections_csv(const std::filesystem::path& path, const DetectionMap& map) {
  auto out = open_out(path);
  out << "x,y\n";
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x)
      if (map.at(x, y) == PixelState::detected) out << x << "," << y << "\n";
}

void write_eval_rows_csv(std::ostream& out, std::span<const RocRow> rows) {
  out << "design_pfa,measured_pfa,n_fa,n_c,ship_id,n_d,n_s,p_d\n";
  for (const auto& row : rows) {
    const std::string prefix = format_double(row.design_pfa) + "," +
                               format_double(row.eval.p_fa) + "," +
                               std::to_string(row.eval.n_fa) + "," +
                               std::to_string(row.eval.n_c) + ",";
    if (row.eval.ships.empty()) {
      out << prefix << ",,,\n";
      continue;
    }
    for (std::size_t si = 0; si < row.eval.ships.size(); ++si) {
      const auto& ship = row.eval.ships[si];
      out << prefix << si << "," << ship.n_d << "," << ship.n_s << ","
          << format_double(ship.p_d) << "\n";
    }
  }
}

void write_eval_rows_csv(const std::filesystem::path& path, std::span<const RocRow> rows) {
  auto out = open_out(path);
  write_eval_rows_csv(out, rows);
}

void write_pd_csv(const std::filesystem::path& path, const PdCurve& curve) {
  auto out = open_out(path);
  out << "scr_db,p_d,stderr\n";
  for (const auto& pt : curve.points)
    out << format_double(pt.scr_db) << "," << format_double(pt.p_d) << ","
        << format_double(pt.stderr_) << "\n";
}

void write_regulation_csv(const std::filesystem::path& path,
                          std::span<const RegulationRow> rows) {
  auto out = open_out(path);
  out << "family,measured_pfa,ci_lo,ci_hi\n";
  for (const auto& row : rows)
    out << row.family << "," << format_double(row.measured_pfa) << ","
        << format_double(row.ci_lo) << "," << format_double(row.ci_hi) << "\n";
}

void write_histogram_body_csv(const std::filesystem::path& path, const HistogramReport& rep) {
  auto out = open_out(path);
  out << "bin_center,empirical_density";
  for (const auto& fam : rep.families)
    if (fam.ok) out << "," << fam.label;
  out << "\n";
  for (std::size_t i = 0; i < rep.centers.size(); ++i) {
    out << format_double(rep.centers[i]) << "," << format_double(rep.density[i]);
    for (const auto& fam : rep.families)
      if (fam.ok) out << "," << format_double(fam.pdf[i]);
    out << "\n";
  }
}

void write_histogram_tail_csv(const std::filesystem::path& path, const HistogramReport& rep) {
  auto out = open_out(path);
  out << "value,empirical_exceedance";
  for (const auto& fam : rep.families)
    if (fam.ok) out << "," << fam.label;
  out << "\n";
  for (std::size_t i = 0; i < rep.edges.size(); ++i) {
    out << format_double(rep.edges[i]) << "," << format_double(rep.empirical_exceedance[i]);
    for (const auto& fam : rep.families)
      if (fam.ok) out << "," << format_double(fam.exceedance[i]);
    out << "\n";
  }
}

void write_fit_params_csv(const std::filesystem::path& path, const HistogramReport& rep) {
  auto out = open_out(path);
  out << "label,family,status,param1,param2,message\n";
  for (const auto& fam : rep.families) {
    out << fam.label << "," << family_name(fam.family) << ","
        << (fam.ok ? "ok" : "error") << ",";
    if (fam.ok)
      out << format_double(fam.p1) << "," << format_double(fam.p2) << ",";
    else
      out << ",," << '"' << fam.error << '"';
    out << "\n";
  }
}

}  // namespace wilcfar::io
